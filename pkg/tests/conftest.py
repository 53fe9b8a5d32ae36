from hypothesis import HealthCheck, settings

# first calls compile the numba kernels, so per-example timing is meaningless
settings.register_profile(
    "default", deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")
