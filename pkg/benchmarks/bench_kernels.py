"""Time the numba kernels against their pure-numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--sizes 64 256 1024]

Each kernel runs once untimed so JIT compilation is excluded, then the best
of ``--repeat`` runs is reported. Outputs are compared before timing.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from jointchoice import _kernels as K


def relation(rng, n, density):
    M = rng.random((n, n)) < density
    np.fill_diagonal(M, True)
    return M


def menus(rng, n, count):
    feas, chosen = [], []
    for _ in range(count):
        f = np.sort(rng.choice(n, size=int(rng.integers(1, min(n, 64) + 1)), replace=False))
        feas.append(f)
        chosen.append(rng.choice(f, size=int(rng.integers(1, len(f) + 1)), replace=False))
    fp = np.cumsum([0] + [len(f) for f in feas]).astype(np.int64)
    cp = np.cumsum([0] + [len(c) for c in chosen]).astype(np.int64)
    return n, fp, np.concatenate(feas).astype(np.int64), cp, np.concatenate(chosen).astype(np.int64)


def cases(rng, n):
    M = relation(rng, n, 4.0 / n)
    S = K.strict_part_np(M)
    idx = np.sort(rng.choice(n, size=n // 2, replace=False)).astype(np.int64)
    m = 4 * n
    keys = (rng.integers(0, 2, m), rng.integers(0, n, m), rng.integers(0, n, m))
    keys = tuple(k.astype(np.int64) for k in keys)
    return {
        "revealed_matrix": menus(rng, n, 4 * n),
        "strict_part": (M,),
        "maximal_mask": (S, idx),
        "find_cycle": (S,),
        "betweenness_violation": keys,
    }


def same(a, b):
    if isinstance(a, tuple):
        return tuple(a) == tuple(b)
    return np.array_equal(a, b)


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--sizes", type=int, nargs="+", default=[64, 256, 1024])
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    if not K._HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<24}{'N':>6}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for n in args.sizes:
        for name, call_args in cases(rng, n).items():
            f_np, f_nb = getattr(K, name + "_np"), getattr(K, name + "_nb")
            if not same(f_np(*call_args), f_nb(*call_args)):
                raise SystemExit(f"{name} disagrees at N={n}")
            t_np = min(timeit.repeat(lambda: f_np(*call_args), number=1, repeat=args.repeat))
            t_nb = min(timeit.repeat(lambda: f_nb(*call_args), number=1, repeat=args.repeat))
            print(f"{name:<24}{n:>6}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
