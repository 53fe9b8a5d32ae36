"""Acceptance criteria, one PASS/FAIL line each.

Run ``python3 tests/test_acceptance.py`` for the summary alone, or let
pytest collect it. Comparisons are exact set equality; every suite must
also finish inside SUITE_BUDGET_SECONDS.
"""

from __future__ import annotations

import io
import json
import re
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

import oracles  # noqa: E402
from cases import complete_union_counterexample, union_counterexample  # noqa: E402
from strategies import all_complete_choices, make_space, seeded_dataset  # noqa: E402

from jointchoice import (  # noqa: E402
    AdditiveUtility,
    MenuDomain,
    ModelSpec,
    PreferenceRelation,
    ProductSpace,
    additive_choice,
    gen_random,
    is_rationalizable,
    is_S_rich,
    is_S_separable_preference,
    maximal_elements,
    rationalizability_via_selective_family,
    revealed_choice,
    revealed_preference,
)
from jointchoice.cli import run  # noqa: E402
from jointchoice.errors import NotSingleValued  # noqa: E402
from jointchoice.golden import (  # noqa: E402
    GOLDEN,
    betweenness_example,
    consumption,
    efficient_allocation,
    fair_allocation,
    inclusion_counterexample,
    intersection_counterexample,
    rationalizable_not_rich,
    rationalizable_not_separable,
    rich_not_rationalizable,
    separable_not_rationalizable,
    status_quo,
)
from jointchoice.selective import is_selective, minimal_selective_family, sel_size  # noqa: E402
from jointchoice.separability import (  # noqa: E402
    check_menus_betweenness,
    check_S_betweenness,
    is_S_separable,
    is_separable,
    is_separable_bruteforce,
    separable_subsets,
)
from jointchoice import DimensionSet  # noqa: E402

DATA = Path(__file__).resolve().parent.parent / "data"

# pinned tolerances
SUITE_BUDGET_SECONDS = 60.0
SEL_TABLE = [1, 2, 3, 4, 4, 4, 5, 5, 5, 5]
SELECTIVE_CHECK_MAX_DIMS = 12
MINIMALITY_CHECK_MAX_DIMS = 6
SEEDED_DATASETS = 1000
RANDOM_COMPLETE_DATASETS = 300
ADDITIVE_SAMPLES = 200


def words(D, alts):
    return sorted("".join(D.space.alt_labels(x)) for x in alts)


def sub(D, *labels):
    return D.dims.subset(list(labels))


def menu(D, *sets):
    return D.space.menu([list(s) for s in sets])


# --- criteria -----------------------------------------------------------------


def criterion_1():
    """Golden examples."""
    checks = {}

    D = consumption()
    r3 = is_S_separable(D, sub(D, "3"))
    induced = {tuple(map(tuple, D.space.menu_labels(A))): words(D, c) for A, c in r3.induced.table.items()} if r3.holds else None
    checks["consumption {3}-separable, induced c_3"] = r3.holds and induced == {
        (("milk", "butter"),): ["milk"],
        (("butter",),): ["butter"],
    }
    r2 = is_S_separable(D, sub(D, "2"))
    checks["consumption {2} witness"] = (
        not r2.holds and r2.witness["menu_a"] == D.menus[0] and r2.witness["menu_b"] == D.menus[1] and r2.witness.replay(D)
    )

    D = inclusion_counterexample()
    checks["inclusion example: {1} fails"] = not is_S_separable(D, sub(D, "1")).holds
    checks["inclusion example: {2} holds"] = is_S_separable(D, sub(D, "2")).holds
    checks["inclusion example: {1,2} holds"] = is_S_separable(D, sub(D, "1", "2")).holds
    checks["inclusion example: Q holds"] = is_S_separable(D, D.dims.full).holds

    D = intersection_counterexample()
    S, T = sub(D, "1", "2"), sub(D, "2", "3")
    checks["intersection: betweenness false"] = not check_menus_betweenness(D, S, T).holds
    checks["intersection: S, T separable, S&T not"] = (
        is_S_separable(D, S).holds and is_S_separable(D, T).holds and not is_S_separable(D, S & T).holds
    )

    D = rationalizable_not_separable()
    checks["joint-vs-separate example: c rationalizable, not separable"] = is_rationalizable(D).holds and not is_separable(D).holds
    D = separable_not_rationalizable()
    checks["joint-vs-separate example: c' separable, not rationalizable"] = is_separable(D).holds and not is_rationalizable(D).holds
    mx = words(D, maximal_elements(menu(D, "ab", "xy"), revealed_preference(D)))
    checks["joint-vs-separate example: c' max-set {ax,ay,by} at (ab,xy)"] = mx == ["ax", "ay", "by"]

    D = rich_not_rationalizable()
    checks["richness example, dataset 1"] = (
        is_S_separable(D, sub(D, "1")).holds
        and D.is_complete
        and is_S_rich(D, sub(D, "1")).holds
        and not is_rationalizable(D).holds
    )
    D = rationalizable_not_rich()
    R = revealed_preference(D)
    p = is_S_separable_preference(R, sub(D, "2"))
    L = lambda w: D.space.alternative(list(w))
    checks["richness example, dataset 2"] = (
        is_rationalizable(D).holds
        and is_S_separable(D, sub(D, "2")).holds
        and not is_S_rich(D, sub(D, "2")).holds
        and not p.holds
        and p.witness.replay(R)
        and R.strictly_prefers(L("ax"), L("ay"))
        and R.strictly_prefers(L("by"), L("bx"))
    )

    D = status_quo()
    checks["status quo: {2} fails"] = not is_S_separable(D, sub(D, "2")).holds
    checks["fair allocation: c^E separable, c^F not {1}-separable"] = (
        is_separable(efficient_allocation()).holds and not is_S_separable(fair_allocation(), fair_allocation().dims.singleton(0)).holds
    )
    D = betweenness_example()
    fam = [D.dims.subset(m) for m in (["1", "2"], ["2", "3"], ["1", "3"])]
    checks["worked S-betweenness example"] = check_S_betweenness(D, fam).holds

    failed = [k for k, ok in checks.items() if not ok]
    detail = f"{len(checks) - len(failed)}/{len(checks)} checks"
    if failed:
        detail += "; failing: " + "; ".join(failed)
    return not failed, detail


def criterion_2():
    """sel(Q) table, construction, minimality."""
    table_ok = [sel_size(n) for n in range(1, 11)] == SEL_TABLE
    built_ok = all(
        len(F) == sel_size(n) and is_selective(F.members, F.owner).holds
        for n in range(1, SELECTIVE_CHECK_MAX_DIMS + 1)
        for F in [minimal_selective_family(DimensionSet(tuple(str(q + 1) for q in range(n))))]
    )
    minimal_ok = all(
        not oracles.exists_selective_of_size(n, sel_size(n) - 1) for n in range(2, MINIMALITY_CHECK_MAX_DIMS + 1)
    )
    return table_ok and built_ok and minimal_ok, f"table={table_ok} construction={built_ok} minimality={minimal_ok}"


def criterion_3():
    """Singleton decider agrees with brute force."""
    bad = []
    for name, build in GOLDEN.items():
        D = build()
        if is_separable(D).holds != is_separable_bruteforce(D):
            bad.append(name)
    for seed in range(SEEDED_DATASETS):
        D = seeded_dataset(seed)
        if is_separable(D).holds != is_separable_bruteforce(D):
            bad.append(f"seed {seed}")
    count = 0
    for D in all_complete_choices(make_space([2, 2]), single_valued=True):
        count += 1
        if is_separable(D).holds != is_separable_bruteforce(D):
            bad.append("enumeration")
    detail = f"{len(GOLDEN)} golden, {SEEDED_DATASETS} seeded, {count} enumerated; disagreements={len(bad)}"
    return not bad and count == 64, detail


def _random_complete(seed):
    rng = np.random.default_rng(seed)
    sizes = [int(rng.integers(1, 3)) for _ in range(int(rng.integers(2, 4)))]
    sp = make_space(sizes)
    single = bool(rng.integers(2))
    return gen_random(ModelSpec("random", {"single_valued": single}, seed), MenuDomain.complete(sp))


def _additive(rng):
    sp = make_space([int(rng.integers(1, 4)) for _ in range(int(rng.integers(1, 4)))])
    tables = [{lab: int(rng.integers(0, 4)) for lab in u} for u in sp.universes]
    U = AdditiveUtility.from_functions(
        sp, [sp.dims.singleton(q) for q in range(sp.n)], [lambda t, m=m: m[t[0]] for m in tables]
    )
    return sp, U


def criterion_4():
    """Structural results checked as properties."""
    lattice_bad = 0
    for seed in range(RANDOM_COMPLETE_DATASETS):
        D = _random_complete(seed)
        good = {S.mask for S in separable_subsets(D)}
        for a in good:
            for b in good:
                if (a | b) not in good or (a & b and (a & b) not in good):
                    lattice_bad += 1
    add_bad = 0
    rng = np.random.default_rng(2024)
    for _ in range(ADDITIVE_SAMPLES):
        sp, U = _additive(rng)
        R = U.to_preference()
        menus = sp.complete_menus()
        c = revealed_choice(R, menus)
        if not is_separable(additive_choice(U, menus)).holds:
            add_bad += 1
        for S in sp.dims.all_subsets():
            if is_S_separable_preference(R, S).holds and not is_S_separable(c, S).holds:
                add_bad += 1
    t4ii_bad = 0
    sp = make_space([2, 2])
    for D in all_complete_choices(sp, single_valued=False):
        if not is_rationalizable(D).holds:
            continue
        R = revealed_preference(D)
        for q in range(2):
            S = sp.dims.singleton(q)
            if is_S_separable(D, S).holds and is_S_rich(D, S).holds and not is_S_separable_preference(R, S).holds:
                t4ii_bad += 1
    ok = not (lattice_bad or add_bad or t4ii_bad)
    return ok, f"lattice violations={lattice_bad}, additive violations={add_bad}, rich transfer violations={t4ii_bad}"


def criterion_5():
    """Selective-family rationalizability shortcut: scope check."""
    sp = make_space([2, 2])
    fam = [sp.dims.singleton(0), sp.dims.singleton(1)]
    checked = disagreements = 0
    for D in all_complete_choices(sp, single_valued=True):
        if not is_separable(D).holds:
            continue
        checked += 1
        v = rationalizability_via_selective_family(D, fam)
        if v.rationalizable != is_rationalizable(D).holds or v.mismatch:
            disagreements += 1
    D = separable_not_rationalizable()
    try:
        rationalizability_via_selective_family(D, fam)
        refused = False
    except NotSingleValued:
        refused = True
    naive = rationalizability_via_selective_family(D, [D.dims.singleton(0), D.dims.singleton(1)], enforce_single_valued=False)
    guard = refused and naive.rationalizable and naive.mismatch and not naive.direct.holds
    return checked > 0 and disagreements == 0 and guard, f"{checked} separable instances, disagreements={disagreements}, c' guard={guard}"


_TIMING = re.compile(r',?\s*"timing": \{[^}]*\}')


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue()


def criterion_6():
    """CLI examples and report determinism."""
    cprime = DATA / "separable_not_rationalizable.json"
    c1, o1 = _run("separability", cprime, "--all-singletons")
    ok1 = c1 == 0 and json.loads(o1)["verdict"] == "separable"
    c2, o2 = _run("rationalizable", cprime)
    rep = json.loads(o2)
    D = separable_not_rationalizable()
    w = is_rationalizable(D).witness
    ok2 = c2 == 1 and rep["witness"]["menu"] == {"1": ["a", "b"], "2": ["x", "y"]} and w.replay(D)
    c3, o3 = _run("selective", "--dims", 10)
    ok3 = c3 == 0 and len(json.loads(o3)["family"]["members"]) == 5
    same = all(_TIMING.sub("", _run(*a)[1]) == _TIMING.sub("", _run(*a)[1]) for a in [
        ("separability", cprime, "--all-singletons"),
        ("rationalizable", cprime),
        ("selective", "--dims", 10),
    ])
    return ok1 and ok2 and ok3 and same, f"separability={ok1} rationalizable={ok2} selective={ok3} deterministic={same}"


CRITERIA = [
    (1, "golden examples", criterion_1),
    (2, "sel table and minimal selective families", criterion_2),
    (3, "singleton decider equals brute force", criterion_3),
    (4, "property suites on complete and additive data", criterion_4),
    (5, "selective-family rationalizability scope", criterion_5),
    (6, "CLI conformance", criterion_6),
]


def findings():
    """Places where the computed answer differs from the printed claim."""
    out = []
    D = separable_not_rationalizable()
    mx = words(D, maximal_elements(menu(D, "ab", "xy"), revealed_preference(D)))
    out.append(f"c' max-set at (ab,xy) is {{{','.join(mx)}}} (strict part of the revealed preference is empty)")
    D = inclusion_counterexample()
    out.append(
        "the inclusion example is not {1,2}-separable: both menus project to (ab,xy) with images {ax,bx} vs {ax}"
        if not is_S_separable(D, sub(D, "1", "2")).holds
        else "the inclusion example is {1,2}-separable"
    )
    for name, D in (("union counterexample", union_counterexample()), ("complete union counterexample", complete_union_counterexample())):
        singles = all(is_S_separable(D, D.dims.singleton(q)).holds for q in range(3))
        out.append(
            f"{name}: every {{q}}-separable={singles}, {{1,2}}-separable={is_S_separable(D, sub(D, '1', '2')).holds}"
        )
    sp = ProductSpace.from_labels(["1", "2"], [["a", "b"], ["x", "y"]])
    ax, ay, by = (sp.alternative(list(w)) for w in ("ax", "ay", "by"))
    R = PreferenceRelation.from_pairs(sp, [(ax, ay), (by, ax)])
    c = revealed_choice(R, sp.complete_menus())
    out.append(
        "relation {ax>ay, by>ax}: {1}-separable preference="
        f"{is_S_separable_preference(R, sp.dims.singleton(0)).holds}, revealed choice {{1}}-separable="
        f"{is_S_separable(c, sp.dims.singleton(0)).holds}"
    )
    return out


def evaluate(number):
    _, _, fn = CRITERIA[number - 1]
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    within = elapsed <= SUITE_BUDGET_SECONDS
    return ok and within, f"{detail}; {elapsed:.1f}s (budget {SUITE_BUDGET_SECONDS:.0f}s)"


def line(number, ok, detail):
    name = CRITERIA[number - 1][1]
    return f"{'PASS' if ok else 'FAIL'} criterion {number} ({name}): {detail}"


@pytest.mark.parametrize("number", [n for n, _, _ in CRITERIA])
def test_criterion(number, capsys):
    ok, detail = evaluate(number)
    with capsys.disabled():
        print("\n" + line(number, ok, detail))
    assert ok, detail


def test_findings(capsys):
    with capsys.disabled():
        for f in findings():
            print("\nFINDING " + f)


if __name__ == "__main__":
    failures = 0
    for n, _, _ in CRITERIA:
        ok, detail = evaluate(n)
        failures += not ok
        print(line(n, ok, detail))
    for f in findings():
        print("FINDING " + f)
    sys.exit(1 if failures else 0)
