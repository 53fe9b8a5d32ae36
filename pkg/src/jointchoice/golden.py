"""Reference datasets from the worked examples of the joint-choice model.

Single-letter item labels let menus be written as strings: ``("ab", "xy")``
is the menu ({a,b}, {x,y}) and ``"ax"`` the alternative (a, x).
"""

from __future__ import annotations

from pathlib import Path
from typing import Callable

from .core import JointChoiceDataset, ProductSpace, dump_dataset
from .generators import MenuDomain, ModelSpec, gen_envy_free, gen_status_quo


def _letters(dims, universes, table, provenance=None) -> JointChoiceDataset:
    space = ProductSpace.from_labels(dims, [list(u) for u in universes])
    pairs = [
        (space.menu([list(s) for s in sets]), [space.alternative(list(x)) for x in chosen])
        for sets, chosen in table
    ]
    return JointChoiceDataset.from_pairs(space, pairs, provenance)


def _square(rows: dict[tuple[str, str], list[str]]) -> JointChoiceDataset:
    """A joint choice on X_1 = ab, X_2 = xy given as a table of letter pairs."""
    return _letters(["1", "2"], ["ab", "xy"], [(k, v) for k, v in rows.items()])


def consumption() -> JointChoiceDataset:
    """Snacks, beverages and dairy; {3}-separable but not {2}-separable."""
    space = ProductSpace.from_labels(
        ["1", "2", "3"], [["scones", "cantucci"], ["tea", "coffee"], ["milk", "butter"]]
    )
    table = [
        ([["scones"], ["tea", "coffee"], ["milk", "butter"]], [["scones", "tea", "milk"]]),
        ([["cantucci"], ["tea", "coffee"], ["milk", "butter"]], [["cantucci", "coffee", "milk"]]),
        ([["scones"], ["tea", "coffee"], ["butter"]], [["scones", "tea", "butter"]]),
    ]
    return JointChoiceDataset.from_pairs(
        space, [(space.menu(sets), [space.alternative(x) for x in c]) for sets, c in table]
    )


def inclusion_counterexample() -> JointChoiceDataset:
    """Q- and {2}-separable but neither {1}- nor {1,2}-separable."""
    return _letters(
        ["1", "2", "3"],
        ["ab", "xy", "pq"],
        [(("ab", "xy", "p"), ["axp", "bxp"]), (("ab", "xy", "q"), ["axq"])],
    )


def intersection_counterexample() -> JointChoiceDataset:
    """{1,2}- and {2,3}-separable, not {2}-separable; betweenness fails."""
    return _letters(
        ["1", "2", "3"],
        ["ab", "pq", "xy"],
        [(("ab", "pq", "x"), ["bpx"]), (("a", "pq", "xy"), ["aqy"])],
    )


def rationalizable_not_separable() -> JointChoiceDataset:
    return _square(
        {
            ("ab", "xy"): ["ax", "by"],
            ("ab", "x"): ["ax"],
            ("ab", "y"): ["by"],
            ("a", "xy"): ["ax"],
            ("a", "x"): ["ax"],
            ("a", "y"): ["ay"],
            ("b", "xy"): ["by"],
            ("b", "x"): ["bx"],
            ("b", "y"): ["by"],
        }
    )


def separable_not_rationalizable() -> JointChoiceDataset:
    return _square(
        {
            ("ab", "xy"): ["ax", "by"],
            ("ab", "x"): ["ax", "bx"],
            ("ab", "y"): ["ay", "by"],
            ("a", "xy"): ["ax", "ay"],
            ("a", "x"): ["ax"],
            ("a", "y"): ["ay"],
            ("b", "xy"): ["bx", "by"],
            ("b", "x"): ["bx"],
            ("b", "y"): ["by"],
        }
    )


def rich_not_rationalizable() -> JointChoiceDataset:
    """Complete, {1}-separable, not rationalizable."""
    return _square(
        {
            ("ab", "xy"): ["ax"],
            ("ab", "x"): ["ax"],
            ("ab", "y"): ["ay"],
            ("a", "xy"): ["ax", "ay"],
            ("a", "x"): ["ax"],
            ("a", "y"): ["ay"],
            ("b", "xy"): ["by"],
            ("b", "x"): ["bx"],
            ("b", "y"): ["by"],
        }
    )


def rationalizable_not_rich() -> JointChoiceDataset:
    """Rationalizable and {2}-separable on a domain that is not {2}-rich."""
    return _square({("ab", "xy"): ["ax", "by"], ("ab", "x"): ["ax"]})


def status_quo() -> JointChoiceDataset:
    """x and y both beat z, x and y incomparable; menus (xz,xy) and (yz,xy)."""
    space = ProductSpace.from_labels(["1", "2"], [list("xyz"), list("xyz")])
    spec = ModelSpec("status_quo", {"dominance": [["x", "z"], ["y", "z"]]})
    return gen_status_quo(spec, MenuDomain(space, (space.menu([list("xz"), list("xy")]), space.menu([list("yz"), list("xy")]))))


def _allocation_space() -> ProductSpace:
    return ProductSpace.from_labels(["1", "2"], [["a", "b"], ["a", "b"]])


def efficient_allocation() -> JointChoiceDataset:
    spec = ModelSpec("envy_free", {"preferences": ["a", "b"], "rule": "efficient"})
    return gen_envy_free(spec, MenuDomain.complete(_allocation_space()))


def fair_allocation() -> JointChoiceDataset:
    spec = ModelSpec("envy_free", {"preferences": ["a", "b"], "rule": "fair"})
    return gen_envy_free(spec, MenuDomain.complete(_allocation_space()))


def betweenness_example() -> JointChoiceDataset:
    """Menus (a,c,e), (a,b,f), (a,c,f); every menu is a single alternative."""
    return _letters(
        ["1", "2", "3"],
        ["a", "bcd", "ef"],
        [(("a", "c", "e"), ["ace"]), (("a", "b", "f"), ["abf"]), (("a", "c", "f"), ["acf"])],
    )


GOLDEN: dict[str, Callable[[], JointChoiceDataset]] = {
    "consumption": consumption,
    "inclusion_counterexample": inclusion_counterexample,
    "intersection_counterexample": intersection_counterexample,
    "rationalizable_not_separable": rationalizable_not_separable,
    "separable_not_rationalizable": separable_not_rationalizable,
    "rich_not_rationalizable": rich_not_rationalizable,
    "rationalizable_not_rich": rationalizable_not_rich,
    "status_quo": status_quo,
    "efficient_allocation": efficient_allocation,
    "fair_allocation": fair_allocation,
    "betweenness_example": betweenness_example,
}


def write_golden(directory: str | Path) -> list[Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, build in GOLDEN.items():
        path = out / f"{name}.json"
        dump_dataset(build(), path)
        paths.append(path)
    return paths
