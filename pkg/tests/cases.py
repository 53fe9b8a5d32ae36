"""Hand-built datasets used by several test modules."""

from __future__ import annotations

import itertools

from jointchoice import JointChoiceDataset, ProductSpace


def letters_dataset(dims, universes, table):
    space = ProductSpace.from_labels(dims, [list(u) for u in universes])
    pairs = [
        (space.menu([list(s) for s in sets]), [space.alternative(list(x)) for x in chosen])
        for sets, chosen in table
    ]
    return JointChoiceDataset.from_pairs(space, pairs)


def union_counterexample():
    """{1}-, {2}- and {3}-separable, yet not {1,2}-separable."""
    return letters_dataset(
        ["1", "2", "3"],
        ["ab", "xy", "pq"],
        [(("ab", "xy", "p"), ["axp", "byp"]), (("ab", "xy", "q"), ["ayq", "bxq"])],
    )


def complete_union_counterexample():
    """Same failure on the complete domain over {a,b}^3."""
    special = {
        ("ab", "ab", "a"): ["aaa", "bba"],
        ("ab", "ab", "b"): ["abb", "bab"],
        ("ab", "ab", "ab"): ["aaa", "bbb"],
    }
    table = []
    for sets in itertools.product(["a", "b", "ab"], repeat=3):
        chosen = special.get(sets) or ["".join(t) for t in itertools.product(*sets)]
        table.append((sets, chosen))
    return letters_dataset(["1", "2", "3"], ["ab", "ab", "ab"], table)
