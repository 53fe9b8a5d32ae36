"""S-separability, induced joint choices and the domain conditions
(menus betweenness, chained betweenness over a selective family)."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import _kernels
from .core import (
    Alternative,
    DimSubset,
    JointChoiceDataset,
    Menu,
    ProductSpace,
    _positions,
    menu_document,
    project_choice_image,
    projected_menu_family,
)
from .errors import (
    EmptySubset,
    LabellingSearchExceeded,
    NotSeparable,
    NotSingleValued,
    ReconstructionMismatch,
    TooManyDimensions,
)
from .witness import Witness, WitnessKind

BRUTEFORCE_MAX_DIMS = 20
DEFAULT_LABELLING_CAP = math.factorial(8)


@dataclass(frozen=True)
class InducedChoice:
    """The joint choice induced on ``scope``: projected menu -> projected image."""

    scope: DimSubset
    table: dict[Menu, tuple[Alternative, ...]]

    def __getitem__(self, A_S: Menu) -> tuple[Alternative, ...]:
        return self.table[A_S]

    def as_dataset(self, space: ProductSpace) -> JointChoiceDataset:
        """Re-express as a dataset over the dimensions of ``scope`` only."""
        sub = space.subspace(self.scope)
        return JointChoiceDataset.from_pairs(
            sub, [(space.reindex(A, sub), [space.reindex(x, sub) for x in c]) for A, c in self.table.items()]
        )

    def to_json(self, space: ProductSpace) -> list[dict[str, Any]]:
        return [
            {"menu": menu_document(space, A), "choice": [space.alt_labels(x) for x in c]}
            for A, c in self.table.items()
        ]


@dataclass(frozen=True)
class SeparabilityReport:
    subset: DimSubset
    holds: bool
    witness: Witness | None = None
    induced: InducedChoice | None = None

    def to_json(self, space: ProductSpace) -> dict[str, Any]:
        out: dict[str, Any] = {"subset": list(self.subset.labels), "holds": self.holds}
        if self.holds:
            out["induced"] = self.induced.to_json(space)
        else:
            out["witness"] = self.witness.to_json(space)
        return out


def _require_nonempty(S: DimSubset) -> None:
    if not S:
        raise EmptySubset("S must be a nonempty set of dimensions")


def is_S_separable(D: JointChoiceDataset, S: DimSubset) -> SeparabilityReport:
    """Group menus by their projection on S and compare projected choices.

    Holds iff every group shares one projected image; the common images are
    the induced choice. On failure the witness is the lexicographically first
    violating menu pair.
    """
    _require_nonempty(S)
    pos = _positions(D.dims.full, S)
    images = [tuple(tuple(x.entries[p] for p in pos) for x in c) for c in D.choices]
    images = [tuple(sorted(set(im))) for im in images]
    best: tuple[int, int] | None = None
    table: dict[Menu, tuple[Alternative, ...]] = {}
    for cls in projected_menu_family(D, S):
        src = cls.sources
        ref = images[src[0]]
        if all(images[i] == ref for i in src[1:]):
            table[cls.menu] = tuple(Alternative(S, k) for k in ref)
            continue
        for a, i in enumerate(src):
            j = next((j for j in src[a + 1 :] if images[j] != images[i]), None)
            if j is not None:
                if best is None or (i, j) < best:
                    best = (i, j)
                break
    if best is None:
        return SeparabilityReport(S, True, induced=InducedChoice(S, table))
    i, j = best
    w = Witness(
        WitnessKind.SEPARABILITY,
        {
            "subset": S,
            "menu_a": D.menus[i],
            "menu_b": D.menus[j],
            "image_a": project_choice_image(D.choices[i], S),
            "image_b": project_choice_image(D.choices[j], S),
        },
    )
    return SeparabilityReport(S, False, witness=w)


@dataclass(frozen=True)
class SeparabilityVerdict:
    """Separable iff every report holds.

    ``method`` is ``"singletons"`` when the per-dimension test is exact for
    the data and ``"exhaustive"`` when every nonempty S had to be checked.
    """

    holds: bool
    reports: tuple[SeparabilityReport, ...]
    method: str = "singletons"

    @property
    def witness(self) -> Witness | None:
        return next((r.witness for r in self.reports if not r.holds), None)

    @property
    def failing(self) -> tuple[DimSubset, ...]:
        return tuple(r.subset for r in self.reports if not r.holds)


def is_product_image(image: tuple[Alternative, ...]) -> bool:
    """True iff the set equals the product of its coordinate projections."""
    if len(image) <= 1:
        return True
    size = 1
    for col in zip(*(x.entries for x in image)):
        size *= len(set(col))
    return size == len(image)


def singletons_suffice(D: JointChoiceDataset) -> bool:
    """Whether {q}-separability for every q already implies separability.

    It does when every chosen set is the product of its projections (in
    particular for single-valued data), and trivially when |Q| <= 2. A
    multi-valued choice can otherwise be {q}-separable for each q and still
    fail on a larger S, because equal coordinate projections do not force
    equal joint projections.
    """
    return len(D.dims) <= 2 or all(is_product_image(c) for c in D.choices)


def is_separable(D: JointChoiceDataset) -> SeparabilityVerdict:
    """Exact separability test; per-dimension when that is sound, else every S."""
    if singletons_suffice(D):
        reports = tuple(is_S_separable(D, D.dims.singleton(q)) for q in range(len(D.dims)))
        return SeparabilityVerdict(all(r.holds for r in reports), reports, "singletons")
    if len(D.dims) > BRUTEFORCE_MAX_DIMS:
        raise TooManyDimensions(
            f"{len(D.dims)} dimensions with non-product choice sets exceed the exhaustive limit"
        )
    reports = tuple(is_S_separable(D, S) for S in D.dims.all_subsets())
    return SeparabilityVerdict(all(r.holds for r in reports), reports, "exhaustive")


def is_separable_bruteforce(D: JointChoiceDataset) -> bool:
    """S-separability for every nonempty S; the oracle for the singleton test."""
    n = len(D.dims)
    if n > BRUTEFORCE_MAX_DIMS:
        raise TooManyDimensions(f"{n} dimensions exceed the brute-force limit of {BRUTEFORCE_MAX_DIMS}")
    return all(is_S_separable(D, S).holds for S in D.dims.all_subsets())


def separable_subsets(D: JointChoiceDataset) -> list[DimSubset]:
    """Every nonempty S for which D is S-separable (exhaustive)."""
    if len(D.dims) > BRUTEFORCE_MAX_DIMS:
        raise TooManyDimensions(f"{len(D.dims)} dimensions exceed the brute-force limit")
    return [S for S in D.dims.all_subsets() if is_S_separable(D, S).holds]


def decompose_components(D: JointChoiceDataset) -> list[dict[Menu, Alternative]]:
    """Per-dimension choice functions whose product reproduces a single-valued
    separable dataset. Index ``q`` of the result maps one-dimensional menus to
    the chosen one-dimensional alternative."""
    if not D.single_valued:
        raise NotSingleValued("per-dimension decomposition needs a single-valued dataset")
    verdict = is_separable(D)
    if not verdict.holds:
        raise NotSeparable(f"dataset is not {{q}}-separable for q in {list(verdict.failing)}")
    comps = []
    for r in verdict.reports:
        comps.append({A: image[0] for A, image in r.induced.table.items()})
    full = D.dims.full
    for A, c in D:
        rebuilt = Alternative(
            full, tuple(comps[q][Menu(D.dims.singleton(q), (A.sets[q],))].entries[0] for q in range(len(D.dims)))
        )
        if (rebuilt,) != c:
            raise ReconstructionMismatch(f"menu {D.space.menu_labels(A)} does not decompose")
    return comps


# --- menus betweenness --------------------------------------------------------


@dataclass(frozen=True)
class BetweennessResult:
    s: DimSubset
    t: DimSubset
    holds: bool
    witness: Witness | None = None
    vacuous_intersection: bool = False

    def to_json(self, space: ProductSpace) -> dict[str, Any]:
        out: dict[str, Any] = {"s": list(self.s.labels), "t": list(self.t.labels), "holds": self.holds}
        if self.vacuous_intersection:
            out["note"] = "S and T are disjoint; every pair agrees on the empty projection"
        if self.witness is not None:
            out["witness"] = self.witness.to_json(space)
        return out


def _intern_keys(D: JointChoiceDataset, S: DimSubset) -> np.ndarray:
    pos = _positions(D.dims.full, S)
    ids: dict[tuple[int, ...], int] = {}
    return np.array([ids.setdefault(tuple(A.sets[p] for p in pos), len(ids)) for A in D.menus], dtype=np.int64)


def check_menus_betweenness(D: JointChoiceDataset, S: DimSubset, T: DimSubset) -> BetweennessResult:
    """For every unordered pair of menus agreeing on S&T, look for a menu that
    agrees with one of them on S and with the other on T.

    One orientation per pair suffices: the separability transfer this
    condition serves is symmetric in the two menus. The witness is the first
    pair (in dataset order) with no such menu in either orientation.
    """
    if not S and not T:
        raise EmptySubset("S and T cannot both be empty")
    i, j = _kernels.betweenness_violation(_intern_keys(D, S & T), _intern_keys(D, S), _intern_keys(D, T))
    vacuous = not (S & T)
    if i < 0:
        return BetweennessResult(S, T, True, vacuous_intersection=vacuous)
    w = Witness(WitnessKind.BETWEENNESS, {"s": S, "t": T, "menu_a": D.menus[i], "menu_b": D.menus[j]})
    return BetweennessResult(S, T, False, w, vacuous)


@dataclass(frozen=True)
class SBetweennessResult:
    """Outcome of the chained-betweenness search.

    ``labellings[q]`` lists member indices in the order that works for q.
    """

    holds: bool
    labellings: dict[int, tuple[int, ...]] = field(default_factory=dict)
    failing_dimension: int | None = None
    witness: Witness | None = None

    def to_json(self, space: ProductSpace, family=None) -> dict[str, Any]:
        out: dict[str, Any] = {"holds": self.holds}
        if family is not None:
            out["labellings"] = {
                space.dims.labels[q]: [list(family.members[i].labels) for i in order]
                for q, order in self.labellings.items()
            }
        if self.failing_dimension is not None:
            out["failing_dimension"] = space.dims.labels[self.failing_dimension]
        if self.witness is not None:
            out["witness"] = self.witness.to_json(space)
        return out


def check_S_betweenness(D: JointChoiceDataset, family, cap: int = DEFAULT_LABELLING_CAP) -> SBetweennessResult:
    """Search, for each q, a labelling of the members containing q whose
    chained pairs all satisfy menus betweenness.

    Raises LabellingSearchExceeded when some q would need more than ``cap``
    permutations; that outcome is inconclusive, not a failure.
    """
    from .selective import as_family

    F = as_family(family, D.dims)
    memo: dict[tuple[int, int], BetweennessResult] = {}

    def between(S: DimSubset, T: DimSubset) -> BetweennessResult:
        key = (S.mask, T.mask)
        if key not in memo:
            memo[key] = check_menus_betweenness(D, S, T)
        return memo[key]

    for q in range(len(D.dims)):
        members = F.index_sets[q]
        if math.factorial(len(members)) > cap:
            raise LabellingSearchExceeded(
                f"dimension {D.dims.labels[q]!r} needs {len(members)}! labellings (cap {cap})", q, len(members)
            )
    labellings: dict[int, tuple[int, ...]] = {}
    for q in range(len(D.dims)):
        first_failure: Witness | None = None
        found = None
        for order in itertools.permutations(F.index_sets[q]):
            cur = F.members[order[0]]
            ok = True
            for k in order[1:]:
                r = between(cur, F.members[k])
                if not r.holds:
                    if first_failure is None:
                        first_failure = r.witness
                    ok = False
                    break
                cur = cur & F.members[k]
            if ok:
                found = order
                break
        if found is None:
            return SBetweennessResult(False, labellings, q, first_failure)
        labellings[q] = found
    return SBetweennessResult(True, labellings)


@dataclass(frozen=True)
class SelectiveSeparabilityVerdict:
    """``separable`` is a certificate; ``inconclusive`` carries the unmet condition."""

    status: str
    reason: str
    member_reports: tuple[SeparabilityReport, ...]
    betweenness: SBetweennessResult | None
    basis: str = "selective-family sufficient condition"

    @property
    def separable(self) -> bool:
        return self.status == "separable"


def separability_via_selective_family(D: JointChoiceDataset, family, cap: int = DEFAULT_LABELLING_CAP) -> SelectiveSeparabilityVerdict:
    """Certify separability from S-separability of each family member plus
    chained betweenness. Never reports non-separability."""
    from .selective import as_family

    F = as_family(family, D.dims)
    reports = tuple(is_S_separable(D, S) for S in F.members)
    try:
        between = check_S_betweenness(D, F, cap)
    except LabellingSearchExceeded as exc:
        return SelectiveSeparabilityVerdict("inconclusive", f"labelling search exceeded: {exc}", reports, None)
    failed = [r for r in reports if not r.holds]
    if failed:
        labels = ", ".join(repr(r.subset) for r in failed)
        return SelectiveSeparabilityVerdict(
            "inconclusive", f"family members not separable: {labels}", reports, between
        )
    if not between.holds:
        q = D.dims.labels[between.failing_dimension]
        return SelectiveSeparabilityVerdict(
            "inconclusive", f"chained betweenness fails for dimension {q!r}", reports, between
        )
    if not singletons_suffice(D):
        return SelectiveSeparabilityVerdict(
            "inconclusive",
            "every {q}-separability follows, but some chosen sets are not products of their "
            "projections, so separability on larger sets does not follow",
            reports,
            between,
        )
    return SelectiveSeparabilityVerdict("separable", "all members separable and betweenness holds", reports, between)

