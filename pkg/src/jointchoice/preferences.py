"""Binary relations over full alternatives and the choice/preference bridge.

A relation is stored extensionally as an ``N x N`` boolean matrix over the
product space, where ``N`` is the number of full alternatives and index order
is the mixed-radix order of :meth:`ProductSpace.flat_index`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .core import (
    Alternative,
    DimSubset,
    JointChoiceDataset,
    Menu,
    ProductSpace,
    iter_bits,
    mask_of,
)
from .errors import (
    CyclicRelation,
    EmptySubset,
    MissingBranchValue,
    NotSeparable,
    NotSeparablePreference,
    NotSingleValued,
    SchemaError,
    ScopeError,
)
from .witness import Witness, WitnessKind

CROSS_CHECK_LIMIT = 1 << 14


class PreferenceRelation:
    """A reflexive relation; ``matrix[i, j]`` means alternative i is weakly preferred to j."""

    def __init__(self, space: ProductSpace, matrix: np.ndarray):
        n = space.size()
        matrix = np.array(matrix, dtype=np.bool_, copy=True)
        if matrix.shape != (n, n):
            raise ScopeError(f"relation matrix must be {n}x{n}, got {matrix.shape}")
        np.fill_diagonal(matrix, True)
        matrix.setflags(write=False)
        self.space = space
        self.matrix = matrix

    @classmethod
    def from_pairs(cls, space: ProductSpace, pairs: Iterable[tuple[Alternative, Alternative]]) -> PreferenceRelation:
        M = np.zeros((space.size(), space.size()), dtype=np.bool_)
        for x, y in pairs:
            M[space.flat_index(x), space.flat_index(y)] = True
        return cls(space, M)

    @classmethod
    def indifference(cls, space: ProductSpace) -> PreferenceRelation:
        return cls(space, np.ones((space.size(), space.size()), dtype=np.bool_))

    @classmethod
    def from_values(cls, space: ProductSpace, values: Sequence[Any]) -> PreferenceRelation:
        """x weakly preferred to y iff value(x) >= value(y); values indexed by flat index.

        Values are replaced by their exact rank before comparison.
        """
        ranks = _exact_ranks(values)
        return cls(space, ranks[:, None] >= ranks[None, :])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PreferenceRelation)
            and self.space == other.space
            and np.array_equal(self.matrix, other.matrix)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"PreferenceRelation(N={self.matrix.shape[0]}, pairs={int(self.matrix.sum())})"

    def _ix(self, x: Alternative) -> int:
        if x.scope != self.space.dims.full:
            raise ScopeError("relations compare full alternatives")
        return self.space.flat_index(x)

    def weakly_prefers(self, x: Alternative, y: Alternative) -> bool:
        return bool(self.matrix[self._ix(x), self._ix(y)])

    def strictly_prefers(self, x: Alternative, y: Alternative) -> bool:
        return bool(self.strict[self._ix(x), self._ix(y)])

    def indifferent(self, x: Alternative, y: Alternative) -> bool:
        i, j = self._ix(x), self._ix(y)
        return bool(self.matrix[i, j] and self.matrix[j, i])

    @cached_property
    def strict(self) -> np.ndarray:
        S = _kernels.strict_part(self.matrix)
        S.setflags(write=False)
        return S

    @cached_property
    def _cycle(self) -> np.ndarray:
        return _kernels.find_cycle(self.strict)

    @property
    def acyclic(self) -> bool:
        return self._cycle.size == 0

    def pairs(self, include_diagonal: bool = False) -> list[tuple[Alternative, Alternative]]:
        M = self.matrix.copy()
        if not include_diagonal:
            np.fill_diagonal(M, False)
        at = self.space.alternative_at
        return [(at(int(i)), at(int(j))) for i, j in np.argwhere(M)]

    def to_json(self) -> dict[str, Any]:
        lab = self.space.alt_labels
        return {"pairs": [[lab(x), lab(y)] for x, y in self.pairs()]}


def _exact_ranks(values: Sequence[Any]) -> np.ndarray:
    distinct = sorted(set(values))
    rank = {v: i for i, v in enumerate(distinct)}
    return np.array([rank[v] for v in values], dtype=np.int64)


def parse_preference(raw: Mapping[str, Any], space: ProductSpace) -> PreferenceRelation:
    if not isinstance(raw, Mapping) or set(raw) != {"pairs"}:
        raise SchemaError("preference document must be an object with exactly the key 'pairs'")
    pairs = []
    for p in raw["pairs"]:
        if not isinstance(p, list) or len(p) != 2:
            raise SchemaError("each pair must be [better, worse]")
        pairs.append((space.alternative(p[0]), space.alternative(p[1])))
    return PreferenceRelation.from_pairs(space, pairs)


# --- acyclicity and maxima ------------------------------------------------------


@dataclass(frozen=True)
class AcyclicityResult:
    holds: bool
    witness: Witness | None = None


def is_acyclic(R: PreferenceRelation) -> AcyclicityResult:
    if R.acyclic:
        return AcyclicityResult(True)
    cycle = tuple(R.space.alternative_at(int(i)) for i in R._cycle)
    return AcyclicityResult(False, Witness(WitnessKind.CYCLE, {"cycle": cycle}))


def menu_flat_indices(space: ProductSpace, A: Menu) -> np.ndarray:
    """Flat indices of the product of a full-scope menu, ascending."""
    idx = np.zeros(1, dtype=np.int64)
    for q, s in enumerate(A.sets):
        items = np.fromiter(iter_bits(s), dtype=np.int64)
        idx = np.add.outer(idx * len(space.universes[q]), items).ravel()
    return idx


def maximal_elements(A: Menu, R: PreferenceRelation, check: bool = True) -> tuple[Alternative, ...]:
    """Alternatives of A not strictly beaten by another alternative of A."""
    if check and not R.acyclic:
        raise CyclicRelation("maximal elements need an acyclic strict part")
    if A.scope != R.space.dims.full:
        raise ScopeError("menus passed to maximal_elements must have full scope")
    idx = menu_flat_indices(R.space, A)
    keep = _kernels.maximal_mask(R.strict, idx)
    return tuple(R.space.alternative_at(int(i)) for i in idx[keep])


def _menus_of(menus: JointChoiceDataset | Iterable[Menu]) -> list[Menu]:
    if isinstance(menus, JointChoiceDataset):
        return list(menus.menus)
    return list(menus)


def revealed_choice(R: PreferenceRelation, menus: JointChoiceDataset | Iterable[Menu]) -> JointChoiceDataset:
    if not R.acyclic:
        raise CyclicRelation("revealed choice needs an acyclic strict part")
    return JointChoiceDataset.from_pairs(R.space, [(A, maximal_elements(A, R, check=False)) for A in _menus_of(menus)])


def revealed_preference(D: JointChoiceDataset) -> PreferenceRelation:
    """x is weakly revealed preferred to y iff x is chosen from a menu containing y.

    Returned even when its strict part is cyclic; see ``acyclic``.
    """
    feas = [menu_flat_indices(D.space, A) for A in D.menus]
    chosen = [np.array([D.space.flat_index(x) for x in c], dtype=np.int64) for c in D.choices]
    feas_ptr = np.cumsum([0] + [len(f) for f in feas]).astype(np.int64)
    chosen_ptr = np.cumsum([0] + [len(c) for c in chosen]).astype(np.int64)
    M = _kernels.revealed_matrix(
        D.space.size(), feas_ptr, np.concatenate(feas), chosen_ptr, np.concatenate(chosen)
    )
    return PreferenceRelation(D.space, M)


@dataclass(frozen=True)
class RationalizabilityResult:
    holds: bool
    relation: PreferenceRelation
    witness: Witness | None = None


def is_rationalizable(D: JointChoiceDataset) -> RationalizabilityResult:
    """Compare every choice with the maximal set under the revealed preference."""
    R = revealed_preference(D)
    for A, c in D:
        mx = maximal_elements(A, R, check=False)
        if mx != c:
            diff = tuple(sorted(set(mx) ^ set(c), key=lambda a: a.entries))
            w = Witness(
                WitnessKind.RATIONALIZABILITY,
                {"menu": A, "chosen": c, "maximal": mx, "symmetric_difference": diff},
            )
            return RationalizabilityResult(False, R, w)
    return RationalizabilityResult(True, R)


# --- separable preferences ----------------------------------------------------


def compose(space: ProductSpace, x_S: Alternative, u_rest: Alternative) -> Alternative:
    """Join a scope-S alternative with a scope-(Q minus S) alternative."""
    if x_S.scope.mask & u_rest.scope.mask or (x_S.scope | u_rest.scope) != space.dims.full:
        raise ScopeError("parts must have complementary scopes")
    entries = dict(zip(x_S.scope.members, x_S.entries))
    entries.update(zip(u_rest.scope.members, u_rest.entries))
    return Alternative(space.dims.full, tuple(entries[q] for q in range(space.n)))


def _split_index(space: ProductSpace, S: DimSubset) -> np.ndarray:
    """``grid[i, k]`` is the flat index of (i-th S-alternative, k-th complement alternative)."""
    radix = space.radix()
    order = list(S.members) + list(S.complement.members)
    grid = np.arange(space.size(), dtype=np.int64).reshape(radix).transpose(order)
    return grid.reshape(space.size(S), space.size(S.complement))


@dataclass(frozen=True)
class PreferenceSeparabilityResult:
    holds: bool
    witness: Witness | None = None


def _conditional(R: PreferenceRelation, S: DimSubset) -> np.ndarray:
    grid = _split_index(R.space, S)
    return R.matrix[grid[:, None, :], grid[None, :, :]]


def is_S_separable_preference(R: PreferenceRelation, S: DimSubset) -> PreferenceSeparabilityResult:
    """A comparison of S-parts under one complement must hold under every complement."""
    if not S:
        raise EmptySubset("S must be nonempty")
    if S == R.space.dims.full:
        return PreferenceSeparabilityResult(True)
    cond = _conditional(R, S)
    bad = cond.any(axis=2) & ~cond.all(axis=2)
    if not bad.any():
        return PreferenceSeparabilityResult(True)
    i, j = (int(v) for v in np.argwhere(bad)[0])
    u = int(np.argmax(cond[i, j]))
    v = int(np.argmin(cond[i, j]))
    rest = S.complement
    at = R.space.alternative_at
    payload = {"subset": S, "x": at(i, S), "y": at(j, S), "u": at(u, rest), "v": at(v, rest)}
    return PreferenceSeparabilityResult(False, Witness(WitnessKind.PREFERENCE_SEPARABILITY, payload))


def induced_preference(R: PreferenceRelation, S: DimSubset) -> PreferenceRelation:
    """The relation on S-alternatives that R induces when it is S-separable."""
    if S == R.space.dims.full:
        return R
    if not is_S_separable_preference(R, S).holds:
        raise NotSeparablePreference(f"relation is not {S!r}-separable")
    return PreferenceRelation(R.space.subspace(S), _conditional(R, S)[:, :, 0])


# --- richness --------------------------------------------------------------------


def _pair_options(mask: int) -> list[int]:
    items = list(iter_bits(mask))
    opts = [1 << i for i in items] + [mask_of(p) for p in itertools.combinations(items, 2)]
    return sorted(opts)


def required_rich_menus(space: ProductSpace, A: Menu, S: DimSubset) -> list[Menu]:
    """Menus that S-richness demands because of menu A.

    Two distinct alternatives sharing their complement part differ on a
    nonempty part of S; the demanded menus pair their S-coordinates with
    every singleton completion outside S.
    """
    if not S:
        raise EmptySubset("S must be nonempty")
    S_members = S.members
    rest = S.complement.members
    out = []
    for box in itertools.product(*(_pair_options(A.sets[q]) for q in S_members)):
        if all(b & (b - 1) == 0 for b in box):
            continue
        for v in itertools.product(*(range(len(space.universes[q])) for q in rest)):
            sets = [0] * space.n
            for q, b in zip(S_members, box):
                sets[q] = b
            for q, e in zip(rest, v):
                sets[q] = 1 << e
            out.append(Menu(space.dims.full, tuple(sets)))
    return out


@dataclass(frozen=True)
class RichnessResult:
    holds: bool
    witness: Witness | None = None
    missing: tuple[Menu, ...] = ()


def is_S_rich(D: JointChoiceDataset, S: DimSubset) -> RichnessResult:
    """Check the menu family of D for S-richness; ``missing`` lists every absent menu."""
    missing: dict[Menu, Menu] = {}
    for A in D.menus:
        for B in required_rich_menus(D.space, A, S):
            if B not in D and B not in missing:
                missing[B] = A
    if not missing:
        return RichnessResult(True)
    first, src = next(iter(missing.items()))
    w = Witness(WitnessKind.RICHNESS, {"subset": S, "missing": first, "source": src})
    return RichnessResult(False, w, tuple(missing))


# --- additive utilities -------------------------------------------------------------


@dataclass(frozen=True)
class AdditiveUtility:
    """Sum of branch utilities over a partition of the dimensions."""

    space: ProductSpace
    blocks: tuple[DimSubset, ...]
    values: tuple[dict[tuple[int, ...], Fraction], ...]

    def __post_init__(self) -> None:
        cover = 0
        for B in self.blocks:
            if not B or cover & B.mask:
                raise SchemaError("utility blocks must be nonempty and disjoint")
            cover |= B.mask
        if cover != self.space.dims.full.mask:
            raise SchemaError("utility blocks must cover every dimension")
        if len(self.values) != len(self.blocks):
            raise SchemaError("one value table per block is required")
        for B, table in zip(self.blocks, self.values):
            for x in self.space.alternatives(B):
                if x.entries not in table:
                    raise MissingBranchValue(f"no value for {self.space.alt_labels(x)} on block {B!r}")

    @classmethod
    def from_functions(cls, space: ProductSpace, blocks: Sequence[DimSubset], funcs: Sequence[Callable[[tuple[str, ...]], Any]]) -> AdditiveUtility:
        """Tabulate branch functions given on label tuples."""
        values = []
        for B, f in zip(blocks, funcs):
            values.append({x.entries: Fraction(f(tuple(space.alt_labels(x)))) for x in space.alternatives(B)})
        return cls(space, tuple(blocks), tuple(values))

    def __call__(self, x: Alternative) -> Fraction:
        total = Fraction(0)
        for B, table in zip(self.blocks, self.values):
            total += table[tuple(x.entries[q] for q in B)]
        return total

    @cached_property
    def flat_values(self) -> list[Fraction]:
        return [self(x) for x in self.space.alternatives()]

    def to_preference(self) -> PreferenceRelation:
        return PreferenceRelation.from_values(self.space, self.flat_values)

    def to_json(self) -> dict[str, Any]:
        lab = self.space.alt_labels
        return {
            "blocks": [list(B.labels) for B in self.blocks],
            "values": {
                str(b): {",".join(lab(x)): str(table[x.entries]) for x in self.space.alternatives(B)}
                for b, (B, table) in enumerate(zip(self.blocks, self.values))
            },
        }


def parse_utility(raw: Mapping[str, Any], space: ProductSpace) -> AdditiveUtility:
    if not isinstance(raw, Mapping) or set(raw) != {"blocks", "values"}:
        raise SchemaError("utility document must have exactly the keys 'blocks' and 'values'")
    blocks = tuple(space.dims.subset(b) for b in raw["blocks"])
    tables = raw["values"]
    if not isinstance(tables, Mapping) or set(tables) != {str(i) for i in range(len(blocks))}:
        raise SchemaError("'values' must have one entry per block index")
    values = []
    for b, B in enumerate(blocks):
        table = {}
        for key, val in tables[str(b)].items():
            x = space.alternative(key.split(","), B)
            try:
                table[x.entries] = Fraction(val)
            except (ValueError, ZeroDivisionError, TypeError):
                raise SchemaError(f"value {val!r} is not a rational number") from None
        values.append(table)
    return AdditiveUtility(space, blocks, tuple(values))


def additive_choice(U: AdditiveUtility, menus: JointChoiceDataset | Iterable[Menu]) -> JointChoiceDataset:
    """Every menu maps to the full argmax set of U over its product (ties kept)."""
    ranks = _exact_ranks(U.flat_values)
    pairs = []
    for A in _menus_of(menus):
        idx = menu_flat_indices(U.space, A)
        r = ranks[idx]
        best = idx[r == r.max()]
        pairs.append((A, [U.space.alternative_at(int(i)) for i in best]))
    return JointChoiceDataset.from_pairs(U.space, pairs)


# --- rationalizability through a selective family --------------------------------------


@dataclass(frozen=True)
class SelectiveRationalizabilityVerdict:
    """Verdict from the induced choices of family members.

    ``direct`` is the full-dataset check when it was run; ``mismatch`` flags a
    disagreement between the two routes instead of hiding it.
    """

    rationalizable: bool
    members: tuple[tuple[DimSubset, RationalizabilityResult], ...]
    direct: RationalizabilityResult | None
    mismatch: bool
    basis: str = "separable data: rationalizable iff every member's induced choice is"

    @property
    def status(self) -> str:
        return "rationalizable" if self.rationalizable else "not_rationalizable"


def rationalizability_via_selective_family(
    D: JointChoiceDataset,
    family,
    enforce_single_valued: bool = True,
    cross_check: bool = True,
) -> SelectiveRationalizabilityVerdict:
    """Decide rationalizability of separable data from the induced choices of
    the members of a selective family.

    Restricted to single-valued data: for correspondences the shortcut can
    disagree with the direct test. ``enforce_single_valued=False`` runs the
    shortcut anyway, which exists only to exhibit that disagreement.
    """
    from .selective import as_family
    from .separability import is_S_separable, is_separable

    if enforce_single_valued and not D.single_valued:
        raise NotSingleValued("the selective-family shortcut is restricted to single-valued data")
    verdict = is_separable(D)
    if not verdict.holds:
        raise NotSeparable(f"dataset is not separable (fails on {list(verdict.failing)})")
    F = as_family(family, D.dims)
    members = []
    for S in F.members:
        induced = is_S_separable(D, S).induced.as_dataset(D.space)
        members.append((S, is_rationalizable(induced)))
    ok = all(r.holds for _, r in members)
    direct = None
    if cross_check and D.space.size() <= CROSS_CHECK_LIMIT:
        direct = is_rationalizable(D)
    mismatch = direct is not None and direct.holds != ok
    return SelectiveRationalizabilityVerdict(ok, tuple(members), direct, mismatch)
