"""Selective families of dimension subsets.

A family is selective when every singleton ``{q}`` is the intersection of
some of its members. The members containing ``q`` are always a valid choice
of index set when any is, so index sets are stored in that maximal form.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

from .core import DimensionSet, DimSubset
from .errors import (
    DuplicateMember,
    EmptyMember,
    FamilyNotSelective,
    InternalSelectivityFailure,
    SchemaError,
    UnknownDimension,
)
from .witness import Witness, WitnessKind


@dataclass(frozen=True)
class SelectiveFamily:
    owner: DimensionSet
    members: tuple[DimSubset, ...]
    index_sets: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.members)

    def to_json(self) -> dict[str, Any]:
        return {"members": [list(S.labels) for S in self.members]}


@dataclass(frozen=True)
class SelectivityResult:
    family: SelectiveFamily | None
    witness: Witness | None

    @property
    def holds(self) -> bool:
        return self.family is not None


def is_selective(members: Sequence[DimSubset], dims: DimensionSet) -> SelectivityResult:
    members = tuple(members)
    seen = set()
    for S in members:
        if S.owner != dims:
            raise UnknownDimension("family member belongs to a different dimension set")
        if not S:
            raise EmptyMember("selective family members must be nonempty")
        if S.mask in seen:
            raise DuplicateMember(f"member {S!r} is listed twice")
        seen.add(S.mask)
    index_sets = []
    for q in range(len(dims)):
        idx = tuple(i for i, S in enumerate(members) if q in S)
        inter = None
        if idx:
            mask = dims.full.mask
            for i in idx:
                mask &= members[i].mask
            inter = DimSubset(dims, mask)
        if inter is None or inter.mask != 1 << q:
            w = Witness(WitnessKind.SELECTIVITY, {"dimension": q, "intersection": inter})
            return SelectivityResult(None, w)
        index_sets.append(idx)
    return SelectivityResult(SelectiveFamily(dims, members, tuple(index_sets)), None)


def as_family(family: SelectiveFamily | Iterable[DimSubset], dims: DimensionSet) -> SelectiveFamily:
    """Accept a verified family or a plain member list; raise if not selective."""
    if isinstance(family, SelectiveFamily):
        if family.owner != dims:
            raise UnknownDimension("family was built for a different dimension set")
        return family
    result = is_selective(list(family), dims)
    if not result.holds:
        q = result.witness["dimension"]
        raise FamilyNotSelective(f"no intersection of members isolates dimension {dims.labels[q]!r}", result.witness)
    return result.family


def index_sets(F: SelectiveFamily, q: int | str) -> tuple[int, ...]:
    if isinstance(q, str):
        q = F.owner.index(q)
    if not 0 <= q < len(F.owner):
        raise UnknownDimension(f"dimension index {q} out of range")
    return F.index_sets[q]


def sel_size(n_dims: int) -> int:
    """Least n with C(n, n // 2) >= n_dims."""
    if n_dims < 1:
        raise ValueError("n_dims must be positive")
    n = 1
    while math.comb(n, n // 2) < n_dims:
        n += 1
    return n


def colex_subsets(n: int, k: int) -> list[tuple[int, ...]]:
    """All k-subsets of range(n) in colexicographic order."""
    return sorted(itertools.combinations(range(n), k), key=lambda c: c[::-1])


def minimal_selective_family(dims: DimensionSet) -> SelectiveFamily:
    """A selective family of size ``sel_size(|Q|)``.

    Dimension q gets the q-th half-size subset f(q) of {0..n-1} in colex
    order; member p collects the dimensions whose f(q) contains p.
    """
    m = len(dims)
    n = sel_size(m)
    if n == 1:
        members = [dims.full]
    else:
        f = colex_subsets(n, n // 2)[:m]
        members = [dims.from_indices(q for q in range(m) if p in f[q]) for p in range(n)]
        members = [S for S in members if S]
    result = is_selective(members, dims)
    if not result.holds:
        raise InternalSelectivityFailure(f"construction for |Q|={m} is not selective")
    return result.family


def parse_family(raw: Mapping[str, Any], dims: DimensionSet) -> SelectiveFamily:
    if not isinstance(raw, Mapping) or set(raw) != {"members"}:
        raise SchemaError("family document must be an object with exactly the key 'members'")
    groups = raw["members"]
    if not isinstance(groups, list) or not all(isinstance(g, list) for g in groups):
        raise SchemaError("'members' must be a list of label lists")
    return as_family([dims.subset(g) for g in groups], dims)
