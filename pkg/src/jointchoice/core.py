"""Finite representations of joint choice data.

Dimensions and items are interned to dense integers. A subset of dimensions is
a bitmask over dimension indices and a one-dimensional menu is a bitmask over
item ids, so grouping menus by projection is a matter of hashing small tuples.
External identity is always the string label.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator, Mapping, Sequence

from .errors import (
    ChoiceOutsideMenu,
    DuplicateMenu,
    EmptyChoice,
    EmptyMenuSet,
    SchemaError,
    ScopeError,
    UnknownDimension,
    UnknownItem,
)


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class DimensionSet:
    """The ordered index set of a dataset; index ``i`` is ``labels[i]``."""

    labels: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        labels = tuple(str(s) for s in self.labels)
        if not labels:
            raise SchemaError("a dataset needs at least one dimension")
        if len(set(labels)) != len(labels):
            raise SchemaError(f"duplicate dimension labels in {list(labels)}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(labels)})

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise UnknownDimension(f"unknown dimension {label!r}") from None

    @property
    def full(self) -> DimSubset:
        return DimSubset(self, (1 << len(self.labels)) - 1)

    @property
    def empty(self) -> DimSubset:
        return DimSubset(self, 0)

    def subset(self, labels: Iterable[str]) -> DimSubset:
        """Subset from dimension labels, e.g. ``dims.subset(["1", "3"])``."""
        if isinstance(labels, str):
            labels = [labels]
        return DimSubset(self, mask_of(self.index(s) for s in labels))

    def from_indices(self, indices: Iterable[int]) -> DimSubset:
        return DimSubset(self, mask_of(indices))

    def singleton(self, q: int) -> DimSubset:
        return DimSubset(self, 1 << q)

    def all_subsets(self, nonempty: bool = True) -> Iterator[DimSubset]:
        start = 1 if nonempty else 0
        for m in range(start, 1 << len(self.labels)):
            yield DimSubset(self, m)


@dataclass(frozen=True, order=False)
class DimSubset:
    owner: DimensionSet
    mask: int

    def __post_init__(self) -> None:
        if self.mask < 0 or self.mask >> len(self.owner.labels):
            raise ScopeError(f"mask {self.mask:#b} references dimensions outside Q")

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.mask))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.owner.labels[i] for i in iter_bits(self.mask))

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __contains__(self, q: int) -> bool:
        return bool(self.mask >> q & 1)

    def __bool__(self) -> bool:
        return self.mask != 0

    @property
    def complement(self) -> DimSubset:
        return DimSubset(self.owner, self.owner.full.mask & ~self.mask)

    def __or__(self, other: DimSubset) -> DimSubset:
        return DimSubset(self.owner, self.mask | other.mask)

    def __and__(self, other: DimSubset) -> DimSubset:
        return DimSubset(self.owner, self.mask & other.mask)

    def issubset(self, other: DimSubset) -> bool:
        return self.mask & ~other.mask == 0

    def __repr__(self) -> str:
        return "{" + ",".join(self.labels) + "}"


def _positions(scope: DimSubset, sub: DimSubset) -> tuple[int, ...]:
    """Positions of ``sub``'s members inside ``scope``'s member tuple."""
    if not sub.issubset(scope):
        raise ScopeError(f"{sub!r} is not contained in {scope!r}")
    members = scope.members
    return tuple(members.index(q) for q in sub.members)


@dataclass(frozen=True)
class Alternative:
    """One item id per dimension of ``scope``, in canonical dimension order."""

    scope: DimSubset
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != len(self.scope):
            raise ScopeError("alternative length does not match its scope")

    def __lt__(self, other: Alternative) -> bool:
        return self.entries < other.entries


@dataclass(frozen=True)
class Menu:
    """One nonempty item bitmask per dimension of ``scope``."""

    scope: DimSubset
    sets: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.sets) != len(self.scope):
            raise ScopeError("menu length does not match its scope")
        for pos, s in enumerate(self.sets):
            if s <= 0:
                q = self.scope.members[pos]
                raise EmptyMenuSet(f"menu has an empty set on dimension {self.scope.owner.labels[q]!r}")

    def __lt__(self, other: Menu) -> bool:
        return self.sets < other.sets

    def items(self, pos: int) -> tuple[int, ...]:
        return tuple(iter_bits(self.sets[pos]))

    @property
    def size(self) -> int:
        n = 1
        for s in self.sets:
            n *= bin(s).count("1")
        return n

    def alternatives(self) -> Iterator[Alternative]:
        """All alternatives of the product of the menu, lexicographically."""
        for entries in itertools.product(*(tuple(iter_bits(s)) for s in self.sets)):
            yield Alternative(self.scope, entries)

    def __contains__(self, x: Alternative) -> bool:
        if x.scope != self.scope:
            return False
        return all(s >> e & 1 for s, e in zip(self.sets, x.entries))


def project_alternative(x: Alternative, S: DimSubset) -> Alternative:
    pos = _positions(x.scope, S)
    return Alternative(S, tuple(x.entries[p] for p in pos))


def project_menu(A: Menu, S: DimSubset) -> Menu:
    pos = _positions(A.scope, S)
    return Menu(S, tuple(A.sets[p] for p in pos))


def project_choice_image(image: Iterable[Alternative], S: DimSubset) -> tuple[Alternative, ...]:
    """Distinct projections of ``image`` onto ``S``, sorted."""
    image = tuple(image)
    if not image:
        return ()
    scope = image[0].scope
    if any(x.scope != scope for x in image):
        raise ScopeError("alternatives of one image must share a scope")
    pos = _positions(scope, S)
    keys = {tuple(x.entries[p] for p in pos) for x in image}
    return tuple(Alternative(S, k) for k in sorted(keys))


@dataclass(frozen=True)
class ProductSpace:
    """Dimensions together with the item universes ``X_q``."""

    dims: DimensionSet
    universes: tuple[tuple[str, ...], ...]
    _ids: tuple[dict[str, int], ...] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        universes = tuple(tuple(str(x) for x in u) for u in self.universes)
        if len(universes) != len(self.dims):
            raise SchemaError("one universe per dimension is required")
        for q, u in enumerate(universes):
            if not u:
                raise SchemaError(f"universe of dimension {self.dims.labels[q]!r} is empty")
            if len(set(u)) != len(u):
                raise SchemaError(f"duplicate items in universe of dimension {self.dims.labels[q]!r}")
        object.__setattr__(self, "universes", universes)
        object.__setattr__(self, "_ids", tuple({x: i for i, x in enumerate(u)} for u in universes))

    @classmethod
    def from_labels(cls, labels: Sequence[str], universes: Sequence[Sequence[str]]) -> ProductSpace:
        return cls(DimensionSet(tuple(labels)), tuple(tuple(u) for u in universes))

    @property
    def n(self) -> int:
        return len(self.dims)

    def radix(self, scope: DimSubset | None = None) -> tuple[int, ...]:
        scope = self.dims.full if scope is None else scope
        return tuple(len(self.universes[q]) for q in scope)

    def size(self, scope: DimSubset | None = None) -> int:
        n = 1
        for r in self.radix(scope):
            n *= r
        return n

    def item_id(self, q: int, label: str) -> int:
        try:
            return self._ids[q][str(label)]
        except KeyError:
            raise UnknownItem(f"unknown item {label!r} on dimension {self.dims.labels[q]!r}") from None

    def item_label(self, q: int, item: int) -> str:
        return self.universes[q][item]

    def _scope(self, scope: DimSubset | Iterable[str] | None) -> DimSubset:
        if scope is None:
            return self.dims.full
        if isinstance(scope, DimSubset):
            return scope
        return self.dims.subset(scope)

    def alternative(self, labels: Sequence[str], scope: DimSubset | Iterable[str] | None = None) -> Alternative:
        S = self._scope(scope)
        if isinstance(labels, str):
            labels = [labels]
        if len(labels) != len(S):
            raise SchemaError(f"alternative {list(labels)} has the wrong length for scope {S!r}")
        return Alternative(S, tuple(self.item_id(q, x) for q, x in zip(S.members, labels)))

    def menu(self, sets: Sequence[Iterable[str]], scope: DimSubset | Iterable[str] | None = None) -> Menu:
        S = self._scope(scope)
        sets = list(sets)
        if len(sets) != len(S):
            raise SchemaError(f"menu has {len(sets)} sets for a scope of {len(S)} dimensions")
        masks = []
        for q, items in zip(S.members, sets):
            if isinstance(items, str):
                items = [items]
            masks.append(mask_of(self.item_id(q, x) for x in items))
        return Menu(S, tuple(masks))

    def alt_labels(self, x: Alternative) -> list[str]:
        return [self.item_label(q, e) for q, e in zip(x.scope.members, x.entries)]

    def menu_labels(self, A: Menu) -> list[list[str]]:
        return [[self.item_label(q, e) for e in iter_bits(s)] for q, s in zip(A.scope.members, A.sets)]

    def alternatives(self, scope: DimSubset | None = None) -> Iterator[Alternative]:
        S = self._scope(scope)
        for entries in itertools.product(*(range(r) for r in self.radix(S))):
            yield Alternative(S, entries)

    def flat_index(self, x: Alternative) -> int:
        """Mixed-radix index of ``x`` within its scope; first dimension most significant."""
        idx = 0
        for q, e in zip(x.scope.members, x.entries):
            idx = idx * len(self.universes[q]) + e
        return idx

    def alternative_at(self, index: int, scope: DimSubset | None = None) -> Alternative:
        S = self._scope(scope)
        entries = []
        for r in reversed(self.radix(S)):
            index, e = divmod(index, r)
            entries.append(e)
        return Alternative(S, tuple(reversed(entries)))

    def complete_menus(self) -> list[Menu]:
        """Every menu of ``prod_q 2^{X_q}``; sets enumerated by ascending bitmask."""
        full = self.dims.full
        ranges = [range(1, 1 << len(u)) for u in self.universes]
        return [Menu(full, sets) for sets in itertools.product(*ranges)]

    def subspace(self, S: DimSubset) -> ProductSpace:
        """The product space over the dimensions of ``S`` alone."""
        return ProductSpace(DimensionSet(S.labels), tuple(self.universes[q] for q in S))

    def reindex(self, x: Alternative | Menu, sub: ProductSpace) -> Any:
        """Re-express a scope-S object of this space as a full-scope object of ``sub``."""
        if isinstance(x, Alternative):
            return Alternative(sub.dims.full, x.entries)
        return Menu(sub.dims.full, x.sets)


def _canonical_image(image: Iterable[Alternative]) -> tuple[Alternative, ...]:
    return tuple(sorted(set(image), key=lambda a: a.entries))


@dataclass(frozen=True)
class JointChoiceDataset:
    """Menus of ``prod_q 2^{X_q}`` and the nonempty chosen sets.

    Menus keep their input order, which is the canonical order used for
    witness selection. Choice images are sorted and deduplicated.
    """

    space: ProductSpace
    menus: tuple[Menu, ...]
    choices: tuple[tuple[Alternative, ...], ...]
    provenance: Mapping[str, Any] | None = field(default=None, compare=False)
    _lookup: dict[Menu, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        full = self.space.dims.full
        menus = tuple(self.menus)
        if not menus:
            raise SchemaError("a dataset needs at least one menu")
        if len(self.choices) != len(menus):
            raise SchemaError("one choice image per menu is required")
        lookup: dict[Menu, int] = {}
        choices = []
        for i, (A, image) in enumerate(zip(menus, self.choices)):
            if A.scope != full:
                raise ScopeError("dataset menus must have full scope")
            for q, s in enumerate(A.sets):
                if s >> len(self.space.universes[q]):
                    raise UnknownItem(f"menu {i} references an item outside X_{self.space.dims.labels[q]}")
            if A in lookup:
                raise DuplicateMenu(f"menu {self.space.menu_labels(A)} appears twice")
            lookup[A] = i
            image = _canonical_image(image)
            if not image:
                raise EmptyChoice(f"menu {self.space.menu_labels(A)} has an empty choice")
            for x in image:
                if x not in A:
                    raise ChoiceOutsideMenu(
                        f"chosen {self.space.alt_labels(x)} is not in menu {self.space.menu_labels(A)}"
                    )
            choices.append(image)
        object.__setattr__(self, "menus", menus)
        object.__setattr__(self, "choices", tuple(choices))
        object.__setattr__(self, "_lookup", lookup)

    @classmethod
    def from_pairs(cls, space: ProductSpace, pairs: Iterable[tuple[Menu, Iterable[Alternative]]], provenance=None) -> JointChoiceDataset:
        pairs = list(pairs)
        return cls(space, tuple(A for A, _ in pairs), tuple(tuple(c) for _, c in pairs), provenance)

    @classmethod
    def from_labels(
        cls,
        dimensions: Sequence[str],
        universes: Sequence[Sequence[str]],
        table: Sequence[tuple[Sequence[Iterable[str]], Iterable[Sequence[str]]]],
    ) -> JointChoiceDataset:
        """Build from label data: ``table`` is a list of ``(sets, chosen tuples)``."""
        space = ProductSpace.from_labels(dimensions, universes)
        return cls.from_pairs(
            space, [(space.menu(sets), [space.alternative(x) for x in chosen]) for sets, chosen in table]
        )

    @property
    def dims(self) -> DimensionSet:
        return self.space.dims

    def __len__(self) -> int:
        return len(self.menus)

    def __iter__(self) -> Iterator[tuple[Menu, tuple[Alternative, ...]]]:
        return iter(zip(self.menus, self.choices))

    def __contains__(self, A: Menu) -> bool:
        return A in self._lookup

    def index(self, A: Menu) -> int:
        return self._lookup[A]

    def choice(self, A: Menu) -> tuple[Alternative, ...]:
        return self.choices[self._lookup[A]]

    @property
    def single_valued(self) -> bool:
        return all(len(c) == 1 for c in self.choices)

    @property
    def is_complete(self) -> bool:
        total = 1
        for u in self.space.universes:
            total *= (1 << len(u)) - 1
        return total == len(self.menus)


@dataclass(frozen=True)
class ProjectionClass:
    """A projected menu and the dataset menu indices projecting onto it."""

    menu: Menu
    sources: tuple[int, ...]


def projected_menu_family(D: JointChoiceDataset, S: DimSubset) -> list[ProjectionClass]:
    """Distinct ``pi_S`` images of the menus, in order of first appearance."""
    pos = _positions(D.dims.full, S)
    groups: dict[tuple[int, ...], list[int]] = {}
    for i, A in enumerate(D.menus):
        groups.setdefault(tuple(A.sets[p] for p in pos), []).append(i)
    return [ProjectionClass(Menu(S, key), tuple(idx)) for key, idx in groups.items()]


# --- JSON document format -------------------------------------------------

_DATASET_KEYS = {"dimensions", "universes", "menus", "provenance"}
_MENU_KEYS = {"sets", "choice"}


def _require_keys(obj: Any, allowed: set[str], required: set[str], where: str) -> None:
    if not isinstance(obj, Mapping):
        raise SchemaError(f"{where} must be a JSON object")
    unknown = set(obj) - allowed
    if unknown:
        raise SchemaError(f"unknown keys in {where}: {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise SchemaError(f"missing keys in {where}: {sorted(missing)}")


def parse_space(raw: Mapping[str, Any]) -> ProductSpace:
    labels = raw["dimensions"]
    if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels):
        raise SchemaError("'dimensions' must be a list of strings")
    universes = raw["universes"]
    if not isinstance(universes, Mapping):
        raise SchemaError("'universes' must be an object keyed by dimension label")
    unknown = set(universes) - set(labels)
    if unknown:
        raise UnknownDimension(f"universes given for unknown dimensions {sorted(unknown)}")
    missing = [s for s in labels if s not in universes]
    if missing:
        raise SchemaError(f"no universe for dimensions {missing}")
    return ProductSpace.from_labels(labels, [universes[s] for s in labels])


def parse_menu_sets(space: ProductSpace, sets: Any, where: str) -> Menu:
    if not isinstance(sets, Mapping):
        raise SchemaError(f"{where}: 'sets' must be an object keyed by dimension label")
    for s in sets:
        space.dims.index(s)
    missing = [s for s in space.dims.labels if s not in sets]
    if missing:
        raise SchemaError(f"{where}: no set for dimensions {missing}")
    for s in space.dims.labels:
        if not isinstance(sets[s], list):
            raise SchemaError(f"{where}: set for dimension {s!r} must be a list")
        if not sets[s]:
            raise EmptyMenuSet(f"{where}: empty set on dimension {s!r}")
    return space.menu([sets[s] for s in space.dims.labels])


def validate_dataset(raw: Mapping[str, Any]) -> JointChoiceDataset:
    """Validate a parsed dataset document and return the interned dataset."""
    _require_keys(raw, _DATASET_KEYS, {"dimensions", "universes", "menus"}, "dataset")
    space = parse_space(raw)
    if not isinstance(raw["menus"], list):
        raise SchemaError("'menus' must be a list")
    pairs = []
    for i, entry in enumerate(raw["menus"]):
        where = f"menus[{i}]"
        _require_keys(entry, _MENU_KEYS, _MENU_KEYS, where)
        A = parse_menu_sets(space, entry["sets"], where)
        chosen = entry["choice"]
        if not isinstance(chosen, list):
            raise SchemaError(f"{where}: 'choice' must be a list of tuples")
        if not chosen:
            raise EmptyChoice(f"{where}: empty choice")
        alts = []
        for x in chosen:
            if not isinstance(x, list):
                raise SchemaError(f"{where}: chosen alternatives must be arrays")
            alts.append(space.alternative(x))
        pairs.append((A, alts))
    provenance = raw.get("provenance")
    return JointChoiceDataset.from_pairs(space, pairs, provenance)


def space_document(space: ProductSpace) -> dict[str, Any]:
    return {
        "dimensions": list(space.dims.labels),
        "universes": {s: list(u) for s, u in zip(space.dims.labels, space.universes)},
    }


def menu_document(space: ProductSpace, A: Menu) -> dict[str, list[str]]:
    return dict(zip(A.scope.labels, space.menu_labels(A)))


def dataset_document(D: JointChoiceDataset) -> dict[str, Any]:
    doc = space_document(D.space)
    doc["menus"] = [
        {"sets": menu_document(D.space, A), "choice": [D.space.alt_labels(x) for x in c]} for A, c in D
    ]
    if D.provenance is not None:
        doc["provenance"] = D.provenance
    return doc


def load_json(path: str | Path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_dataset(path: str | Path) -> JointChoiceDataset:
    return validate_dataset(load_json(path))


def dump_dataset(D: JointChoiceDataset, path: str | Path) -> None:
    Path(path).write_text(json.dumps(dataset_document(D), indent=2) + "\n", encoding="utf-8")
