"""Synthetic joint choice datasets from behavioral models.

Every generator takes a product space and a menu list and returns a validated
:class:`JointChoiceDataset` whose ``provenance`` records the model, its
parameters, the seed and any behavior the model leaves open.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .core import (
    Alternative,
    JointChoiceDataset,
    Menu,
    ProductSpace,
    _require_keys,
    iter_bits,
    mask_of,
    parse_menu_sets,
    parse_space,
)
from .errors import InvalidFilter, InvalidOrder, SchemaError
from .preferences import additive_choice, menu_flat_indices, parse_utility

MODEL_KINDS = ("rational", "limited_attention", "status_quo", "envy_free", "additive", "random")


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    parameters: Mapping[str, Any] = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in MODEL_KINDS:
            raise SchemaError(f"unknown model kind {self.kind!r}; expected one of {MODEL_KINDS}")


def _orders_for(space: ProductSpace, orders: Sequence[str] | Sequence[Sequence[str]] | Mapping[str, Sequence[str]]) -> list[list[int]]:
    """Per-dimension strict orders (best first) as item id lists.

    Accepts one common order, a list with one order per dimension, or a
    mapping from dimension label to order.
    """
    if isinstance(orders, Mapping):
        missing = [s for s in space.dims.labels if s not in orders]
        if missing:
            raise InvalidOrder(f"no order for dimensions {missing}")
        per_dim = [orders[s] for s in space.dims.labels]
    elif orders and all(isinstance(x, str) for x in orders):
        per_dim = [orders] * space.n
    else:
        per_dim = list(orders)
    if len(per_dim) != space.n:
        raise InvalidOrder("one order per dimension is required")
    out = []
    for q, order in enumerate(per_dim):
        if sorted(order) != sorted(space.universes[q]) or len(set(order)) != len(order):
            raise InvalidOrder(
                f"order {list(order)} is not a strict total order of X_{space.dims.labels[q]}"
            )
        out.append([space.item_id(q, x) for x in order])
    return out


def _best(order: list[int], mask: int) -> int:
    return next(i for i in order if mask >> i & 1)


@dataclass(frozen=True)
class MenuDomain:
    """A product space with the list of menus to generate choices on."""

    space: ProductSpace
    menus: tuple[Menu, ...]

    @classmethod
    def complete(cls, space: ProductSpace) -> MenuDomain:
        return cls(space, tuple(space.complete_menus()))

    @classmethod
    def of(cls, space: ProductSpace, menus: Iterable[Menu] | JointChoiceDataset | str) -> MenuDomain:
        if isinstance(menus, str):
            if menus != "complete":
                raise SchemaError(f"unknown menu family {menus!r}")
            return cls.complete(space)
        if isinstance(menus, JointChoiceDataset):
            return cls(space, menus.menus)
        return cls(space, tuple(menus))


def _domain(menus: MenuDomain | JointChoiceDataset) -> MenuDomain:
    if isinstance(menus, JointChoiceDataset):
        return MenuDomain(menus.space, tuple(menus.menus))
    return menus


def _check_kind(spec: ModelSpec, kind: str) -> None:
    if spec.kind != kind:
        raise SchemaError(f"expected a {kind} model spec, got {spec.kind!r}")


def _dataset(space, pairs, spec: ModelSpec, parameters, notes=()) -> JointChoiceDataset:
    prov = {"model": spec.kind, "parameters": parameters, "seed": spec.seed, "notes": list(notes)}
    return JointChoiceDataset.from_pairs(space, pairs, prov)


def _order_param(spec: ModelSpec):
    p = spec.parameters
    orders = p.get("orders", p.get("order"))
    if orders is None:
        raise SchemaError(f"{spec.kind} model needs 'orders' or 'order'")
    return orders


def _orders_doc(space: ProductSpace, ranked: list[list[int]]) -> dict[str, list[str]]:
    return {s: [space.item_label(q, i) for i in ranked[q]] for q, s in enumerate(space.dims.labels)}


def gen_rational(spec: ModelSpec, menus: MenuDomain | JointChoiceDataset) -> JointChoiceDataset:
    """Each dimension picks the best available item under its strict order.

    ``parameters["orders"]`` is one order (best first) shared by all
    dimensions, a list with one order per dimension, or a mapping from
    dimension label to order.
    """
    _check_kind(spec, "rational")
    dom = _domain(menus)
    space = dom.space
    ranked = _orders_for(space, _order_param(spec))
    full = space.dims.full
    pairs = []
    for A in dom.menus:
        x = Alternative(full, tuple(_best(ranked[q], s) for q, s in enumerate(A.sets)))
        pairs.append((A, [x]))
    return _dataset(space, pairs, spec, {"orders": _orders_doc(space, ranked)})


def _attention_table(raw) -> dict[frozenset[str], frozenset[str]]:
    items = raw.items() if isinstance(raw, Mapping) else raw
    gamma: dict[frozenset[str], frozenset[str]] = {}
    for entry in items:
        if isinstance(entry, Mapping):
            _require_keys(entry, {"menu", "consideration"}, {"menu", "consideration"}, "attention entry")
            menu, considered = entry["menu"], entry["consideration"]
        else:
            menu, considered = entry
        menu, considered = frozenset(menu), frozenset(considered)
        if not considered or not considered <= menu:
            raise InvalidFilter(f"attention set {sorted(considered)} is not a nonempty subset of {sorted(menu)}")
        gamma[menu] = considered
    return gamma


def gen_limited_attention(spec: ModelSpec, menus: MenuDomain | JointChoiceDataset) -> JointChoiceDataset:
    """Each dimension picks the best item among those the filter lets through.

    ``parameters["attention"]`` lists ``{"menu", "consideration"}`` label
    sets (or a mapping between them); unlisted sets are fully considered.
    The same filter applies on every dimension.
    """
    _check_kind(spec, "limited_attention")
    dom = _domain(menus)
    space = dom.space
    ranked = _orders_for(space, _order_param(spec))
    gamma = _attention_table(spec.parameters.get("attention", ()))
    full = space.dims.full
    pairs = []
    for A in dom.menus:
        picks = []
        for q, s in enumerate(A.sets):
            labels = frozenset(space.item_label(q, i) for i in iter_bits(s))
            seen = gamma.get(labels, labels)
            picks.append(_best(ranked[q], mask_of(space.item_id(q, x) for x in seen)))
        pairs.append((A, [Alternative(full, tuple(picks))]))
    params = {
        "orders": _orders_doc(space, ranked),
        "attention": sorted(
            ({"menu": sorted(m), "consideration": sorted(c)} for m, c in gamma.items()),
            key=lambda e: e["menu"],
        ),
    }
    return _dataset(space, pairs, spec, params)


def _maximal(labels: list[str], dominance: set[tuple[str, str]]) -> list[str]:
    return [x for x in labels if not any((y, x) in dominance for y in labels if y != x)]


def gen_status_quo(spec: ModelSpec, menus: MenuDomain | JointChoiceDataset) -> JointChoiceDataset:
    """Sequential choice anchored on the previous pick.

    ``parameters["dominance"]`` lists strict [better, worse] label pairs;
    unlisted pairs are incomparable. The first dimension takes a maximal
    item. Each later dimension keeps the previous pick when it is available
    and no available item dominates it, and otherwise takes a maximal item.
    Ties among maximal items go to the first in universe order.
    """
    _check_kind(spec, "status_quo")
    dom = _domain(menus)
    space = dom.space
    relation = {(str(a), str(b)) for a, b in spec.parameters.get("dominance", ())}
    full = space.dims.full
    pairs = []
    for A in dom.menus:
        picks: list[int] = []
        prev: str | None = None
        for q, s in enumerate(A.sets):
            labels = [space.item_label(q, i) for i in iter_bits(s)]
            maximal = _maximal(labels, relation)
            if not maximal:
                raise InvalidOrder("dominance relation has a cycle inside a menu")
            pick = prev if prev in maximal else maximal[0]
            picks.append(space.item_id(q, pick))
            prev = pick
        pairs.append((A, [Alternative(full, tuple(picks))]))
    notes = [
        "first decision takes a preference-maximal item",
        "ties among maximal items are broken by universe order",
    ]
    return _dataset(space, pairs, spec, {"dominance": sorted(map(list, relation))}, notes)


def gen_envy_free(spec: ModelSpec, menus: MenuDomain | JointChoiceDataset) -> JointChoiceDataset:
    """Allocations of one item per agent (dimension).

    ``parameters["preferences"]`` gives each agent's strict order, best
    first. With ``rule="efficient"`` every agent gets its best available
    item. With ``rule="fair"`` (the default) the result is the envy-free
    allocations of the menu that no other envy-free allocation
    Pareto-dominates, or the efficient allocation when none is envy-free.
    """
    _check_kind(spec, "envy_free")
    dom = _domain(menus)
    space = dom.space
    rule = spec.parameters.get("rule", "fair")
    if rule not in ("fair", "efficient"):
        raise SchemaError(f"unknown allocation rule {rule!r}")
    if "preferences" not in spec.parameters:
        raise SchemaError("envy-free model needs 'preferences'")
    ranked = _orders_for(space, spec.parameters["preferences"])
    rank = [{space.item_label(q, i): r for r, i in enumerate(ranked[q])} for q in range(space.n)]
    common = set(space.universes[0])
    if any(set(u) != common for u in space.universes):
        raise InvalidOrder("envy-free allocation needs a common item set across agents")
    full = space.dims.full
    n = space.n
    pairs = []
    for A in dom.menus:
        efficient = Alternative(full, tuple(_best(ranked[q], s) for q, s in enumerate(A.sets)))
        if rule == "efficient":
            pairs.append((A, [efficient]))
            continue
        fair = []
        for x in A.alternatives():
            labels = space.alt_labels(x)
            if all(rank[i][labels[i]] <= rank[i][labels[j]] for i in range(n) for j in range(n)):
                fair.append((x, tuple(rank[i][labels[i]] for i in range(n))))
        if not fair:
            pairs.append((A, [efficient]))
            continue
        undominated = [
            x for x, r in fair if not any(r2 != r and all(a <= b for a, b in zip(r2, r)) for _, r2 in fair)
        ]
        pairs.append((A, undominated))
    params = {"preferences": _orders_doc(space, ranked), "rule": rule}
    notes = []
    if rule == "fair":
        notes = [
            "envy-free allocations are kept only if no other envy-free allocation Pareto-dominates them",
            "menus without an envy-free allocation fall back to the efficient allocation",
        ]
    return _dataset(space, pairs, spec, params, notes)


def gen_additive(spec: ModelSpec, menus: MenuDomain | JointChoiceDataset) -> JointChoiceDataset:
    """Argmax of an additive utility; ``single_valued`` keeps the first maximizer."""
    _check_kind(spec, "additive")
    dom = _domain(menus)
    U = spec.parameters.get("utility")
    if isinstance(U, Mapping):
        U = parse_utility(U, dom.space)
    if U is None:
        raise SchemaError("additive model needs 'utility'")
    single = bool(spec.parameters.get("single_valued", False))
    D = additive_choice(U, dom.menus)
    pairs = [(A, c[:1] if single else c) for A, c in D]
    notes = ["ties broken by the first alternative in lexicographic order"] if single else []
    return _dataset(dom.space, pairs, spec, {"utility": U.to_json(), "single_valued": single}, notes)


def gen_random(spec: ModelSpec, menus: MenuDomain | JointChoiceDataset) -> JointChoiceDataset:
    """A uniformly random nonempty subset of each menu's product, or one
    alternative when ``single_valued`` is set."""
    _check_kind(spec, "random")
    if spec.seed is None:
        raise SchemaError("random model needs a seed")
    dom = _domain(menus)
    space = dom.space
    single = bool(spec.parameters.get("single_valued", False))
    rng = np.random.default_rng(spec.seed)
    pairs = []
    for A in dom.menus:
        idx = menu_flat_indices(space, A)
        if single:
            keep = [int(rng.integers(len(idx)))]
        else:
            while True:
                bits = rng.random(len(idx)) < 0.5
                if bits.any():
                    break
            keep = np.flatnonzero(bits)
        pairs.append((A, [space.alternative_at(int(idx[k])) for k in keep]))
    return _dataset(space, pairs, spec, {"single_valued": single})


def random_menu_family(space: ProductSpace, rng: np.random.Generator, count: int) -> list[Menu]:
    """Up to ``count`` distinct random menus."""
    seen: dict[Menu, None] = {}
    full = space.dims.full
    for _ in range(count):
        sets = tuple(int(rng.integers(1, 1 << len(u))) for u in space.universes)
        seen.setdefault(Menu(full, sets), None)
    return list(seen)


def random_space(rng: np.random.Generator, max_dims: int, max_items: int) -> ProductSpace:
    n = int(rng.integers(1, max_dims + 1))
    universes = [[f"x{i}" for i in range(int(rng.integers(1, max_items + 1)))] for _ in range(n)]
    return ProductSpace.from_labels([str(q + 1) for q in range(n)], universes)


# --- JSON model specs ---------------------------------------------------------

_MODEL_KEYS = {
    "rational": ({"kind", "orders", "order"}, set()),
    "limited_attention": ({"kind", "orders", "order", "attention"}, {"attention"}),
    "status_quo": ({"kind", "dominance"}, {"dominance"}),
    "envy_free": ({"kind", "preferences", "rule"}, {"preferences"}),
    "additive": ({"kind", "utility", "single_valued"}, {"utility"}),
    "random": ({"kind", "seed", "single_valued"}, set()),
}


def parse_model_spec(raw: Mapping[str, Any], seed: int | None = None) -> ModelSpec:
    if not isinstance(raw, Mapping) or "kind" not in raw:
        raise SchemaError("model spec must be an object with a 'kind'")
    kind = raw["kind"]
    if kind not in _MODEL_KEYS:
        raise SchemaError(f"unknown model kind {kind!r}")
    allowed, required = _MODEL_KEYS[kind]
    _require_keys(raw, allowed, required | {"kind"}, f"{kind} model spec")
    params = {k: v for k, v in raw.items() if k != "kind"}
    if seed is None:
        seed = params.pop("seed", None)
    else:
        params.pop("seed", None)
    return ModelSpec(kind, params, seed)


def parse_menus_document(raw: Mapping[str, Any]) -> MenuDomain:
    """``{"dimensions", "universes", "menus"}`` where menus is a list of
    ``{"sets": ...}`` objects or the string ``"complete"``."""
    _require_keys(raw, {"dimensions", "universes", "menus"}, {"dimensions", "universes", "menus"}, "menus document")
    space = parse_space(raw)
    menus = raw["menus"]
    if menus == "complete":
        return MenuDomain.complete(space)
    if not isinstance(menus, list):
        raise SchemaError("'menus' must be a list or \"complete\"")
    out = []
    for i, entry in enumerate(menus):
        _require_keys(entry, {"sets"}, {"sets"}, f"menus[{i}]")
        out.append(parse_menu_sets(space, entry["sets"], f"menus[{i}]"))
    return MenuDomain(space, tuple(out))


_GENERATORS = {
    "rational": gen_rational,
    "limited_attention": gen_limited_attention,
    "status_quo": gen_status_quo,
    "envy_free": gen_envy_free,
    "additive": gen_additive,
    "random": gen_random,
}


def generate(spec: ModelSpec, menus: MenuDomain | JointChoiceDataset) -> JointChoiceDataset:
    return _GENERATORS[spec.kind](spec, menus)


def all_choice_functions(space: ProductSpace, menus: Sequence[Menu], single_valued: bool) -> Iterable[JointChoiceDataset]:
    """Every joint choice on ``menus`` (single-valued or correspondence)."""
    options = []
    for A in menus:
        alts = list(A.alternatives())
        if single_valued:
            options.append([(x,) for x in alts])
        else:
            options.append(
                [tuple(c) for r in range(1, len(alts) + 1) for c in itertools.combinations(alts, r)]
            )
    for combo in itertools.product(*options):
        yield JointChoiceDataset.from_pairs(space, list(zip(menus, combo)))
