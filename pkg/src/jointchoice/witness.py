"""Replayable failure certificates."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Mapping

from .core import Alternative, DimSubset, JointChoiceDataset, Menu, ProductSpace, menu_document


class WitnessKind(str, enum.Enum):
    SEPARABILITY = "separability-violation"
    BETWEENNESS = "betweenness-violation"
    RICHNESS = "richness-violation"
    RATIONALIZABILITY = "rationalizability-violation"
    CYCLE = "cycle"
    SELECTIVITY = "selectivity-violation"
    PREFERENCE_SEPARABILITY = "preference-separability-violation"


@dataclass(frozen=True)
class Witness:
    kind: WitnessKind
    payload: Mapping[str, Any]

    def __getitem__(self, key: str) -> Any:
        return self.payload[key]

    def to_json(self, space: ProductSpace) -> dict[str, Any]:
        return {"kind": self.kind.value, **{k: _jsonify(space, v) for k, v in self.payload.items()}}

    def replay(self, target: Any) -> bool:
        """True iff the failure this witness describes reproduces on ``target``.

        ``target`` is the dataset the witness came from, or for cycle and
        preference witnesses the relation.
        """
        return _REPLAY[self.kind](self.payload, target)


def _jsonify(space: ProductSpace, v: Any) -> Any:
    if isinstance(v, Menu):
        return menu_document(space, v)
    if isinstance(v, Alternative):
        return space.alt_labels(v)
    if isinstance(v, DimSubset):
        return list(v.labels)
    if isinstance(v, enum.Enum):
        return v.value
    if isinstance(v, (list, tuple)):
        return [_jsonify(space, x) for x in v]
    if isinstance(v, Mapping):
        return {str(k): _jsonify(space, x) for k, x in v.items()}
    return v


def _replay_separability(p: Mapping[str, Any], D: JointChoiceDataset) -> bool:
    from .core import project_choice_image, project_menu

    S, A, B = p["subset"], p["menu_a"], p["menu_b"]
    if A not in D or B not in D or project_menu(A, S) != project_menu(B, S):
        return False
    return project_choice_image(D.choice(A), S) != project_choice_image(D.choice(B), S)


def _replay_betweenness(p: Mapping[str, Any], D: JointChoiceDataset) -> bool:
    from .core import project_menu

    S, T, A, B = p["s"], p["t"], p["menu_a"], p["menu_b"]
    if A not in D or B not in D or project_menu(A, S & T) != project_menu(B, S & T):
        return False
    def between(X, Y):
        return any(project_menu(E, S) == project_menu(X, S) and project_menu(E, T) == project_menu(Y, T) for E in D.menus)

    return not between(A, B) and not between(B, A)


def _replay_richness(p: Mapping[str, Any], D: JointChoiceDataset) -> bool:
    from .preferences import required_rich_menus

    S, src, missing = p["subset"], p["source"], p["missing"]
    return src in D and missing not in D and missing in required_rich_menus(D.space, src, S)


def _replay_rationalizability(p: Mapping[str, Any], D: JointChoiceDataset) -> bool:
    from .preferences import maximal_elements, revealed_preference

    A = p["menu"]
    if A not in D:
        return False
    return tuple(D.choice(A)) != tuple(maximal_elements(A, revealed_preference(D), check=False))


def _replay_cycle(p: Mapping[str, Any], R: Any) -> bool:
    from .preferences import PreferenceRelation, revealed_preference

    if isinstance(R, JointChoiceDataset):
        R = revealed_preference(R)
    assert isinstance(R, PreferenceRelation)
    cyc = list(p["cycle"])
    if len(cyc) < 2:
        return False
    return all(R.strictly_prefers(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc)))


def _replay_selectivity(p: Mapping[str, Any], members: Any) -> bool:
    from .selective import SelectiveFamily

    q = p["dimension"]
    if isinstance(members, SelectiveFamily):
        members = members.members
    containing = [S for S in members if q in S]
    if not containing:
        return True
    inter = containing[0]
    for S in containing[1:]:
        inter = inter & S
    return inter.mask != 1 << q


def _replay_preference_separability(p: Mapping[str, Any], R: Any) -> bool:
    from .preferences import compose

    S, x, y, u, v = p["subset"], p["x"], p["y"], p["u"], p["v"]
    space = R.space
    return R.weakly_prefers(compose(space, x, u), compose(space, y, u)) and not R.weakly_prefers(
        compose(space, x, v), compose(space, y, v)
    )


_REPLAY = {
    WitnessKind.SEPARABILITY: _replay_separability,
    WitnessKind.BETWEENNESS: _replay_betweenness,
    WitnessKind.RICHNESS: _replay_richness,
    WitnessKind.RATIONALIZABILITY: _replay_rationalizability,
    WitnessKind.CYCLE: _replay_cycle,
    WitnessKind.SELECTIVITY: _replay_selectivity,
    WitnessKind.PREFERENCE_SEPARABILITY: _replay_preference_separability,
}
