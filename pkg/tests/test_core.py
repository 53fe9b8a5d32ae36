import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jointchoice import (
    DimensionSet,
    JointChoiceDataset,
    ProductSpace,
    dataset_document,
    project_alternative,
    project_choice_image,
    project_menu,
    projected_menu_family,
    validate_dataset,
)
from jointchoice.core import load_dataset, dump_dataset, iter_bits, mask_of
from jointchoice.errors import (
    ChoiceOutsideMenu,
    DuplicateMenu,
    EmptyChoice,
    EmptyMenuSet,
    InputError,
    SchemaError,
    ScopeError,
    UnknownDimension,
    UnknownItem,
)
from jointchoice.golden import consumption

from strategies import datasets, spaces


def coffee_space():
    return ProductSpace.from_labels(
        ["1", "2"], [["scones", "croissants", "cantucci"], ["tea", "coffee"]]
    )


def test_bits_roundtrip():
    assert list(iter_bits(0b10110)) == [1, 2, 4]
    assert mask_of([4, 1, 2]) == 0b10110
    assert list(iter_bits(0)) == []


def test_dimension_subsets():
    Q = DimensionSet(("1", "2", "3"))
    S = Q.subset(["3", "1"])
    assert S.members == (0, 2)
    assert S.labels == ("1", "3")
    assert repr(S) == "{1,3}"
    assert S.complement.labels == ("2",)
    assert (S | Q.subset(["2"])) == Q.full
    assert not (S & Q.subset(["2"]))
    assert len(list(Q.all_subsets())) == 7
    with pytest.raises(UnknownDimension):
        Q.subset(["4"])


def test_projection_of_bundle_and_menu():
    sp = coffee_space()
    x = sp.alternative(["scones", "tea"])
    first = sp.dims.subset(["1"])
    assert sp.alt_labels(project_alternative(x, first)) == ["scones"]
    A = sp.menu([["scones", "croissants", "cantucci"], ["tea", "coffee"]])
    assert sp.menu_labels(project_menu(A, first)) == [["scones", "croissants", "cantucci"]]


def test_projection_of_choice_image_drops_duplicates():
    sp = coffee_space()
    image = [sp.alternative(["scones", "tea"]), sp.alternative(["cantucci", "coffee"]), sp.alternative(["scones", "coffee"])]
    first = sp.dims.subset(["1"])
    got = [sp.alt_labels(x) for x in project_choice_image(image, first)]
    assert got == [["scones"], ["cantucci"]]


def test_project_on_full_set_is_identity():
    sp = coffee_space()
    x = sp.alternative(["croissants", "coffee"])
    assert project_alternative(x, sp.dims.full) == x


def test_project_outside_scope_rejected():
    sp = coffee_space()
    x = project_alternative(sp.alternative(["scones", "tea"]), sp.dims.subset(["1"]))
    with pytest.raises(ScopeError):
        project_alternative(x, sp.dims.subset(["2"]))


@given(spaces())
def test_flat_index_roundtrip(sp):
    alts = list(sp.alternatives())
    assert [sp.flat_index(x) for x in alts] == list(range(sp.size()))
    assert all(sp.alternative_at(sp.flat_index(x)) == x for x in alts)


def test_complete_menus_count():
    sp = ProductSpace.from_labels(["1", "2"], [["a", "b"], ["x", "y", "z"]])
    menus = sp.complete_menus()
    assert len(menus) == 3 * 7
    assert len(set(menus)) == len(menus)


def test_consumption_dataset_validates():
    D = consumption()
    assert len(D) == 3
    assert D.single_valued
    assert not D.is_complete


def test_choice_images_are_canonical():
    D = JointChoiceDataset.from_labels(
        ["1", "2"], [["a", "b"], ["x", "y"]], [([["a", "b"], ["x", "y"]], [["b", "y"], ["a", "x"], ["b", "y"]])]
    )
    assert [D.space.alt_labels(x) for x in D.choices[0]] == [["a", "x"], ["b", "y"]]


@pytest.mark.parametrize(
    "table, error",
    [
        ([([["a"], ["x"]], [])], EmptyChoice),
        ([([["a"], ["x"]], [["b", "x"]])], ChoiceOutsideMenu),
        ([([["a"], ["x"]], [["a", "x"]]), ([["a"], ["x"]], [["a", "x"]])], DuplicateMenu),
        ([([["a"], ["w"]], [["a", "w"]])], UnknownItem),
        ([([["a"], []], [["a", "x"]])], EmptyMenuSet),
    ],
)
def test_dataset_errors(table, error):
    with pytest.raises(error):
        JointChoiceDataset.from_labels(["1", "2"], [["a", "b"], ["x", "y"]], table)


def _doc():
    return {
        "dimensions": ["1", "2"],
        "universes": {"1": ["a", "b"], "2": ["x", "y"]},
        "menus": [{"sets": {"1": ["a", "b"], "2": ["x"]}, "choice": [["a", "x"]]}],
    }


def test_validate_minimal_document():
    D = validate_dataset(_doc())
    assert len(D) == 1 and D.single_valued


@pytest.mark.parametrize(
    "mutate, error",
    [
        (lambda d: d.update(extra=1), SchemaError),
        (lambda d: d["menus"][0].update(weight=2), SchemaError),
        (lambda d: d["universes"].update({"3": ["p"]}), UnknownDimension),
        (lambda d: d["universes"].pop("2"), SchemaError),
        (lambda d: d["menus"][0]["sets"].pop("2"), SchemaError),
        (lambda d: d["menus"][0]["sets"].update({"2": []}), EmptyMenuSet),
        (lambda d: d["menus"][0].update(choice=[]), EmptyChoice),
        (lambda d: d["menus"][0].update(choice=[["b", "y"]]), ChoiceOutsideMenu),
        (lambda d: d["menus"][0].update(choice=[["q", "x"]]), UnknownItem),
        (lambda d: d.update(menus=[]), SchemaError),
        (lambda d: d.update(dimensions="12"), SchemaError),
        (lambda d: d["universes"].update({"1": ["a", "a"]}), SchemaError),
    ],
)
def test_validate_rejects(mutate, error):
    doc = _doc()
    mutate(doc)
    with pytest.raises(error):
        validate_dataset(doc)


def test_input_errors_are_value_errors():
    assert issubclass(SchemaError, InputError)
    assert issubclass(InputError, ValueError)


@settings(max_examples=60)
@given(datasets())
def test_document_roundtrip(D):
    doc = dataset_document(D)
    again = validate_dataset(json.loads(json.dumps(doc)))
    assert again == D
    assert dataset_document(again) == doc


def test_file_roundtrip(tmp_path):
    D = consumption()
    path = tmp_path / "d.json"
    dump_dataset(D, path)
    assert load_dataset(path) == D


def test_projected_menu_family_groups_in_order():
    D = consumption()
    classes = projected_menu_family(D, D.dims.subset(["3"]))
    assert [D.space.menu_labels(c.menu) for c in classes] == [[["milk", "butter"]], [["butter"]]]
    assert [c.sources for c in classes] == [(0, 1), (2,)]


@given(datasets(), st.data())
def test_projected_family_partitions_menus(D, data):
    S = data.draw(st.sampled_from(list(D.dims.all_subsets())))
    classes = projected_menu_family(D, S)
    seen = sorted(i for c in classes for i in c.sources)
    assert seen == list(range(len(D)))
    for c in classes:
        assert all(project_menu(D.menus[i], S) == c.menu for i in c.sources)
