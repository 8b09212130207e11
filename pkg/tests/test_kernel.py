import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conestrict.fixtures import boolean_lattice, corpus, data_path, terminal, walking_arrow
from conestrict.kernel import (
    CategoryFormatError,
    CompositionError,
    FiniteCategory,
    UnknownObjectError,
    category_from_dict,
    is_epi,
    is_posetal,
    load_category,
    validate_category,
)


def monoid(elements, table, name="monoid"):
    """One-object category from a multiplication table {(g, f): g.f}."""
    return FiniteCategory(
        ["*"],
        {m: ("*", "*") for m in elements},
        {"*": elements[0]},
        table,
        name=name,
    )


def naive_associativity_failures(cat):
    ms = sorted(cat.morphisms)
    bad = set()
    for h, g, f in itertools.product(ms, repeat=3):
        if cat.dst(f) != cat.src(g) or cat.dst(g) != cat.src(h):
            continue
        if cat.compose(h, cat.compose(g, f)) != cat.compose(cat.compose(h, g), f):
            bad.add((h, g, f))
    return bad


def kinds(violations):
    return {v.kind for v in violations}


@pytest.mark.parametrize("name", sorted(corpus()))
def test_corpus_is_valid(name):
    assert validate_category(corpus()[name]) == []


@pytest.mark.parametrize("name", ["terminal", "walking_arrow", "boolean_lattice"])
def test_shipped_files_load_and_validate(name):
    cat = load_category(data_path(f"{name}.json"))
    assert validate_category(cat) == []
    assert cat.objects == corpus()[name].objects


def test_roundtrip_through_dict():
    cat = boolean_lattice()
    again = category_from_dict(json.loads(json.dumps(cat.to_dict())))
    assert again.composition == cat.composition
    assert again.morphisms == cat.morphisms


def test_corrupted_monoid_breaks_associativity():
    # {e, a, z} with a.a = z and z absorbing, then z.a overwritten to a
    table = {("e", x): x for x in "eaz"} | {(x, "e"): x for x in "eaz"}
    table |= {("a", "a"): "z", ("a", "z"): "z", ("z", "a"): "z", ("z", "z"): "z"}
    assert validate_category(monoid(["e", "a", "z"], table)) == []
    table[("z", "a")] = "a"
    violations = validate_category(monoid(["e", "a", "z"], table))
    assert kinds(violations) == {"associativity"}
    assert ("a", "z", "a") in {v.morphisms for v in violations}


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_associativity_check_matches_naive(data):
    n = data.draw(st.integers(1, 4))
    names = ["e"] + [f"m{i}" for i in range(1, n)]
    table = {}
    for g in names:
        for f in names:
            if g == "e":
                table[g, f] = f
            elif f == "e":
                table[g, f] = g
            else:
                table[g, f] = data.draw(st.sampled_from(names))
    cat = monoid(names, table)
    found = {v.morphisms for v in validate_category(cat) if v.kind == "associativity"}
    assert found == naive_associativity_failures(cat)


def test_missing_composite_is_reported():
    cat = walking_arrow()
    del cat.composition["id_B", "f"]
    assert kinds(validate_category(cat)) == {"totality"}


def test_bad_identity_and_unit():
    cat = walking_arrow()
    cat.identities["A"] = "f"
    assert "identity" in kinds(validate_category(cat))

    table = {("e", "e"): "e", ("e", "u"): "e", ("u", "e"): "e", ("u", "u"): "u"}
    assert "unit" in kinds(validate_category(monoid(["e", "u"], table)))


def test_endpoint_errors_stop_before_associativity():
    cat = FiniteCategory(["A"], {"id": ("A", "A"), "g": ("A", "Z")}, {"A": "id"}, {("id", "id"): "id"})
    assert "endpoint" in kinds(validate_category(cat))


def test_ill_typed_entry():
    cat = walking_arrow()
    cat.composition["f", "f"] = "f"
    assert "compose" in kinds(validate_category(cat))


@pytest.mark.parametrize(
    "doc",
    [
        [],
        {"objects": []},
        {"objects": [], "morphisms": [], "identities": {}, "compose": [], "extra": 1},
        {"objects": ["A"], "morphisms": [{"name": "i", "src": "A"}], "identities": {}, "compose": []},
        {
            "objects": ["A"],
            "morphisms": [{"name": "i", "src": "A", "dst": "A"}, {"name": "i", "src": "A", "dst": "A"}],
            "identities": {"A": "i"},
            "compose": [],
        },
        {"objects": ["A"], "morphisms": [], "identities": {}, "compose": [["a", "b"]]},
    ],
)
def test_malformed_documents(doc):
    with pytest.raises(CategoryFormatError):
        category_from_dict(doc)


def test_compose_errors():
    cat = walking_arrow()
    assert cat.compose("f", "id_A") == "f"
    with pytest.raises(CompositionError):
        cat.compose("f", "f")
    with pytest.raises(UnknownObjectError):
        cat.hom_set("A", "Q")


def test_epi_and_posetal():
    arrow = walking_arrow()
    assert is_epi(arrow, "f")
    assert is_posetal(arrow) and is_posetal(terminal())
    table = {("e", "e"): "e", ("e", "s"): "s", ("s", "e"): "s", ("s", "s"): "e"}
    z2 = monoid(["e", "s"], table)
    assert not is_posetal(z2)
    assert is_epi(z2, "s")


def test_disagreement_names_both_sides():
    cat = boolean_lattice()
    assert cat.disagreement("id0", "id0") is None
    assert cat.disagreement("id1", "le01") is not None
