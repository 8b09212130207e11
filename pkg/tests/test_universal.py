import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conestrict.finset import FinSetCategory, build_full_subcategory, canonical_product, finset, product_on_carrier
from conestrict.fixtures import boolean_lattice, random_configuration, sub4_materialized, sub8, terminal
from conestrict.infinite.stream import StreamModel, stream_self_cone, stream_triple_cone
from conestrict.universal import (
    BinaryCone,
    BracketingChoice,
    ChoiceConflict,
    ConeMismatchError,
    NotAProductCone,
    associator,
    associator_solutions,
    cone,
    is_identity,
    is_product_cone,
    is_subterminal,
    is_triple_product_cone,
    outward_choice,
    pair,
    paste_left,
    paste_right,
    same_cone,
    same_cones_associator,
    same_triple,
    satisfies_associator_equations,
    self_product_cones,
    strict_choice,
    unpaste_left,
    unpaste_right,
)


def rebracket(atom):
    """'((a,b),c)' -> '(a,(b,c))' by string surgery on the canonical atoms."""
    inner, c = atom[1:-1].rsplit(",", 1)
    a, b = inner[1:-1].split(",")
    return f"({a},({b},{c}))"


def test_meets_in_the_lattice():
    cat = boolean_lattice()
    meet = BinaryCone("0", "id0", "le01", ("0", "1"))
    assert is_product_cone(cat, meet)
    assert is_product_cone(cat, meet, brute_force=True)
    assert not is_product_cone(cat, BinaryCone("1", "id1", "le01", ("1", "1")))
    assert pair(cat, meet, "id0", "le01") == "id0"


def test_product_cones_of_two_by_two():
    # product cones 4 -> (2, 2) correspond to bijections 4 -> 2 x 2
    cat = sub4_materialized()
    legs = cat.hom_set("4", "2")
    count = sum(is_product_cone(cat, BinaryCone("4", l, r, ("2", "2"))) for l in legs for r in legs)
    assert count == 24


def test_canonical_associator_rebrackets():
    s = sub8()
    alpha = associator(s.cat, s.choice)
    elements = s.cat.sets["8"].elements
    assert [s.cat.apply(alpha, x) for x in elements] == [rebracket(x) for x in elements]
    assert satisfies_associator_equations(s.cat, s.choice, alpha)


def test_associator_is_the_only_solution():
    one, two = finset("1", 1), finset("2", 2)
    ab = canonical_product([one, two], "AB")
    bc = canonical_product([two, one], "BC")
    left = canonical_product([ab.carrier, one], "L")
    right = canonical_product([one, bc.carrier], "R")
    cat = build_full_subcategory([one, two, ab.carrier, bc.carrier, left.carrier, right.carrier])
    lazy = FinSetCategory([one, two, ab.carrier, bc.carrier, left.carrier, right.carrier])

    def named(c):
        return BinaryCone(c.apex, c.left.name, c.right.name, c.targets)

    cones = [
        product_on_carrier(one, two, ab),
        product_on_carrier(two, one, bc),
        product_on_carrier(ab.carrier, one, left),
        product_on_carrier(one, bc.carrier, right),
    ]
    choice = BracketingChoice(*(named(c) for c in cones))
    assert associator_solutions(cat, choice) == [associator(cat, choice)]
    assert associator(lazy, BracketingChoice(*cones)).name == associator(cat, choice)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_paste_bijections(seed):
    rc = random_configuration(random.Random(seed), 3)
    cat = rc.cat
    tl = paste_left(cat, rc.cone_ab, rc.cone_l)
    tr = paste_right(cat, rc.cone_bc, rc.cone_r)
    assert is_triple_product_cone(cat, tl) and is_triple_product_cone(cat, tr)
    assert same_cone(cat, unpaste_left(cat, rc.cone_ab, tl), rc.cone_l)
    assert same_cone(cat, unpaste_right(cat, rc.cone_bc, tr), rc.cone_r)
    assert same_triple(cat, paste_left(cat, rc.cone_ab, unpaste_left(cat, rc.cone_ab, rc.triple)), rc.triple)
    assert same_triple(cat, paste_right(cat, rc.cone_bc, unpaste_right(cat, rc.cone_bc, rc.triple)), rc.triple)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_random_associator_is_an_isomorphism(seed):
    rc = random_configuration(random.Random(seed), 3)
    cat = rc.cat
    alpha = associator(cat, rc.choice)
    assert len(set(alpha.values)) == len(alpha.values)
    assert is_identity(cat, associator(cat, strict_choice(cat, rc.cone_ab, rc.cone_bc, rc.triple)))


def test_unpaste_needs_a_product():
    s = sub8()
    bad = BinaryCone("4", s.cone_ab.left, s.cone_ab.left, ("2", "2"))
    with pytest.raises(NotAProductCone):
        unpaste_left(s.cat, bad, paste_left(s.cat, s.cone_ab, s.cone_l))


def test_cone_legs_must_share_a_source():
    cat = boolean_lattice()
    with pytest.raises(ConeMismatchError):
        cone(cat, "id0", "id1")


def test_subterminal_lemma_on_posets():
    for cat in (terminal(), boolean_lattice()):
        for obj in cat.objects:
            cones = self_product_cones(cat, obj)
            assert cones
            for c in cones:
                assert is_identity(cat, same_cones_associator(cat, obj, c)) == is_subterminal(cat, obj)


def test_self_product_cones_in_sets():
    cat = sub4_materialized()
    assert len(self_product_cones(cat, "1")) == 1
    assert self_product_cones(cat, "2") == []


def test_outward_choice_on_distinct_objects():
    s = sub8()
    out = outward_choice(s.cat, s.cone_ab, s.cone_ab, paste_left(s.cat, s.cone_ab, s.cone_l))
    assert out.tensor("4", "2") == "8"
    assert ("2", "2") in out and len(out) == 3


def test_outward_choice_conflicts_on_a_self_product():
    cat = StreamModel()
    c = stream_self_cone()
    with pytest.raises(ChoiceConflict):
        outward_choice(cat, c, c, stream_triple_cone())


def test_choice_problems_are_reported():
    s = sub8()
    swapped = BracketingChoice(s.cone_ab, s.cone_ab, s.cone_r, s.cone_l)
    assert swapped.problems(s.cat)
    with pytest.raises(NotAProductCone):
        associator(s.cat, swapped)


def test_terminal_brute_force():
    cat = terminal()
    assert is_product_cone(cat, BinaryCone("*", "id", "id", ("*", "*")), brute_force=True)
