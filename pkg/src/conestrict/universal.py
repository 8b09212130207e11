"""Product cones, pairing, cone pasting and associators built from cones.

Every operation takes the ambient category first.  Universal properties are
checked by exhaustive search over hom-sets unless the category offers an
exact shortcut (``fast_is_limit`` / ``fast_mediate``); ``brute_force=True``
forces the search.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Any

from .kernel import Category, CategoryError


class UniversalPropertyError(CategoryError):
    pass


class NotAProductCone(UniversalPropertyError):
    pass


class NoMediatorError(UniversalPropertyError):
    pass


class NonUniqueMediatorError(UniversalPropertyError):
    pass


class ConeMismatchError(UniversalPropertyError):
    pass


class ChoiceConflict(UniversalPropertyError):
    pass


@dataclass(frozen=True)
class BinaryCone:
    apex: str
    left: Any
    right: Any
    targets: tuple[str, str]

    @property
    def legs(self):
        return (self.left, self.right)

    def describe(self, cat: Category):
        return {
            "apex": self.apex,
            "left": cat.describe(self.left),
            "right": cat.describe(self.right),
            "targets": list(self.targets),
        }


@dataclass(frozen=True)
class TripleCone:
    apex: str
    p: Any
    q: Any
    r: Any

    @property
    def legs(self):
        return (self.p, self.q, self.r)

    def describe(self, cat: Category):
        return {
            "apex": self.apex,
            "p": cat.describe(self.p),
            "q": cat.describe(self.q),
            "r": cat.describe(self.r),
        }


def cone(cat: Category, left, right) -> BinaryCone:
    apex = cat.src(left)
    if cat.src(right) != apex:
        raise ConeMismatchError(
            f"legs {cat.describe(left)} and {cat.describe(right)} have different sources"
        )
    return BinaryCone(apex, left, right, (cat.dst(left), cat.dst(right)))


def triple_cone(cat: Category, p, q, r) -> TripleCone:
    apex = cat.src(p)
    if cat.src(q) != apex or cat.src(r) != apex:
        raise ConeMismatchError("triple cone legs must share a source")
    return TripleCone(apex, p, q, r)


def _well_formed(cat: Category, c: BinaryCone) -> bool:
    return (
        cat.src(c.left) == c.apex
        and cat.src(c.right) == c.apex
        and (cat.dst(c.left), cat.dst(c.right)) == tuple(c.targets)
    )


# -- brute force ------------------------------------------------------------


def brute_force_is_limit(cat: Category, apex, legs) -> bool:
    """For every X, composing with the legs is a bijection hom(X, apex) -> prod hom(X, T_i)."""
    targets = [cat.dst(leg) for leg in legs]
    for x in cat.objects:
        need = prod(len(cat.hom_set(x, t)) for t in targets)
        hom = cat.hom_set(x, apex)
        if len(hom) != need:
            return False
        images = {tuple(cat.compose(leg, h) for leg in legs) for h in hom}
        if len(images) != need:
            return False
    return True


def brute_force_mediators(cat: Category, apex, legs, maps) -> list:
    x = cat.src(maps[0])
    return [
        h
        for h in cat.hom_set(x, apex)
        if all(cat.eq(cat.compose(leg, h), m) for leg, m in zip(legs, maps))
    ]


# -- universal properties ----------------------------------------------------


def is_limit(cat: Category, apex, legs, brute_force: bool = False) -> bool:
    legs = tuple(legs)
    if brute_force:
        return brute_force_is_limit(cat, apex, legs)
    cache = cat.__dict__.setdefault("_limit_cache", {})
    key = (apex, legs)
    if key not in cache:
        fast = cat.fast_is_limit(apex, legs)
        cache[key] = brute_force_is_limit(cat, apex, legs) if fast is None else fast
    return cache[key]


def is_product_cone(cat: Category, c: BinaryCone, brute_force: bool = False) -> bool:
    if not _well_formed(cat, c):
        return False
    return is_limit(cat, c.apex, c.legs, brute_force)


def is_triple_product_cone(cat: Category, tc: TripleCone, brute_force: bool = False) -> bool:
    if any(cat.src(leg) != tc.apex for leg in tc.legs):
        return False
    return is_limit(cat, tc.apex, tc.legs, brute_force)


def mediate(cat: Category, apex, legs, maps, brute_force: bool = False):
    """The unique ``h`` with ``legs[i] . h == maps[i]`` for every ``i``."""
    legs, maps = tuple(legs), tuple(maps)
    if len(legs) != len(maps):
        raise ConeMismatchError("need one map per leg")
    x = cat.src(maps[0])
    for leg, m in zip(legs, maps):
        if cat.src(m) != x:
            raise ConeMismatchError("maps to be paired must share a source")
        if cat.dst(m) != cat.dst(leg):
            raise ConeMismatchError(
                f"{cat.describe(m)} lands in {cat.dst(m)}, leg {cat.describe(leg)} in {cat.dst(leg)}"
            )
    if not is_limit(cat, apex, legs, brute_force):
        raise NotAProductCone(f"legs {[cat.describe(leg) for leg in legs]} do not form a product cone")
    if not brute_force:
        h = cat.fast_mediate(apex, legs, maps)
        if h is not None:
            return h
    found = brute_force_mediators(cat, apex, legs, maps)
    witness = [cat.describe(m) for m in maps]
    if not found:
        raise NoMediatorError(f"no mediating morphism for {witness}")
    if len(found) > 1:
        raise NonUniqueMediatorError(
            f"{len(found)} mediating morphisms for {witness}: {[cat.describe(h) for h in found[:4]]}"
        )
    return found[0]


def pair(cat: Category, c: BinaryCone, f, g, brute_force: bool = False):
    return mediate(cat, c.apex, c.legs, (f, g), brute_force)


def times(cat: Category, dom_cone: BinaryCone, cod_cone: BinaryCone, f, g):
    """``f x g``: the pairing of ``f . left`` and ``g . right`` through ``cod_cone``."""
    return pair(
        cat,
        cod_cone,
        cat.compose(f, dom_cone.left),
        cat.compose(g, dom_cone.right),
    )


def _require_product(cat, c: BinaryCone, what: str):
    if not is_product_cone(cat, c):
        raise NotAProductCone(f"{what} is not a product cone: {c.describe(cat)}")


# -- pasting -----------------------------------------------------------------


def paste_left(cat: Category, prod_ab: BinaryCone, left_cone: BinaryCone) -> TripleCone:
    if left_cone.targets[0] != prod_ab.apex:
        raise ConeMismatchError(
            f"left cone targets {left_cone.targets} do not start at {prod_ab.apex}"
        )
    _require_product(cat, prod_ab, "A x B cone")
    _require_product(cat, left_cone, "(A x B) x C cone")
    return TripleCone(
        left_cone.apex,
        cat.compose(prod_ab.left, left_cone.left),
        cat.compose(prod_ab.right, left_cone.left),
        left_cone.right,
    )


def unpaste_left(cat: Category, prod_ab: BinaryCone, tc: TripleCone) -> BinaryCone:
    if (cat.dst(tc.p), cat.dst(tc.q)) != tuple(prod_ab.targets):
        raise ConeMismatchError(f"triple cone does not start with {prod_ab.targets}")
    _require_product(cat, prod_ab, "A x B cone")
    if not is_triple_product_cone(cat, tc):
        raise NotAProductCone(f"not a triple product cone: {tc.describe(cat)}")
    return BinaryCone(tc.apex, pair(cat, prod_ab, tc.p, tc.q), tc.r, (prod_ab.apex, cat.dst(tc.r)))


def paste_right(cat: Category, prod_bc: BinaryCone, right_cone: BinaryCone) -> TripleCone:
    if right_cone.targets[1] != prod_bc.apex:
        raise ConeMismatchError(
            f"right cone targets {right_cone.targets} do not end at {prod_bc.apex}"
        )
    _require_product(cat, prod_bc, "B x C cone")
    _require_product(cat, right_cone, "A x (B x C) cone")
    return TripleCone(
        right_cone.apex,
        right_cone.left,
        cat.compose(prod_bc.left, right_cone.right),
        cat.compose(prod_bc.right, right_cone.right),
    )


def unpaste_right(cat: Category, prod_bc: BinaryCone, tc: TripleCone) -> BinaryCone:
    if (cat.dst(tc.q), cat.dst(tc.r)) != tuple(prod_bc.targets):
        raise ConeMismatchError(f"triple cone does not end with {prod_bc.targets}")
    _require_product(cat, prod_bc, "B x C cone")
    if not is_triple_product_cone(cat, tc):
        raise NotAProductCone(f"not a triple product cone: {tc.describe(cat)}")
    return BinaryCone(tc.apex, tc.p, pair(cat, prod_bc, tc.q, tc.r), (cat.dst(tc.p), prod_bc.apex))


def same_triple(cat: Category, s: TripleCone, t: TripleCone) -> bool:
    return s.apex == t.apex and all(cat.eq(a, b) for a, b in zip(s.legs, t.legs))


def same_cone(cat: Category, s: BinaryCone, t: BinaryCone) -> bool:
    return (
        s.apex == t.apex
        and tuple(s.targets) == tuple(t.targets)
        and cat.eq(s.left, t.left)
        and cat.eq(s.right, t.right)
    )


# -- associators -------------------------------------------------------------


@dataclass(frozen=True)
class BracketingChoice:
    """The four cones that pin down one associator component.

    ``cone_l`` exhibits its apex as ``(A x B) x C`` and ``cone_r`` as
    ``A x (B x C)``.
    """

    cone_ab: BinaryCone
    cone_bc: BinaryCone
    cone_l: BinaryCone
    cone_r: BinaryCone

    @property
    def objects(self):
        return (self.cone_ab.targets[0], self.cone_ab.targets[1], self.cone_bc.targets[1])

    def problems(self, cat: Category) -> list[str]:
        out = []
        a, b = self.cone_ab.targets
        b2, c = self.cone_bc.targets
        if b != b2:
            out.append(f"A x B and B x C disagree on B: {b} vs {b2}")
        if tuple(self.cone_l.targets) != (self.cone_ab.apex, c):
            out.append(f"left cone targets {self.cone_l.targets}, expected {(self.cone_ab.apex, c)}")
        if tuple(self.cone_r.targets) != (a, self.cone_bc.apex):
            out.append(f"right cone targets {self.cone_r.targets}, expected {(a, self.cone_bc.apex)}")
        if not out:
            for label, c_ in self.named_cones():
                if not is_product_cone(cat, c_):
                    out.append(f"cone {label} is not a product cone")
        return out

    def named_cones(self):
        return (("ab", self.cone_ab), ("bc", self.cone_bc), ("l", self.cone_l), ("r", self.cone_r))

    def describe(self, cat: Category):
        return {label: c.describe(cat) for label, c in self.named_cones()}


def associator_equations(cat: Category, choice: BracketingChoice, alpha):
    """The three defining equations as (label, lhs, rhs) triples."""
    ab, bc, lc, rc = choice.cone_ab, choice.cone_bc, choice.cone_l, choice.cone_r
    comp = cat.compose_all
    return [
        ("pi_r1 . alpha = pi_ab1 . pi_l1", comp(rc.left, alpha), comp(ab.left, lc.left)),
        ("pi_bc1 . pi_r2 . alpha = pi_ab2 . pi_l1", comp(bc.left, rc.right, alpha), comp(ab.right, lc.left)),
        ("pi_bc2 . pi_r2 . alpha = pi_l2", comp(bc.right, rc.right, alpha), lc.right),
    ]


def satisfies_associator_equations(cat: Category, choice: BracketingChoice, alpha) -> bool:
    return all(cat.eq(lhs, rhs) for _, lhs, rhs in associator_equations(cat, choice, alpha))


def associator(cat: Category, choice: BracketingChoice):
    """The unique morphism ``(A x B) x C -> A x (B x C)`` fixed by the four cones.

    Built as the mediating morphism into ``paste_right(cone_bc, cone_r)`` for
    the legs of ``paste_left(cone_ab, cone_l)``.
    """
    problems = choice.problems(cat)
    if problems:
        raise NotAProductCone("; ".join(problems))
    left = paste_left(cat, choice.cone_ab, choice.cone_l)
    right = paste_right(cat, choice.cone_bc, choice.cone_r)
    inner = pair(cat, choice.cone_bc, left.q, left.r)
    alpha = pair(cat, choice.cone_r, left.p, inner)
    # the nested pairing is the triple mediator; re-check it as such
    if not all(cat.eq(cat.compose(leg, alpha), m) for leg, m in zip(right.legs, left.legs)):
        raise NoMediatorError("nested pairing does not mediate between the pasted triple cones")
    if not satisfies_associator_equations(cat, choice, alpha):
        raise NoMediatorError("associator candidate violates its defining equations")
    return alpha


def associator_solutions(cat: Category, choice: BracketingChoice) -> list:
    """Every morphism satisfying the defining equations, by enumeration."""
    return [
        a
        for a in cat.hom_set(choice.cone_l.apex, choice.cone_r.apex)
        if satisfies_associator_equations(cat, choice, a)
    ]


def is_identity(cat: Category, m) -> bool:
    s = cat.src(m)
    return s == cat.dst(m) and cat.eq(m, cat.identity(s))


def same_cones_choice(self_cone: BinaryCone) -> BracketingChoice:
    return BracketingChoice(self_cone, self_cone, self_cone, self_cone)


def same_cones_associator(cat: Category, obj, self_cone: BinaryCone):
    if self_cone.apex != obj or tuple(self_cone.targets) != (obj, obj):
        raise ConeMismatchError(f"{self_cone.describe(cat)} is not a cone {obj} -> ({obj}, {obj})")
    return associator(cat, same_cones_choice(self_cone))


def subterminal_witness(cat: Category, obj):
    """Two distinct morphisms into ``obj``, or ``None`` when there are none."""
    cat.check_object(obj)
    return cat.parallel_pair_into(obj)


def is_subterminal(cat: Category, obj) -> bool:
    return subterminal_witness(cat, obj) is None


def self_product_cones(cat: Category, obj) -> list[BinaryCone]:
    """All cones ``obj -> (obj, obj)`` that are product cones (finite hom-sets only)."""
    hom = cat.hom_set(obj, obj)
    out = []
    for left in hom:
        for right in hom:
            c = BinaryCone(obj, left, right, (obj, obj))
            if is_product_cone(cat, c):
                out.append(c)
    return out


def strict_choice(
    cat: Category, cone_ab: BinaryCone, cone_bc: BinaryCone, tc: TripleCone
) -> BracketingChoice:
    """Cones on the apex of ``tc`` for both bracketings, making the associator the identity."""
    return BracketingChoice(
        cone_ab,
        cone_bc,
        unpaste_left(cat, cone_ab, tc),
        unpaste_right(cat, cone_bc, tc),
    )


class MonoidalChoice:
    """A partial assignment of chosen product cones to ordered pairs of objects."""

    def __init__(self, cat: Category):
        self.cat = cat
        self.cones: dict[tuple[str, str], BinaryCone] = {}

    def assign(self, a, b, c: BinaryCone):
        if tuple(c.targets) != (a, b):
            raise ConeMismatchError(f"cone over {c.targets} assigned to ({a}, {b})")
        _require_product(self.cat, c, f"cone for ({a}, {b})")
        old = self.cones.get((a, b))
        if old is not None and not same_cone(self.cat, old, c):
            raise ChoiceConflict(
                f"({a}, {b}) already has cone {old.describe(self.cat)}, "
                f"cannot also take {c.describe(self.cat)}"
            )
        self.cones[a, b] = c

    def tensor(self, a, b):
        return self.cones[a, b].apex

    def cone(self, a, b) -> BinaryCone:
        return self.cones[a, b]

    def __contains__(self, key):
        return key in self.cones

    def __len__(self):
        return len(self.cones)


def outward_choice(cat: Category, cone_ab, cone_bc, tc) -> MonoidalChoice:
    """Assign ``A x B``, ``B x C`` and both bracketings of ``A x B x C`` from a strict choice.

    Raises ``ChoiceConflict`` when two of those pairs coincide but would need
    different cones.
    """
    choice = strict_choice(cat, cone_ab, cone_bc, tc)
    out = MonoidalChoice(cat)
    a, b, c = choice.objects
    out.assign(a, b, choice.cone_ab)
    out.assign(b, c, choice.cone_bc)
    out.assign(choice.cone_ab.apex, c, choice.cone_l)
    out.assign(a, choice.cone_bc.apex, choice.cone_r)
    return out
