"""The natural numbers as a product of themselves via Cantor's pairing."""

from __future__ import annotations

import ast
from dataclasses import dataclass
from math import isqrt

from ..kernel import Category, CategoryError, CompositionError
from ..universal import BinaryCone, same_cones_associator

OBJECT = "N"
DEFAULT_BOUND = 1000
PAIRING = "cantor: pair(x, y) = (x + y)(x + y + 1)/2 + y"


def cantor_pair(x: int, y: int) -> int:
    if x < 0 or y < 0:
        raise ValueError("cantor_pair is defined on natural numbers")
    s = x + y
    return s * (s + 1) // 2 + y


def cantor_unpair(n: int) -> tuple[int, int]:
    if n < 0:
        raise ValueError("cantor_unpair is defined on natural numbers")
    w = (isqrt(8 * n + 1) - 1) // 2
    y = n - w * (w + 1) // 2
    return w - y, y


def nat_alpha(n: int) -> int:
    """``((x, y), z) -> (x, (y, z))`` read through the Cantor bijection."""
    u, z = cantor_unpair(n)
    x, y = cantor_unpair(u)
    return cantor_pair(x, cantor_pair(y, z))


@dataclass(frozen=True)
class NatEndo:
    """A closed term for a total function N -> N."""

    op: str
    args: tuple = ()
    value: int = 0

    def __call__(self, n: int) -> int:
        op = self.op
        if op == "id":
            return n
        if op == "const":
            return self.value
        if op == "fst":
            return cantor_unpair(n)[0]
        if op == "snd":
            return cantor_unpair(n)[1]
        if op == "pair":
            f, g = self.args
            return cantor_pair(f(n), g(n))
        if op == "comp":
            g, f = self.args
            return g(f(n))
        raise CategoryError(f"unknown nat term {op!r}")

    def __str__(self):
        if self.op == "const":
            return f"const({self.value})"
        if self.args:
            return f"{self.op}({', '.join(map(str, self.args))})"
        return self.op


IDENTITY = NatEndo("id")
FST = NatEndo("fst")
SND = NatEndo("snd")


def const(k: int) -> NatEndo:
    return NatEndo("const", value=k)


def pair_of(f: NatEndo, g: NatEndo) -> NatEndo:
    if f == FST and g == SND:
        return IDENTITY
    return NatEndo("pair", (f, g))


def comp(g: NatEndo, f: NatEndo) -> NatEndo:
    """``g . f`` with the evident simplifications."""
    if g == IDENTITY:
        return f
    if f == IDENTITY:
        return g
    if g.op == "const":
        return g
    if g.op == "pair":
        return pair_of(comp(g.args[0], f), comp(g.args[1], f))
    if f.op == "pair" and g in (FST, SND):
        return f.args[0] if g == FST else f.args[1]
    return NatEndo("comp", (g, f))


@dataclass(frozen=True)
class WitnessReport:
    scanned: tuple[int, int]
    index: int | None
    value: int | None
    compared: str

    @property
    def found(self) -> bool:
        return self.index is not None

    def to_dict(self):
        return {
            "scanned": list(self.scanned),
            "index": self.index,
            "value": self.value,
            "compared": self.compared,
            "pairing": PAIRING,
        }


def nat_find_witness(bound: int) -> WitnessReport:
    """First ``n < bound`` moved by ``nat_alpha``."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    for n in range(bound):
        v = nat_alpha(n)
        if v != n:
            return WitnessReport((0, bound), n, v, f"nat_alpha({n}) = {v} != {n}")
    return WitnessReport((0, bound), None, None, "nat_alpha fixes every scanned n")


_ATOMS = {"id": IDENTITY, "fst": FST, "snd": SND, "p1": FST, "p2": SND}


def parse_nat(text: str) -> NatEndo:
    """Parse ``id``, ``fst``, ``snd``, ``const(k)``, ``comp(g, f)``, ``pair(f, g)``."""
    try:
        tree = ast.parse(text.strip(), mode="eval").body
    except SyntaxError as exc:
        raise CategoryError(f"bad nat term {text!r}: {exc.msg}") from None
    return _build(tree, text)


def _build(node, text) -> NatEndo:
    if isinstance(node, ast.Name) and node.id in _ATOMS:
        return _ATOMS[node.id]
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        name, args = node.func.id, node.args
        if name == "const" and len(args) == 1 and isinstance(args[0], ast.Constant) and isinstance(args[0].value, int):
            return const(args[0].value)
        sub = [_build(a, text) for a in args]
        if name == "comp" and len(sub) >= 2:
            out = sub[-1]
            for m in reversed(sub[:-1]):
                out = comp(m, out)
            return out
        if name == "pair" and len(sub) == 2:
            return pair_of(*sub)
    raise CategoryError(f"bad nat term {text!r}")


class NatModel(Category):
    """One object ``N``; morphisms are ``NatEndo`` terms.

    Equality of terms is decided by evaluation on ``0 .. bound-1``.  Universal
    properties are only available for the Cantor cone ``(fst, snd)``.
    """

    def __init__(self, bound: int = DEFAULT_BOUND):
        self.name = "nat"
        self.objects = (OBJECT,)
        self.bound = bound

    def src(self, m):
        return OBJECT

    def dst(self, m):
        return OBJECT

    def identity(self, obj):
        self.check_object(obj)
        return IDENTITY

    def compose(self, g, f):
        if not isinstance(g, NatEndo) or not isinstance(f, NatEndo):
            raise CompositionError("nat morphisms are NatEndo terms")
        return comp(g, f)

    def describe(self, m):
        return str(m)

    def parse_morphism(self, text):
        return parse_nat(text)

    def first_difference(self, f, g):
        for n in range(self.bound):
            if f(n) != g(n):
                return n
        return None

    def eq(self, f, g):
        return f == g or self.first_difference(f, g) is None

    def disagreement(self, f, g):
        n = self.first_difference(f, g)
        if n is None:
            return None
        return {"index": n, "lhs": f(n), "rhs": g(n), "pairing": PAIRING}

    def is_epi(self, f):
        # fst, snd and id are split by n -> pair(n, 0), n -> pair(0, n), id
        if f in (IDENTITY, FST, SND):
            return True
        raise CategoryError(f"cannot decide whether {f} is epic")

    def parallel_pair_into(self, obj):
        self.check_object(obj)
        return IDENTITY, const(0)

    def fast_is_limit(self, apex, legs):
        if tuple(legs) == (FST, SND):
            return True
        raise CategoryError(f"nat model only knows the Cantor cone, not {[str(leg) for leg in legs]}")

    def fast_mediate(self, apex, legs, maps):
        return pair_of(*maps)


def nat_self_cone() -> BinaryCone:
    return BinaryCone(OBJECT, FST, SND, (OBJECT, OBJECT))


def nat_alpha_term(model: NatModel | None = None) -> NatEndo:
    model = model or NatModel()
    return same_cones_associator(model, OBJECT, nat_self_cone())
