"""Binary streams, where C = C x C holds on the nose.

A stream is a function ``N -> {0, 1}``.  A ``PositionalMap`` sends a stream
``s`` to ``m -> s[sigma(m)]`` for an index map ``sigma``; every index map in
use is affine on residue classes:

    sigma(modulus * q + k) = a_k * q + b_k        (0 <= k < modulus)

Maps are kept in the normal form with the smallest such modulus, so two maps
are equal as stream maps exactly when their normal forms agree.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from functools import reduce
from math import gcd

from ..kernel import Category, CategoryError, CompositionError
from ..universal import (
    BinaryCone,
    BracketingChoice,
    NotAProductCone,
    TripleCone,
    same_cones_associator,
    same_cones_choice,
    strict_choice,
)

OBJECT = "C"
DEFAULT_DEPTH = 64


def _lcm(*ns: int) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b), ns, 1)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@dataclass(frozen=True)
class PositionalMap:
    modulus: int
    pieces: tuple[tuple[int, int], ...]
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.modulus < 1 or len(self.pieces) != self.modulus:
            raise ValueError("need exactly one (slope, offset) piece per residue")
        if any(a < 0 or b < 0 for a, b in self.pieces):
            raise ValueError("slopes and offsets must be natural numbers")

    @classmethod
    def make(cls, modulus, pieces, label=""):
        return cls(*_normalize(modulus, tuple(pieces)), label=label)

    def index(self, m: int) -> int:
        q, k = divmod(m, self.modulus)
        a, b = self.pieces[k]
        return a * q + b

    def indices(self, depth: int) -> list[int]:
        return [self.index(m) for m in range(depth)]

    def apply(self, stream, depth: int) -> list:
        """First ``depth`` outputs on ``stream`` (a callable or an indexable)."""
        read = stream if callable(stream) else stream.__getitem__
        return [read(self.index(m)) for m in range(depth)]

    def refine(self, factor: int) -> tuple[tuple[int, int], ...]:
        return tuple(
            (a * factor, a * j + b)
            for j in range(factor)
            for a, b in self.pieces
        )

    def normal_form(self) -> str:
        n = self.modulus
        parts = []
        for k, (a, b) in enumerate(self.pieces):
            lhs = f"{n}q+{k}" if n > 1 else "q"
            rhs = f"{a}q+{b}" if a else f"{b}"
            parts.append(f"{lhs}->{rhs}")
        return "; ".join(parts)

    def __str__(self):
        return self.label or self.normal_form()

    def relabel(self, label: str) -> "PositionalMap":
        return PositionalMap(self.modulus, self.pieces, label=label)


def _normalize(n: int, pieces: tuple[tuple[int, int], ...]):
    for d in _divisors(n):
        step = n // d
        merged = []
        for r in range(d):
            a0, b0 = pieces[r]
            if a0 % step:
                break
            slope = a0 // step
            if any(pieces[r + d * j] != (a0, slope * j + b0) for j in range(step)):
                break
            merged.append((slope, b0))
        else:
            return d, tuple(merged)
    return n, pieces


def _then(first: PositionalMap, second: PositionalMap, label="") -> PositionalMap:
    """Index map ``x -> second(first(x))``."""
    m = second.modulus
    n = first.modulus * m
    out = []
    for big_a, big_b in first.refine(m):
        c, e = second.pieces[big_b % m]
        out.append((c * (big_a // m), c * (big_b // m) + e))
    return PositionalMap.make(n, out, label)


def positional_compose(f: PositionalMap, g: PositionalMap) -> PositionalMap:
    """The stream map ``f . g`` (apply ``g``, then ``f``); its index map reads ``sigma_g . sigma_f``."""
    label = f"{f}.{g}" if f.label and g.label else ""
    return _then(f, g, label)


def _common(maps, modulus):
    """Pieces of each map refined to ``modulus`` (a multiple of every map's own)."""
    return [mp.refine(modulus // mp.modulus) for mp in maps]


def identity() -> PositionalMap:
    return PositionalMap(1, ((1, 0),), label="id")


def double() -> PositionalMap:
    return PositionalMap(1, ((2, 0),), label="p1")


def double_plus_one() -> PositionalMap:
    return PositionalMap(1, ((2, 1),), label="p2")


def constant(k: int) -> PositionalMap:
    return PositionalMap(1, ((0, k),), label=f"const({k})")


def halve() -> PositionalMap:
    return PositionalMap.make(2, ((1, 0), (1, 0)), label="half")


def parity_case(even: PositionalMap, odd: PositionalMap) -> PositionalMap:
    """``sigma(2i) = sigma_even(i)``, ``sigma(2i+1) = sigma_odd(i)``: interleave two maps."""
    n = _lcm(even.modulus, odd.modulus)
    pe, po = _common([even, odd], n)
    pieces = [None] * (2 * n)
    for k in range(n):
        a, b = pe[k]
        pieces[2 * k] = (a, b)
        a, b = po[k]
        pieces[2 * k + 1] = (a, b)
    label = f"pair({even},{odd})" if even.label and odd.label else ""
    return PositionalMap.make(2 * n, pieces, label)


def equal_up_to_depth(f: PositionalMap, g: PositionalMap, depth: int) -> bool:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    return all(f.index(i) == g.index(i) for i in range(depth))


def first_difference(f: PositionalMap, g: PositionalMap):
    """Smallest index where the maps read different positions, or ``None``."""
    # affine pieces on a common modulus n that differ do so at q = 0 or q = 1
    bound = 2 * _lcm(f.modulus, g.modulus)
    for i in range(bound):
        if f.index(i) != g.index(i):
            return i
    return None


def _cover(legs):
    """Residues mod L and, for each, the unique (leg, residue, slope, offset) reading it.

    Returns ``None`` unless the leg images partition N into full residue classes.
    """
    pieces = []
    for li, leg in enumerate(legs):
        for k, (a, b) in enumerate(leg.pieces):
            if a == 0 or b >= a:
                return None
            pieces.append((li, k, a, b))
    big = _lcm(*(a for _, _, a, _ in pieces))
    owners = []
    for c in range(big):
        hits = [p for p in pieces if c % p[2] == p[3]]
        if len(hits) != 1:
            return None
        owners.append(hits[0])
    return big, owners


def is_partition(legs) -> bool:
    return _cover(legs) is not None


def mediate_positional(legs, maps) -> PositionalMap:
    """The unique ``h`` with ``legs[i] . h == maps[i]``, when the legs form a product cone."""
    cover = _cover(legs)
    if cover is None:
        raise NotAProductCone("leg index maps do not partition N")
    big, owners = cover
    # selector x -> preimage index under the owning leg
    sel = []
    for c, (li, k, a, b) in enumerate(owners):
        n = legs[li].modulus
        sel.append((n * big // a, n * (c - b) // a + k))
    selector = PositionalMap.make(big, sel)
    parts = [_then(selector, mp) for mp in maps]
    n = _lcm(big, *(p.modulus for p in parts))
    refined = _common(parts, n)
    pieces = [refined[owners[r % big][0]][r] for r in range(n)]
    return PositionalMap.make(n, pieces)


def section(p: PositionalMap) -> PositionalMap:
    """A right inverse ``s`` of an injective full-class map: ``p . s = id``."""
    pieces = []
    for k, (a, b) in enumerate(p.pieces):
        if a == 0 or b >= a:
            raise CategoryError(f"{p} has no section in the positional class")
        pieces.append((k, a, b))
    big = _lcm(*(a for _, a, _ in pieces))
    sel = []
    for c in range(big):
        hits = [t for t in pieces if c % t[1] == t[2]]
        if len(hits) > 1:
            raise CategoryError(f"{p} is not injective")
        if hits:
            k, a, b = hits[0]
            sel.append((p.modulus * big // a, p.modulus * (c - b) // a + k))
        else:
            sel.append((0, 0))
    return PositionalMap.make(big, sel)


def is_injective(p: PositionalMap) -> bool:
    if any(a == 0 for a, _ in p.pieces):
        return False
    # two progressions b + a*q meet iff their congruences are compatible
    ps = p.pieces
    return all(
        (b1 - b2) % gcd(a1, a2)
        for i, (a1, b1) in enumerate(ps)
        for a2, b2 in ps[i + 1:]
    )


# -- terms -------------------------------------------------------------------

_ATOMS = {
    "id": identity,
    "p1": double,
    "p2": double_plus_one,
    "double": double,
    "double1": double_plus_one,
    "half": halve,
}


def parse_positional(text: str) -> PositionalMap:
    """Parse ``id``, ``p1``, ``p2``, ``half``, ``const(k)``, ``comp(g, f)``, ``pair(f, g)``."""
    try:
        tree = ast.parse(text.strip(), mode="eval").body
    except SyntaxError as exc:
        raise CategoryError(f"bad positional term {text!r}: {exc.msg}") from None
    return _build(tree, text).relabel(text.strip())


def _build(node, text) -> PositionalMap:
    if isinstance(node, ast.Name) and node.id in _ATOMS:
        return _ATOMS[node.id]()
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        name, args = node.func.id, node.args
        if name == "const" and len(args) == 1 and isinstance(args[0], ast.Constant) and isinstance(args[0].value, int):
            return constant(args[0].value)
        sub = [_build(a, text) for a in args]
        if name == "comp" and len(sub) >= 2:
            out = sub[-1]
            for m in reversed(sub[:-1]):
                out = positional_compose(m, out)
            return out
        if name in ("pair", "case") and len(sub) == 2:
            return parity_case(*sub)
    raise CategoryError(f"bad positional term {text!r} at {ast.dump(node)}")


# -- the model ---------------------------------------------------------------


class StreamModel(Category):
    """One object ``C`` (binary streams) and the positional maps as morphisms."""

    def __init__(self, depth: int = DEFAULT_DEPTH):
        self.name = "stream"
        self.objects = (OBJECT,)
        self.depth = depth

    def src(self, m):
        return OBJECT

    def dst(self, m):
        return OBJECT

    def identity(self, obj):
        self.check_object(obj)
        return identity()

    def compose(self, g, f):
        if not isinstance(g, PositionalMap) or not isinstance(f, PositionalMap):
            raise CompositionError("stream morphisms are positional maps")
        return positional_compose(g, f)

    def describe(self, m):
        return m.normal_form()

    def parse_morphism(self, text):
        return parse_positional(text)

    def disagreement(self, f, g):
        i = first_difference(f, g)
        if i is None:
            return None
        return {"index": i, "lhs_reads": f.index(i), "rhs_reads": g.index(i)}

    def is_epi(self, f):
        # m -> s[sigma(m)] is onto streams exactly when sigma is injective
        return is_injective(f)

    def parallel_pair_into(self, obj):
        self.check_object(obj)
        return identity(), constant(0)

    def fast_is_limit(self, apex, legs):
        return is_partition(legs)

    def fast_mediate(self, apex, legs, maps):
        return mediate_positional(legs, maps)


def stream_cone() -> tuple[PositionalMap, PositionalMap]:
    return double(), double_plus_one()


def stream_self_cone() -> BinaryCone:
    p1, p2 = stream_cone()
    return BinaryCone(OBJECT, p1, p2, (OBJECT, OBJECT))


def stream_pair(f: PositionalMap, g: PositionalMap) -> PositionalMap:
    return parity_case(f, g)


def stream_same_cones_choice() -> BracketingChoice:
    return same_cones_choice(stream_self_cone())


def stream_alpha_same_cones(model: StreamModel | None = None) -> PositionalMap:
    model = model or StreamModel()
    return same_cones_associator(model, OBJECT, stream_self_cone())


def stream_triple_cone() -> TripleCone:
    p1, p2 = stream_cone()
    return TripleCone(
        OBJECT,
        positional_compose(p1, p1),
        positional_compose(p2, p1),
        p2,
    )


def stream_strict_cones(model: StreamModel | None = None) -> BracketingChoice:
    model = model or StreamModel()
    c = stream_self_cone()
    return strict_choice(model, c, c, stream_triple_cone())
