"""Finite sets and functions as a category.

``FinSetCategory`` is the full subcategory of finite sets on a chosen list of
sets.  Morphisms are ``FunctionTable`` values compared extensionally, so no
table of all functions is ever built; ``build_full_subcategory`` materializes
one as a ``FiniteCategory`` when it is small enough.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from math import prod
from pathlib import Path
from typing import Mapping, Sequence

from .kernel import Category, CategoryError, CategoryFormatError, CompositionError, FiniteCategory
from .universal import BinaryCone, NoMediatorError, NonUniqueMediatorError, TripleCone

DEFAULT_BOUND = 10**6


class FinSetError(CategoryError):
    pass


@dataclass(frozen=True)
class FinSetObject:
    name: str
    elements: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise FinSetError(f"set {self.name} has repeated elements")

    def __len__(self):
        return len(self.elements)


@dataclass(frozen=True)
class FunctionTable:
    """A total function, listed as the images of ``src`` elements in order."""

    src: str
    dst: str
    values: tuple[str, ...]

    @property
    def name(self):
        return f"{self.src}->{self.dst}[{','.join(self.values)}]"

    def __str__(self):
        return self.name


def pair_atom(*parts: str) -> str:
    """Element name for a tuple of atoms; nesting stays unambiguous."""
    return "(" + ",".join(parts) + ")"


def finset(name: str, size_or_elements) -> FinSetObject:
    if isinstance(size_or_elements, int):
        return FinSetObject(name, tuple(str(i) for i in range(size_or_elements)))
    return FinSetObject(name, tuple(str(e) for e in size_or_elements))


class FinSetCategory(Category):
    def __init__(self, sets: Sequence[FinSetObject], name: str = "finset"):
        self.name = name
        self.sets: dict[str, FinSetObject] = {}
        for s in sets:
            if s.name in self.sets:
                raise FinSetError(f"duplicate set name {s.name!r}")
            self.sets[s.name] = s
        self.objects = tuple(sorted(self.sets))
        self._index = {n: {e: i for i, e in enumerate(s.elements)} for n, s in self.sets.items()}

    def __repr__(self):
        sizes = ", ".join(f"{n}:{len(s)}" for n, s in sorted(self.sets.items()))
        return f"FinSetCategory({self.name!r}, {{{sizes}}})"

    def add(self, s: FinSetObject):
        """A new category with one more set."""
        return FinSetCategory([*self.sets.values(), s], self.name)

    def src(self, m: FunctionTable):
        return m.src

    def dst(self, m: FunctionTable):
        return m.dst

    def identity(self, obj):
        self.check_object(obj)
        return FunctionTable(obj, obj, self.sets[obj].elements)

    def table(self, src, dst, mapping: Mapping[str, str]) -> FunctionTable:
        """Build a morphism from an element -> element mapping (checked)."""
        self.check_object(src)
        self.check_object(dst)
        missing = [x for x in self.sets[src].elements if x not in mapping]
        if missing:
            raise FinSetError(f"mapping is not total on {src}: missing {missing}")
        values = tuple(mapping[x] for x in self.sets[src].elements)
        bad = [v for v in values if v not in self._index[dst]]
        if bad:
            raise FinSetError(f"values {bad} are not elements of {dst}")
        return FunctionTable(src, dst, values)

    def constant(self, src, dst, value) -> FunctionTable:
        return self.table(src, dst, {x: value for x in self.sets[src].elements})

    def apply(self, m: FunctionTable, x: str) -> str:
        return m.values[self._index[m.src][x]]

    def compose(self, g: FunctionTable, f: FunctionTable) -> FunctionTable:
        if f.dst != g.src:
            raise CompositionError(f"not composable: {g.name} after {f.name}")
        idx = self._index[g.src]
        return FunctionTable(f.src, g.dst, tuple(g.values[idx[v]] for v in f.values))

    def hom_count(self, a, b) -> int:
        return len(self.sets[b]) ** len(self.sets[a])

    def hom_set(self, a, b):
        self.check_object(a)
        self.check_object(b)
        n = len(self.sets[a])
        homs = [
            FunctionTable(a, b, vals)
            for vals in itertools.product(self.sets[b].elements, repeat=n)
        ]
        return tuple(sorted(homs, key=lambda m: m.name))

    def describe(self, m):
        return m.name

    def parse_morphism(self, text: str) -> FunctionTable:
        """Inverse of ``FunctionTable.name``: ``"A->B[b0,b1]"``."""
        try:
            head, body = text.split("[", 1)
            src, dst = head.split("->")
            values = tuple(v for v in _split_top(body[:-1]) if v != "") if body.endswith("]") else None
        except ValueError:
            values = None
        if values is None or src not in self.sets or dst not in self.sets:
            raise FinSetError(f"cannot parse function table {text!r}")
        if len(values) != len(self.sets[src]):
            raise FinSetError(f"{text!r} lists {len(values)} values for a {len(self.sets[src])}-element set")
        return self.table(src, dst, dict(zip(self.sets[src].elements, values)))

    def is_epi(self, f: FunctionTable) -> bool:
        if set(f.values) == set(self.sets[f.dst].elements):
            return True
        # a non-surjection is split apart by two maps into any set with 2+ elements
        if any(len(s) >= 2 for s in self.sets.values()):
            return False
        return super().is_epi(f)

    def parallel_pair_into(self, obj):
        target = self.sets[obj]
        if len(target) < 2:
            return None
        for name in self.objects:
            if len(self.sets[name]) >= 1:
                a, b = target.elements[:2]
                return self.constant(name, obj, a), self.constant(name, obj, b)
        return None

    def fast_is_limit(self, apex, legs):
        # constant maps out of any nonempty object detect joint bijectivity;
        # when every object is empty all hom-sets are singletons and both agree
        return is_finset_limit(
            [self.sets[leg.dst] for leg in legs], list(legs), len(self.sets[apex])
        )

    def fast_mediate(self, apex, legs, maps):
        x = maps[0].src
        lookup = {}
        for y in self.sets[apex].elements:
            lookup.setdefault(tuple(self.apply(leg, y) for leg in legs), []).append(y)
        values = []
        for e in self.sets[x].elements:
            key = tuple(self.apply(m, e) for m in maps)
            found = lookup.get(key, [])
            if not found:
                raise NoMediatorError(f"no element of {apex} over {key}")
            if len(found) > 1:
                raise NonUniqueMediatorError(f"elements {found} of {apex} all lie over {key}")
            values.append(found[0])
        return FunctionTable(x, apex, tuple(values))


def _split_top(body: str) -> list[str]:
    """Split on commas that are not inside parentheses."""
    out, depth, cur = [], 0, []
    for ch in body:
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    out.append("".join(cur))
    return out


def is_finset_limit(factors: Sequence[FinSetObject], legs: Sequence[FunctionTable], apex_size: int) -> bool:
    """Whether ``x -> (leg_i x)_i`` is a bijection from the apex onto the product of ``factors``."""
    if not legs:
        return apex_size == 1
    if len({leg.src for leg in legs}) != 1:
        return False
    if any(leg.dst != f.name or len(leg.values) != apex_size for leg, f in zip(legs, factors)):
        return False
    if apex_size != prod(len(f) for f in factors):
        return False
    return len(set(zip(*(leg.values for leg in legs)))) == apex_size


def is_finset_product(a: FinSetObject, b: FinSetObject, left: FunctionTable, right: FunctionTable) -> bool:
    if left.src != right.src:
        return False
    return is_finset_limit([a, b], [left, right], len(left.values))


def build_full_subcategory(sets: Sequence[FinSetObject], bound: int = DEFAULT_BOUND, name: str = "finset") -> FiniteCategory:
    """Materialize every function between the given sets as a ``FiniteCategory``."""
    lazy = FinSetCategory(sets, name)
    total = sum(lazy.hom_count(a, b) for a in lazy.objects for b in lazy.objects)
    if total > bound:
        raise FinSetError(
            f"{total} functions between {[len(s) for s in sets]}-element sets exceeds bound {bound}; "
            "use smaller sets or FinSetCategory"
        )
    homs = {(a, b): lazy.hom_set(a, b) for a in lazy.objects for b in lazy.objects}
    morphisms = {m.name: (a, b) for (a, b), ms in homs.items() for m in ms}
    identities = {o: lazy.identity(o).name for o in lazy.objects}
    composition = {}
    for (a, b), fs in homs.items():
        for c in lazy.objects:
            for f in fs:
                for g in homs[b, c]:
                    composition[g.name, f.name] = lazy.compose(g, f).name
    return FiniteCategory([s.name for s in sets], morphisms, identities, composition, name=name)


# -- chosen products ---------------------------------------------------------


@dataclass(frozen=True)
class CarrierProduct:
    """A carrier set with a bijection onto the product of ``factors``."""

    carrier: FinSetObject
    factors: tuple[str, ...]
    encode: tuple[tuple[str, tuple[str, ...]], ...]

    def encoding(self) -> dict[str, tuple[str, ...]]:
        return dict(self.encode)


def carrier_product(carrier: FinSetObject, factors: Sequence[FinSetObject], encode: Mapping[str, Sequence[str]]) -> CarrierProduct:
    factors = list(factors)
    need = prod(len(f) for f in factors)
    if len(carrier) != need:
        raise FinSetError(
            f"carrier {carrier.name} has {len(carrier)} elements, product of {[f.name for f in factors]} has {need}"
        )
    if set(encode) != set(carrier.elements):
        raise FinSetError(f"encode must be defined exactly on the elements of {carrier.name}")
    images = set()
    for x in carrier.elements:
        t = tuple(encode[x])
        if len(t) != len(factors) or any(v not in f.elements for v, f in zip(t, factors)):
            raise FinSetError(f"encode({x}) = {t} is not a tuple in {[f.name for f in factors]}")
        images.add(t)
    if len(images) != need:
        raise FinSetError(f"encode for {carrier.name} is not injective")
    return CarrierProduct(
        carrier,
        tuple(f.name for f in factors),
        tuple((x, tuple(encode[x])) for x in carrier.elements),
    )


def _legs(cp: CarrierProduct) -> list[FunctionTable]:
    enc = cp.encoding()
    return [
        FunctionTable(cp.carrier.name, factor, tuple(enc[x][i] for x in cp.carrier.elements))
        for i, factor in enumerate(cp.factors)
    ]


def product_on_carrier(a: FinSetObject, b: FinSetObject, cp: CarrierProduct) -> BinaryCone:
    if cp.factors != (a.name, b.name):
        raise FinSetError(f"carrier {cp.carrier.name} is for {cp.factors}, not {(a.name, b.name)}")
    left, right = _legs(cp)
    if not is_finset_product(a, b, left, right):
        raise FinSetError(f"carrier {cp.carrier.name} does not give a product cone")
    return BinaryCone(cp.carrier.name, left, right, (a.name, b.name))


def triple_on_carrier(cp: CarrierProduct) -> TripleCone:
    if len(cp.factors) != 3:
        raise FinSetError(f"carrier {cp.carrier.name} has {len(cp.factors)} factors, need 3")
    p, q, r = _legs(cp)
    return TripleCone(cp.carrier.name, p, q, r)


def canonical_product(factors: Sequence[FinSetObject], name: str) -> CarrierProduct:
    """Carrier whose elements are the tuples themselves, e.g. ``(a,b)``."""
    tuples = list(itertools.product(*(f.elements for f in factors)))
    carrier = FinSetObject(name, tuple(pair_atom(*t) for t in tuples))
    return carrier_product(carrier, factors, dict(zip(carrier.elements, tuples)))


def scrambled_product(factors: Sequence[FinSetObject], name: str, rng: random.Random) -> CarrierProduct:
    """Carrier ``x0, x1, ...`` matched to the tuples by a random permutation."""
    tuples = list(itertools.product(*(f.elements for f in factors)))
    rng.shuffle(tuples)
    carrier = FinSetObject(name, tuple(f"x{i}" for i in range(len(tuples))))
    return carrier_product(carrier, factors, dict(zip(carrier.elements, tuples)))


def permuted_product(factors: Sequence[FinSetObject], name: str, permutation: Sequence[int]) -> CarrierProduct:
    """Like ``scrambled_product`` with an explicit permutation of the tuple list."""
    tuples = list(itertools.product(*(f.elements for f in factors)))
    tuples = [tuples[i] for i in permutation]
    carrier = FinSetObject(name, tuple(f"x{i}" for i in range(len(tuples))))
    return carrier_product(carrier, factors, dict(zip(carrier.elements, tuples)))


# -- universe files ----------------------------------------------------------


@dataclass
class Universe:
    category: FinSetCategory
    carriers: dict[str, CarrierProduct]

    def cone(self, name):
        cp = self.carriers[name]
        if len(cp.factors) == 2:
            a, b = (self.category.sets[f] for f in cp.factors)
            return product_on_carrier(a, b, cp)
        return triple_on_carrier(cp)


def universe_from_dict(doc: Mapping, name: str = "universe") -> Universe:
    if not isinstance(doc, Mapping) or "sets" not in doc:
        raise CategoryFormatError("universe document needs a 'sets' object")
    unknown = set(doc) - {"sets", "carriers"}
    if unknown:
        raise CategoryFormatError(f"unknown keys: {sorted(unknown)}")
    try:
        sets = {n: finset(n, els) for n, els in doc["sets"].items()}
        carriers = {}
        for entry in doc.get("carriers", []):
            cname, factors = entry["name"], entry["for"]
            rows = entry["encode"]
            encode = {str(row[0]): tuple(str(v) for v in row[1:]) for row in rows}
            if cname in sets:
                carrier = sets[cname]
            else:
                carrier = FinSetObject(cname, tuple(str(row[0]) for row in rows))
                sets[cname] = carrier
            carriers[cname] = carrier_product(carrier, [sets[f] for f in factors], encode)
    except (KeyError, TypeError, IndexError, AttributeError) as exc:
        raise CategoryFormatError(f"malformed universe document: {exc!r}") from exc
    return Universe(FinSetCategory(list(sets.values()), name), carriers)


def load_universe(path) -> Universe:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return universe_from_dict(json.load(fh), name=path.stem)
