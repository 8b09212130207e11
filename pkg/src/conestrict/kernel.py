"""Finite categories given by explicit composition tables.

Composition is written outer-first: ``compose(g, f)`` is ``g . f``, the
morphism that applies ``f`` and then ``g``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Hashable, Iterable, Mapping

import numpy as np

Morphism = Hashable


class CategoryError(Exception):
    pass


class CompositionError(CategoryError):
    pass


class UnknownObjectError(CategoryError):
    pass


class CategoryFormatError(CategoryError, ValueError):
    pass


class Category:
    """Common surface of every category the package works in.

    Subclasses supply ``objects``, ``src``, ``dst``, ``identity`` and
    ``compose``.  ``hom_set`` only has to work where hom-sets are finite;
    models with infinite hom-sets override the predicates that would need it.
    """

    name = "category"
    objects: tuple[str, ...] = ()

    def src(self, m):
        raise NotImplementedError

    def dst(self, m):
        raise NotImplementedError

    def identity(self, obj):
        raise NotImplementedError

    def compose(self, g, f):
        raise NotImplementedError

    def hom_set(self, a, b):
        raise NotImplementedError(f"{self.name}: hom-sets are not enumerable")

    def eq(self, f, g) -> bool:
        return f == g

    def has_object(self, obj) -> bool:
        return obj in self.objects

    def check_object(self, obj):
        if not self.has_object(obj):
            raise UnknownObjectError(f"{self.name}: unknown object {obj!r}")

    def compose_all(self, *ms):
        """``compose_all(h, g, f) == h . g . f``."""
        out = ms[-1]
        for m in reversed(ms[:-1]):
            out = self.compose(m, out)
        return out

    def is_epi(self, f) -> bool:
        # u.f is injective in u, for every codomain D
        for d in self.objects:
            hom = self.hom_set(self.dst(f), d)
            if len({self.compose(u, f) for u in hom}) != len(hom):
                return False
        return True

    def describe(self, m) -> str:
        return str(m)

    def disagreement(self, f, g):
        """``None`` when ``f`` and ``g`` are equal, else a JSON-able witness."""
        if self.eq(f, g):
            return None
        return {"lhs": self.describe(f), "rhs": self.describe(g)}

    def parallel_pair_into(self, obj):
        """Two distinct morphisms with codomain ``obj``, or ``None``."""
        for a in self.objects:
            hom = self.hom_set(a, obj)
            if len(hom) > 1:
                return hom[0], hom[1]
        return None

    # Backends may answer universal-property questions without enumerating
    # hom-sets.  ``None`` means "no shortcut, fall back to brute force".
    def fast_is_limit(self, apex, legs):
        return None

    def fast_mediate(self, apex, legs, maps):
        return None


@dataclass(frozen=True)
class Violation:
    kind: str
    morphisms: tuple[str, ...]
    detail: str

    def __str__(self):
        return f"{self.kind}: {self.detail}"

    def to_dict(self):
        return {"kind": self.kind, "morphisms": list(self.morphisms), "detail": self.detail}


class FiniteCategory(Category):
    """A category stored as explicit tables of names."""

    def __init__(
        self,
        objects: Iterable[str],
        morphisms: Mapping[str, tuple[str, str]],
        identities: Mapping[str, str],
        composition: Mapping[tuple[str, str], str],
        name: str = "finite",
    ):
        self.name = name
        self.object_list = list(objects)
        self.objects = tuple(sorted(set(self.object_list)))
        self.morphisms = dict(morphisms)
        self.identities = dict(identities)
        self.composition = dict(composition)
        self._homs: dict[tuple[str, str], tuple[str, ...]] = {}
        for m in sorted(self.morphisms):
            self._homs.setdefault(self.morphisms[m], []).append(m)
        self._homs = {k: tuple(v) for k, v in self._homs.items()}

    def __repr__(self):
        return (
            f"FiniteCategory({self.name!r}, {len(self.objects)} objects, "
            f"{len(self.morphisms)} morphisms)"
        )

    def _endpoints(self, m):
        try:
            return self.morphisms[m]
        except KeyError:
            raise CategoryError(f"{self.name}: unknown morphism {m!r}") from None

    def src(self, m):
        return self._endpoints(m)[0]

    def dst(self, m):
        return self._endpoints(m)[1]

    def identity(self, obj):
        self.check_object(obj)
        return self.identities[obj]

    def compose(self, g, f):
        gs, gd = self._endpoints(g)
        fs, fd = self._endpoints(f)
        if fd != gs:
            raise CompositionError(
                f"not composable: {g}: {gs}->{gd} after {f}: {fs}->{fd}"
            )
        try:
            return self.composition[g, f]
        except KeyError:
            raise CompositionError(f"composition table has no entry for {g} . {f}") from None

    def hom_set(self, a, b):
        self.check_object(a)
        self.check_object(b)
        return self._homs.get((a, b), ())

    def to_dict(self):
        return {
            "objects": list(self.object_list),
            "morphisms": [
                {"name": m, "src": s, "dst": d} for m, (s, d) in sorted(self.morphisms.items())
            ],
            "identities": dict(sorted(self.identities.items())),
            "compose": [[g, f, h] for (g, f), h in sorted(self.composition.items())],
        }


_CATEGORY_KEYS = {"objects", "morphisms", "identities", "compose"}


def category_from_dict(doc: Mapping, name: str = "finite") -> FiniteCategory:
    if not isinstance(doc, Mapping):
        raise CategoryFormatError("category document must be a JSON object")
    unknown = set(doc) - _CATEGORY_KEYS
    if unknown:
        raise CategoryFormatError(f"unknown keys: {sorted(unknown)}")
    missing = _CATEGORY_KEYS - set(doc)
    if missing:
        raise CategoryFormatError(f"missing keys: {sorted(missing)}")
    try:
        objects = [str(o) for o in doc["objects"]]
        morphisms = {}
        for entry in doc["morphisms"]:
            if set(entry) != {"name", "src", "dst"}:
                raise CategoryFormatError(f"bad morphism entry {entry!r}")
            if entry["name"] in morphisms:
                raise CategoryFormatError(f"duplicate morphism name {entry['name']!r}")
            morphisms[entry["name"]] = (entry["src"], entry["dst"])
        identities = dict(doc["identities"])
        composition = {}
        for triple in doc["compose"]:
            g, f, h = triple
            composition[g, f] = h
    except (TypeError, ValueError, KeyError) as exc:
        if isinstance(exc, CategoryFormatError):
            raise
        raise CategoryFormatError(f"malformed category document: {exc}") from exc
    return FiniteCategory(objects, morphisms, identities, composition, name=name)


def load_category(path) -> FiniteCategory:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        doc = json.load(fh)
    return category_from_dict(doc, name=path.stem)


def validate_category(cat: FiniteCategory) -> list[Violation]:
    """Every broken category law, as data.  An empty list means valid."""
    out: list[Violation] = []
    seen = set()
    for o in cat.object_list:
        if not isinstance(o, str) or not o:
            out.append(Violation("object", (), f"object name {o!r} must be a nonempty string"))
        elif o in seen:
            out.append(Violation("object", (), f"duplicate object {o!r}"))
        seen.add(o)

    endpoints_ok = True
    for m, (s, d) in sorted(cat.morphisms.items()):
        if not m:
            out.append(Violation("morphism", (m,), "empty morphism name"))
        for end in (s, d):
            if end not in seen:
                endpoints_ok = False
                out.append(Violation("endpoint", (m,), f"{m} refers to unknown object {end!r}"))

    for o in cat.objects:
        i = cat.identities.get(o)
        if i is None:
            out.append(Violation("identity", (), f"object {o} has no identity"))
        elif i not in cat.morphisms:
            out.append(Violation("identity", (i,), f"identity of {o} is unknown morphism {i!r}"))
        elif cat.morphisms[i] != (o, o):
            s, d = cat.morphisms[i]
            out.append(Violation("identity", (i,), f"identity {i} of {o} is {s}->{d}"))
    for o in sorted(set(cat.identities) - set(cat.objects)):
        out.append(Violation("identity", (), f"identity given for unknown object {o!r}"))

    table_ok = endpoints_ok
    for (g, f), h in sorted(cat.composition.items()):
        names = (g, f, h)
        bad = [n for n in names if n not in cat.morphisms]
        if bad:
            table_ok = False
            out.append(Violation("compose", names, f"unknown morphism(s) {bad} in {g} . {f} = {h}"))
            continue
        (gs, gd), (fs, fd), (hs, hd) = (cat.morphisms[n] for n in names)
        if fd != gs:
            table_ok = False
            out.append(Violation("compose", names, f"entry for non-composable pair {g} . {f}"))
        elif (hs, hd) != (fs, gd):
            table_ok = False
            out.append(
                Violation("compose", names, f"{g} . {f} = {h} has endpoints {hs}->{hd}, expected {fs}->{gd}")
            )

    out_of: dict[str, list[str]] = {}
    for m, (s, _) in sorted(cat.morphisms.items()):
        out_of.setdefault(s, []).append(m)
    for f, (fs, fd) in sorted(cat.morphisms.items()):
        for g in out_of.get(fd, ()):
            if (g, f) not in cat.composition:
                table_ok = False
                out.append(Violation("totality", (g, f), f"missing composite {g} . {f}"))

    if not table_ok:
        return out

    for f, (fs, fd) in sorted(cat.morphisms.items()):
        left_id = cat.identities.get(fd)
        right_id = cat.identities.get(fs)
        if left_id in cat.morphisms and cat.composition.get((left_id, f)) != f:
            out.append(Violation("unit", (left_id, f), f"{left_id} . {f} != {f}"))
        if right_id in cat.morphisms and cat.composition.get((f, right_id)) != f:
            out.append(Violation("unit", (f, right_id), f"{f} . {right_id} != {f}"))

    out.extend(_associativity_violations(cat))
    return out


def _associativity_violations(cat: FiniteCategory) -> list[Violation]:
    names = sorted(cat.morphisms)
    index = {m: i for i, m in enumerate(names)}
    n = len(names)
    table = np.full((n, n), -1, dtype=np.int64)
    for (g, f), h in cat.composition.items():
        table[index[g], index[f]] = index[h]
    out = []
    for gi in range(n):
        fs = np.flatnonzero(table[gi] >= 0)
        hs = np.flatnonzero(table[:, gi] >= 0)
        if not len(fs) or not len(hs):
            continue
        # h.(g.f) against (h.g).f for every composable h, f
        lhs = table[hs[:, None], table[gi, fs][None, :]]
        rhs = table[table[hs, gi][:, None], fs[None, :]]
        for hk, fk in zip(*np.nonzero(lhs != rhs)):
            h, g, f = names[hs[hk]], names[gi], names[fs[fk]]
            out.append(
                Violation(
                    "associativity",
                    (h, g, f),
                    f"{h} . ({g} . {f}) = {names[lhs[hk, fk]]} but ({h} . {g}) . {f} = {names[rhs[hk, fk]]}",
                )
            )
    return out


def compose(cat: Category, g, f):
    return cat.compose(g, f)


def hom_set(cat: Category, a, b):
    return tuple(cat.hom_set(a, b))


def is_posetal(cat: Category) -> bool:
    return all(len(cat.hom_set(a, b)) <= 1 for a in cat.objects for b in cat.objects)


def is_epi(cat: Category, f) -> bool:
    return cat.is_epi(f)
