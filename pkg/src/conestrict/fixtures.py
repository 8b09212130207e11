"""The shipped corpus: small categories, the Sub8 finite-set world, and replay setups."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from importlib import resources
from typing import Any

from .finset import (
    FinSetCategory,
    build_full_subcategory,
    canonical_product,
    finset,
    permuted_product,
    product_on_carrier,
    scrambled_product,
    triple_on_carrier,
)
from .kernel import Category, CategoryError, FiniteCategory, category_from_dict
from .universal import (
    BinaryCone,
    BracketingChoice,
    TripleCone,
    same_cones_choice,
    strict_choice,
)


class ScenarioError(CategoryError):
    pass


def data_path(name: str):
    return resources.files("conestrict") / "data" / name


def load_data(name: str) -> dict:
    return json.loads(data_path(name).read_text(encoding="utf-8"))


def terminal() -> FiniteCategory:
    return FiniteCategory(["*"], {"id": ("*", "*")}, {"*": "id"}, {("id", "id"): "id"}, name="terminal")


def walking_arrow() -> FiniteCategory:
    return FiniteCategory(
        ["A", "B"],
        {"id_A": ("A", "A"), "id_B": ("B", "B"), "f": ("A", "B")},
        {"A": "id_A", "B": "id_B"},
        {("id_A", "id_A"): "id_A", ("id_B", "id_B"): "id_B", ("f", "id_A"): "f", ("id_B", "f"): "f"},
        name="walking_arrow",
    )


def boolean_lattice() -> FiniteCategory:
    """The poset 0 <= 1; binary products are meets."""
    return FiniteCategory(
        ["0", "1"],
        {"id0": ("0", "0"), "id1": ("1", "1"), "le01": ("0", "1")},
        {"0": "id0", "1": "id1"},
        {("id0", "id0"): "id0", ("id1", "id1"): "id1", ("le01", "id0"): "le01", ("id1", "le01"): "le01"},
        name="boolean_lattice",
    )


def corpus() -> dict[str, FiniteCategory]:
    return {"terminal": terminal(), "walking_arrow": walking_arrow(), "boolean_lattice": boolean_lattice()}


@dataclass
class Sub8:
    """Finite sets of sizes 1, 2, 4, 8 with the canonical nested-pair products.

    ``"8"`` carries ``((a,b),c)`` and ``"8r"`` carries ``(a,(b,c))``.
    """

    cat: FinSetCategory
    cone_ab: BinaryCone
    cone_l: BinaryCone
    cone_r: BinaryCone

    @property
    def choice(self) -> BracketingChoice:
        return BracketingChoice(self.cone_ab, self.cone_ab, self.cone_l, self.cone_r)

    def swap(self):
        return self.cat.table("2", "2", {"0": "1", "1": "0"})


def sub8() -> Sub8:
    one, two = finset("1", ["*"]), finset("2", 2)
    ab = canonical_product([two, two], "4")
    four = ab.carrier
    left = canonical_product([four, two], "8")
    right = canonical_product([two, four], "8r")
    cat = FinSetCategory([one, two, four, left.carrier, right.carrier], name="sub8")
    return Sub8(
        cat,
        product_on_carrier(two, two, ab),
        product_on_carrier(four, two, left),
        product_on_carrier(two, four, right),
    )


def sub4_materialized() -> FiniteCategory:
    """The full subcategory on sizes 1, 2, 4 as explicit tables (301 morphisms)."""
    return build_full_subcategory([finset("1", 1), finset("2", 2), finset("4", 4)], name="sub4")


def scrambled_triple(cat: FinSetCategory, name: str, seed: int) -> tuple[FinSetCategory, TripleCone]:
    """Add an 8-element carrier for 2 x 2 x 2 with a seeded scrambled bijection."""
    two = cat.sets["2"]
    perm = list(range(8))
    random.Random(seed).shuffle(perm)
    cp = permuted_product([two, two, two], name, perm)
    cat = cat.add(cp.carrier)
    return cat, triple_on_carrier(cp)


@dataclass
class RandomConfig:
    """Sets A, B, C with scrambled carriers for A x B, B x C, both bracketings and A x B x C."""

    sizes: list
    cat: FinSetCategory
    cone_ab: BinaryCone
    cone_bc: BinaryCone
    cone_l: BinaryCone
    cone_r: BinaryCone
    triple: TripleCone

    @property
    def choice(self) -> BracketingChoice:
        return BracketingChoice(self.cone_ab, self.cone_bc, self.cone_l, self.cone_r)


def random_configuration(rng: random.Random, max_size: int = 4, min_size: int = 1) -> RandomConfig:
    sizes = [rng.randint(min_size, max_size) for _ in range(3)]
    a, b, c = (finset(n, k) for n, k in zip("ABC", sizes))
    ab = scrambled_product([a, b], "AB", rng)
    bc = scrambled_product([b, c], "BC", rng)
    left = scrambled_product([ab.carrier, c], "L", rng)
    right = scrambled_product([a, bc.carrier], "R", rng)
    tri = scrambled_product([a, b, c], "T", rng)
    cat = FinSetCategory([a, b, c, ab.carrier, bc.carrier, left.carrier, right.carrier, tri.carrier])
    return RandomConfig(
        sizes,
        cat,
        product_on_carrier(a, b, ab),
        product_on_carrier(b, c, bc),
        product_on_carrier(ab.carrier, c, left),
        product_on_carrier(a, bc.carrier, right),
        triple_on_carrier(tri),
    )


# -- replay setups -------------------------------------------------------------


@dataclass
class Setup:
    model: str
    choice_name: str
    cat: Category
    choice: BracketingChoice
    probes: tuple[Any, Any, Any]
    self_cone: BinaryCone | None = None


def _stream_setup(choice, depth):
    from .infinite.stream import (
        StreamModel,
        constant,
        identity,
        stream_same_cones_choice,
        stream_self_cone,
        stream_strict_cones,
    )

    cat = StreamModel(depth=depth)
    if choice == "same-cones":
        ch = stream_same_cones_choice()
    elif choice == "strict-choice":
        ch = stream_strict_cones(cat)
    else:
        ch = _custom_choice(cat, choice)
        choice = "custom"
    return Setup("stream", choice, cat, ch, (identity(), constant(0), identity()), stream_self_cone())


def _nat_setup(choice, bound):
    from .infinite.nat import IDENTITY, NatModel, const, nat_self_cone

    cat = NatModel(bound=bound)
    if choice != "same-cones":
        raise ScenarioError("the nat model supports only the same-cones choice")
    return Setup("nat", choice, cat, same_cones_choice(nat_self_cone()), (IDENTITY, const(0), IDENTITY), nat_self_cone())


def _fincat_setup(choice):
    cat = boolean_lattice()
    top = BinaryCone("1", "id1", "id1", ("1", "1"))
    if choice in ("same-cones", "strict-choice"):
        ch = same_cones_choice(top)
        if choice == "strict-choice":
            ch = strict_choice(cat, top, top, TripleCone("1", "id1", "id1", "id1"))
    else:
        ch = _custom_choice(cat, choice)
        choice = "custom"
    return Setup("fincat", choice, cat, ch, ("id1", "id1", "id1"), top)


def _finset_setup(choice, seed):
    s = sub8()
    if choice in ("canonical", "same-cones"):
        if choice == "same-cones":
            raise ScenarioError("no finite set of size > 1 is its own square; use canonical or strict-choice")
        cat, ch = s.cat, s.choice
    elif choice == "strict-choice":
        cat, tc = scrambled_triple(s.cat, "T8", seed)
        ch = strict_choice(cat, s.cone_ab, s.cone_ab, tc)
    else:
        cat, ch = s.cat, _custom_choice(s.cat, choice)
        choice = "custom"
    return Setup("finset", choice, cat, ch, (s.swap(), cat.identity("2"), cat.identity("2")))


MODELS = ("stream", "nat", "finset", "fincat")


def build_setup(model: str, choice="strict-choice", depth: int = 64, bound: int = 1000, seed: int = 0) -> Setup:
    if model == "stream":
        return _stream_setup(choice, depth)
    if model == "nat":
        return _nat_setup(choice, bound)
    if model == "fincat":
        return _fincat_setup(choice)
    if model == "finset":
        return _finset_setup(choice, seed)
    raise ScenarioError(f"unknown model {model!r}; expected one of {MODELS}")


def parse_cone(cat: Category, doc: dict) -> BinaryCone:
    """``{"apex", "left", "right", "targets"}`` with morphisms given as names or terms."""
    try:
        left = _morphism(cat, doc["left"])
        right = _morphism(cat, doc["right"])
        c = BinaryCone(doc["apex"], left, right, tuple(doc["targets"]))
    except (KeyError, TypeError) as exc:
        raise ScenarioError(f"bad cone description {doc!r}") from exc
    return c


def parse_triple(cat: Category, doc: dict) -> TripleCone:
    try:
        p, q, r = (_morphism(cat, doc[k]) for k in ("p", "q", "r"))
    except (KeyError, TypeError) as exc:
        raise ScenarioError(f"bad triple cone description {doc!r}") from exc
    return TripleCone(doc.get("apex", cat.src(p)), p, q, r)


def _morphism(cat: Category, text):
    parse = getattr(cat, "parse_morphism", None)
    if parse is not None:
        return parse(text)
    if isinstance(cat, FiniteCategory) and text in cat.morphisms:
        return text
    raise ScenarioError(f"unknown morphism {text!r} in {cat.name}")


def _custom_choice(cat: Category, doc) -> BracketingChoice:
    if not isinstance(doc, dict) or set(doc) != {"ab", "bc", "l", "r"}:
        raise ScenarioError(f"custom choice needs cones ab, bc, l, r; got {doc!r}")
    return BracketingChoice(*(parse_cone(cat, doc[k]) for k in ("ab", "bc", "l", "r")))


def parse_probe(cat: Category, text):
    return _morphism(cat, text)


def category_or_universe(doc: dict, name: str):
    from .finset import universe_from_dict

    if "sets" in doc:
        return universe_from_dict(doc, name=name)
    return category_from_dict(doc, name=name)
