"""Acceptance suite: one PASS/FAIL line per criterion.

Run alone with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""

import contextlib
import io
import itertools
import json
import random
import sys
import time

import pytest

from conestrict.cli import main
from conestrict.finset import FinSetCategory, FunctionTable, finset, is_finset_product
from conestrict.fixtures import boolean_lattice, random_configuration, scrambled_triple, sub4_materialized, sub8, terminal
from conestrict.infinite.nat import NatModel, nat_alpha, nat_find_witness, nat_self_cone
from conestrict.infinite.stream import (
    StreamModel,
    constant,
    double,
    double_plus_one,
    equal_up_to_depth,
    halve,
    identity,
    parity_case,
    positional_compose,
    stream_same_cones_choice,
    stream_self_cone,
    stream_strict_cones,
    stream_triple_cone,
)
from conestrict.replay import check_naturality, literal_alpha_check, times_left, times_right
from conestrict.universal import (
    BinaryCone,
    TripleCone,
    associator,
    brute_force_is_limit,
    is_identity,
    is_subterminal,
    paste_left,
    paste_right,
    same_cone,
    same_cones_associator,
    same_triple,
    self_product_cones,
    strict_choice,
    subterminal_witness,
    unpaste_left,
    unpaste_right,
)

SEED = 20240601


@pytest.fixture
def line(capsys):
    def emit(n, ok, text):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {text}")

    return emit


def roundtrips(cat, ab, bc, lc, rc, tc):
    return [
        same_cone(cat, unpaste_left(cat, ab, paste_left(cat, ab, lc)), lc),
        same_triple(cat, paste_left(cat, ab, unpaste_left(cat, ab, tc)), tc),
        same_cone(cat, unpaste_right(cat, bc, paste_right(cat, bc, rc)), rc),
        same_triple(cat, paste_right(cat, bc, unpaste_right(cat, bc, tc)), tc),
    ]


def corpus_roundtrips():
    lat = boolean_lattice()
    top = BinaryCone("1", "id1", "id1", ("1", "1"))
    yield lat, top, top, top, top, TripleCone("1", "id1", "id1", "id1")
    pt = terminal()
    star = BinaryCone("*", "id", "id", ("*", "*"))
    yield pt, star, star, star, star, TripleCone("*", "id", "id", "id")
    s = sub8()
    yield s.cat, s.cone_ab, s.cone_ab, s.cone_l, s.cone_r, paste_left(s.cat, s.cone_ab, s.cone_l)
    cat, tc = scrambled_triple(s.cat, "T8", SEED)
    yield cat, s.cone_ab, s.cone_ab, s.cone_l, s.cone_r, tc
    st = StreamModel()
    c = stream_self_cone()
    yield st, c, c, c, c, stream_triple_cone()


def test_criterion_1_paste_roundtrips(line):
    start = time.perf_counter()
    failures = 0
    corpus = list(corpus_roundtrips())
    for cfg in corpus:
        failures += roundtrips(*cfg).count(False)
    rng = random.Random(SEED)
    count = 200
    for _ in range(count):
        rc = random_configuration(rng, 4)
        failures += roundtrips(rc.cat, rc.cone_ab, rc.cone_bc, rc.cone_l, rc.cone_r, rc.triple).count(False)
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 30
    line(1, ok, f"{len(corpus)} corpus + {count} random configurations, 4 roundtrips each, {failures} failures, {elapsed:.2f}s")
    assert ok


def test_criterion_2_strictification(line):
    rng = random.Random(SEED + 2)
    count, bad = 50, 0
    for _ in range(count):
        rc = random_configuration(rng, 4)
        choice = strict_choice(rc.cat, rc.cone_ab, rc.cone_bc, rc.triple)
        bad += not is_identity(rc.cat, associator(rc.cat, choice))
    st = StreamModel()
    alpha = associator(st, stream_strict_cones(st))
    symbolic = alpha == identity()
    pointwise = all(alpha.index(i) == i for i in range(10**4 + 1))
    ok = bad == 0 and symbolic and pointwise
    line(2, ok, f"{count - bad}/{count} finset instances strict; stream alpha = id symbolically {symbolic}, on 0..10^4 {pointwise}")
    assert ok


def test_criterion_3_subterminality_lemma(line):
    rows = []
    for cat in (terminal(), boolean_lattice(), sub4_materialized()):
        for obj in cat.objects:
            for c in self_product_cones(cat, obj):
                ident = is_identity(cat, same_cones_associator(cat, obj, c))
                rows.append((f"{cat.name}:{obj}", ident, is_subterminal(cat, obj)))
    posetal_ok = bool(rows) and all(r[1] and r[2] for r in rows)

    nat = NatModel(bound=1000)
    nat_alpha_term = same_cones_associator(nat, "N", nat_self_cone())
    nat_w = nat.disagreement(nat_alpha_term, nat.identity("N"))
    nat_ok = (
        not is_identity(nat, nat_alpha_term)
        and not is_subterminal(nat, "N")
        and nat_w is not None
        and nat_w["index"] <= 1000
        and subterminal_witness(nat, "N") is not None
    )

    st = StreamModel()
    st_alpha = same_cones_associator(st, "C", stream_self_cone())
    st_w = st.disagreement(st_alpha, identity())
    st_ok = not is_subterminal(st, "C") and st_w is not None and st_w["index"] == 1

    ok = posetal_ok and nat_ok and st_ok
    line(
        3,
        ok,
        f"{len(rows)} posetal (true,true) rows; nat (false,false) witness n={nat_w and nat_w['index']}; "
        f"stream (false,false) witness index={st_w and st_w['index']}",
    )
    assert ok


def test_criterion_4_set_obstruction(line):
    start = time.perf_counter()
    w = nat_find_witness(1000)
    elapsed = time.perf_counter() - start
    ok = w.found and nat_alpha(w.index) != w.index and nat_alpha(w.index) == w.value and elapsed < 1
    line(4, ok, f"nat_alpha({w.index}) = {w.value}, found in {elapsed * 1000:.2f} ms")
    assert ok


def _cli_json(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main([*argv, "--json", "--seed", "0", "--depth", "64"])
    return code, buf.getvalue()


def test_criterion_5_isbell_replay(line):
    code, text = _cli_json("replay", "--model", "stream", "--choice", "strict-choice")
    again = _cli_json("replay", "--model", "stream", "--choice", "strict-choice")[1]
    report = json.loads(text)
    chain = report["details"]["chain"]
    steps = {s["step"]: s for s in chain["steps"]}
    s2 = steps["S2"]["detail"]
    strict_ok = (
        [steps[k]["status"] for k in ("S1", "S2", "S3", "S4")] == ["pass", "pass", "fail", "skipped"]
        and s2["naturality"] == "pass"
        and s2["alpha_is_identity"] is True
        and "index" in steps["S3"]["detail"]["witness"]
    )
    code2, text2 = _cli_json("replay", "--model", "stream", "--choice", "same-cones")
    again2 = _cli_json("replay", "--model", "stream", "--choice", "same-cones")[1]
    same = {s["step"]: s for s in json.loads(text2)["details"]["chain"]["steps"]}
    flagged = same["S2"]["status"] == "hypothesis-failed" and same["S2"]["detail"]["reason"] == "alpha = id hypothesis fails"
    stable = text == again and text2 == again2
    ok = strict_ok and flagged and stable
    line(
        5,
        ok,
        f"strict choice S1-S4 {[steps[k]['status'] for k in ('S1', 'S2', 'S3', 'S4')]}, S3 witness index "
        f"{steps['S3']['detail'].get('witness', {}).get('index')}; same cones flags alpha: {flagged}; byte-stable: {stable}",
    )
    assert ok


def random_positional(rng, depth=2):
    atoms = [identity(), double(), double_plus_one(), halve(), constant(rng.randrange(8))]
    if depth == 0 or rng.random() < 0.4:
        return rng.choice(atoms)
    f, g = random_positional(rng, depth - 1), random_positional(rng, depth - 1)
    return positional_compose(f, g) if rng.random() < 0.5 else parity_case(f, g)


def test_criterion_6_naturality(line):
    rng = random.Random(SEED + 6)
    s = sub8()
    count, failures = 100, 0
    for i in range(count):
        cat, tc = scrambled_triple(s.cat, "T8", rng.randrange(2**32))
        endos = list(cat.hom_set("2", "2"))
        f, g, h = (rng.choice(endos) for _ in range(3))
        choice = s.choice if i % 2 else strict_choice(cat, s.cone_ab, s.cone_ab, tc)
        failures += not check_naturality(cat, choice, f, g, h)[0]

    st = StreamModel(depth=64)
    choices = {"same-cones": stream_same_cones_choice(), "strict-choice": stream_strict_cones(st)}
    stream_failures = 0
    for choice in choices.values():
        alpha = associator(st, choice)
        for _ in range(count):
            f, g, h = (random_positional(rng) for _ in range(3))
            lhs = st.compose(alpha, times_left(st, choice, f, g, h))
            rhs = st.compose(times_right(st, choice, f, g, h), alpha)
            stream_failures += not (equal_up_to_depth(lhs, rhs, 64) and lhs == rhs)
    ok = failures == 0 and stream_failures == 0
    line(6, ok, f"Sub8 {count - failures}/{count} exact; stream {2 * count - stream_failures}/{2 * count} at depth 64 over both choices")
    assert ok


def test_criterion_7_literal_system(line):
    cases = [
        (terminal(), BinaryCone("*", "id", "id", ("*", "*"))),
        (boolean_lattice(), BinaryCone("0", "id0", "id0", ("0", "0"))),
        (boolean_lattice(), BinaryCone("1", "id1", "id1", ("1", "1"))),
    ]
    sub4 = sub4_materialized()
    one = sub4.identity("1")
    cases.append((sub4, BinaryCone("1", one, one, ("1", "1"))))
    solved = [literal_alpha_check(cat, c) for cat, c in cases]
    solvable_ok = all(r.solvable and r.alpha_is_identity for r in solved)
    nat = literal_alpha_check(NatModel(), nat_self_cone())
    nat_ok = not nat.solvable and nat.witness is not None and "index" in nat.witness
    ok = solvable_ok and nat_ok
    w = nat.witness or {}
    line(7, ok, f"{len(solved)} terminal/posetal cases solvable with alpha = id; nat unsatisfiable at n={w.get('index')} ({w.get('lhs')} vs {w.get('rhs')})")
    assert ok


def test_criterion_8_oracle_equivalence(line):
    checked = agree = 0
    for na, nb, np_ in itertools.product(range(4), repeat=3):
        a, b, p = finset("A", na), finset("B", nb), finset("P", np_)
        cat = FinSetCategory([a, b, p])
        for lv in itertools.product(a.elements, repeat=np_):
            for rv in itertools.product(b.elements, repeat=np_):
                left, right = FunctionTable("P", "A", lv), FunctionTable("P", "B", rv)
                checked += 1
                agree += is_finset_product(a, b, left, right) == brute_force_is_limit(cat, "P", (left, right))
    ok = checked > 0 and agree == checked
    line(8, ok, f"{agree}/{checked} cones over all universes with sizes 0..3 agree")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
