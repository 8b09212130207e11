"""Command-line front end.

Exit codes: 0 when every check (or declared expectation) holds, 1 when a
check fails, 2 for unreadable input or bad usage.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from . import __version__
from .finset import FinSetCategory, Universe, build_full_subcategory
from .fixtures import (
    MODELS,
    ScenarioError,
    build_setup,
    category_or_universe,
    data_path,
    parse_cone,
    parse_probe,
    parse_triple,
    random_configuration,
)
from .kernel import CategoryError, FiniteCategory, validate_category
from .replay import isbell_chain_report, literal_alpha_check
from .universal import (
    BinaryCone,
    associator,
    is_identity,
    is_product_cone,
    is_subterminal,
    is_triple_product_cone,
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

BRUTE_FORCE_LIMIT = 20_000
DEFAULT_CHOICE = {"stream": "strict-choice", "nat": "same-cones", "fincat": "same-cones", "finset": "canonical"}


class UsageError(Exception):
    pass


def _read_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON: {exc}") from None


def _load_world(path):
    doc = _read_json(path)
    try:
        return category_or_universe(doc, Path(path).stem)
    except CategoryError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _report(args, command, ok, verdicts, witnesses=None, details=None, inputs=None):
    return {
        "tool": "conestrict",
        "version": __version__,
        "command": command,
        "inputs": {"seed": args.seed, "depth": args.depth, **(inputs or {})},
        "status": "pass" if ok else "fail",
        "verdicts": verdicts,
        "witnesses": witnesses or {},
        "details": details or {},
    }


# -- commands ----------------------------------------------------------------


def cmd_validate(args):
    world = _load_world(args.path)
    if isinstance(world, Universe):
        try:
            cat = build_full_subcategory(list(world.category.sets.values()), name=world.category.name)
        except CategoryError as exc:
            raise UsageError(str(exc)) from None
    else:
        cat = world
    violations = validate_category(cat)
    return _report(
        args,
        "validate",
        not violations,
        {"valid": not violations, "violations": len(violations)},
        {"violations": [v.to_dict() for v in violations]},
        {"objects": len(cat.objects), "morphisms": len(cat.morphisms)},
        {"path": str(args.path)},
    )


def _named_cones(world, cones_path):
    """Binary and triple cones by name, from universe carriers or a cones file."""
    if isinstance(world, Universe):
        cat = world.category
        return cat, {n: world.cone(n) for n in world.carriers}
    if cones_path is None:
        raise UsageError("a category file needs --cones FILE naming its cones")
    doc = _read_json(cones_path)
    out = {}
    try:
        for name, c in doc.get("binary", {}).items():
            out[name] = parse_cone(world, c)
        for name, c in doc.get("triple", {}).items():
            out[name] = parse_triple(world, c)
    except (CategoryError, AttributeError) as exc:
        raise UsageError(f"{cones_path}: {exc}") from None
    return world, out


def _lookup(cones, name, kind):
    if name not in cones:
        raise UsageError(f"no cone named {name!r}; known: {sorted(cones)}")
    c = cones[name]
    if kind == "binary" and not isinstance(c, BinaryCone):
        raise UsageError(f"{name} is a triple cone, expected a binary one")
    if kind == "triple" and isinstance(c, BinaryCone):
        raise UsageError(f"{name} is a binary cone, expected a triple one")
    return c


def _enumerable(cat) -> bool:
    if isinstance(cat, FiniteCategory):
        return True
    if isinstance(cat, FinSetCategory):
        return sum(cat.hom_count(a, b) for a in cat.objects for b in cat.objects) <= BRUTE_FORCE_LIMIT
    return False


def cmd_product_check(args):
    world = _load_world(args.path)
    cat, cones = _named_cones(world, args.cones)
    names = [args.cone] if args.cone else sorted(cones)
    verdicts, details, ok = {}, {}, True
    for name in names:
        c = _lookup(cones, name, "any")
        check = is_product_cone if isinstance(c, BinaryCone) else is_triple_product_cone
        fast = check(cat, c)
        entry = {"product": fast}
        if _enumerable(cat):
            entry["brute_force"] = check(cat, c, brute_force=True)
            entry["agree"] = entry["brute_force"] == fast
            ok &= entry["agree"]
        verdicts[name] = fast
        details[name] = entry
        ok &= fast
    return _report(args, "product-check", ok, verdicts, details=details, inputs={"path": str(args.path)})


def _random_roundtrip(rng, max_size):
    rc = random_configuration(rng, max_size)
    cat, cone_ab, cone_bc, tc = rc.cat, rc.cone_ab, rc.cone_bc, rc.triple
    checks = {
        "unpaste_left.paste_left": same_cone(cat, unpaste_left(cat, cone_ab, paste_left(cat, cone_ab, rc.cone_l)), rc.cone_l),
        "paste_left.unpaste_left": same_triple(cat, paste_left(cat, cone_ab, unpaste_left(cat, cone_ab, tc)), tc),
        "unpaste_right.paste_right": same_cone(cat, unpaste_right(cat, cone_bc, paste_right(cat, cone_bc, rc.cone_r)), rc.cone_r),
        "paste_right.unpaste_right": same_triple(cat, paste_right(cat, cone_bc, unpaste_right(cat, cone_bc, tc)), tc),
    }
    return rc.sizes, checks


def cmd_paste_roundtrip(args):
    rng = random.Random(args.seed)
    failures = []
    totals = {}
    for i in range(args.count):
        sizes, checks = _random_roundtrip(rng, args.max_size)
        for k, v in checks.items():
            totals[k] = totals.get(k, 0) + v
            if not v:
                failures.append({"instance": i, "sizes": sizes, "check": k})
    ok = not failures
    return _report(
        args,
        "paste-roundtrip",
        ok,
        {k: f"{v}/{args.count}" for k, v in sorted(totals.items())},
        {"failures": failures},
        inputs={"count": args.count, "max_size": args.max_size},
    )


def cmd_strictify(args):
    if args.model:
        setup = _setup(args)
        cat, choice = setup.cat, setup.choice
        inputs = {"model": args.model, "choice": setup.choice_name}
    else:
        if not args.path:
            raise UsageError("strictify needs a universe/category file or --model")
        world = _load_world(args.path)
        cat, cones = _named_cones(world, args.cones)
        ab = _lookup(cones, args.ab, "binary")
        bc = _lookup(cones, args.bc, "binary")
        tc = _lookup(cones, args.triple, "triple")
        inputs = {"path": str(args.path), "ab": args.ab, "bc": args.bc, "triple": args.triple}
        try:
            choice = strict_choice(cat, ab, bc, tc)
        except CategoryError as exc:
            return _report(args, "strictify", False, {"alpha_is_identity": False}, {"error": str(exc)}, inputs=inputs)
    try:
        alpha = associator(cat, choice)
    except CategoryError as exc:
        return _report(args, "strictify", False, {"alpha_is_identity": False}, {"error": str(exc)}, inputs=inputs)
    ident = is_identity(cat, alpha)
    witnesses = {}
    if not ident:
        witnesses["alpha"] = cat.disagreement(alpha, cat.identity(cat.src(alpha))) if cat.src(alpha) == cat.dst(alpha) else cat.describe(alpha)
    return _report(
        args,
        "strictify",
        ident,
        {"alpha_is_identity": ident},
        witnesses,
        {"alpha": cat.describe(alpha), "cones": choice.describe(cat)},
        inputs,
    )


def _lemma_rows(cat, obj, cones):
    rows = []
    sub = is_subterminal(cat, obj)
    for c in cones:
        alpha = same_cones_associator(cat, obj, c)
        ident = is_identity(cat, alpha)
        row = {
            "object": obj,
            "cone": c.describe(cat),
            "subterminal": sub,
            "alpha_is_identity": ident,
            "agree": sub == ident,
        }
        if not ident:
            row["alpha_witness"] = cat.disagreement(alpha, cat.identity(obj))
        if not sub:
            w = subterminal_witness(cat, obj)
            row["parallel_pair"] = [cat.describe(w[0]), cat.describe(w[1])]
        rows.append(row)
    return rows


def cmd_subterminal(args):
    if args.model:
        setup = _setup(args, choice="same-cones")
        cat = setup.cat
        rows = _lemma_rows(cat, setup.self_cone.apex, [setup.self_cone])
        inputs = {"model": args.model}
        objects = {setup.self_cone.apex: is_subterminal(cat, setup.self_cone.apex)}
    else:
        if not args.path:
            raise UsageError("subterminal needs a category/universe file or --model")
        world = _load_world(args.path)
        cat = world.category if isinstance(world, Universe) else world
        rows, objects = [], {}
        for obj in cat.objects:
            objects[obj] = is_subterminal(cat, obj)
            if isinstance(cat, FinSetCategory) and len(cat.sets[obj]) > 1:
                continue  # no n-element set with n > 1 is its own square
            rows.extend(_lemma_rows(cat, obj, self_product_cones(cat, obj)))
        inputs = {"path": str(args.path)}
    ok = all(r["agree"] for r in rows)
    return _report(args, "subterminal", ok, {"subterminal": objects, "lemma_holds": ok}, details={"rows": rows}, inputs=inputs)


def _setup(args, choice=None):
    choice = choice or args.choice or DEFAULT_CHOICE.get(args.model)
    try:
        return build_setup(args.model, choice, depth=args.depth, bound=args.scan, seed=args.seed)
    except ScenarioError as exc:
        raise UsageError(str(exc)) from None


def _scenario(args):
    if args.scenario:
        doc = _read_json(args.scenario)
    elif args.model:
        choice = args.choice or DEFAULT_CHOICE[args.model]
        builtin = data_path(f"scenarios/{args.model}-{choice}.json")
        doc = json.loads(builtin.read_text(encoding="utf-8")) if builtin.is_file() else {"model": args.model, "choice": choice}
    else:
        raise UsageError("give --model or a scenario file")
    if not isinstance(doc, dict) or "model" not in doc:
        raise UsageError("scenario needs a 'model'")
    if args.model and doc["model"] != args.model:
        raise UsageError(f"scenario is for model {doc['model']!r}, not {args.model!r}")
    if doc["model"] not in MODELS:
        raise UsageError(f"unknown model {doc['model']!r}")
    if args.choice:
        doc["choice"] = args.choice
    return doc


def _run_chain(args, doc):
    if "depth" in doc and args.depth_given is None:
        args.depth = int(doc["depth"])
    args.model = doc["model"]
    setup = _setup(args, choice=doc.get("choice") or DEFAULT_CHOICE[doc["model"]])
    cat = setup.cat
    try:
        probes = [
            parse_probe(cat, doc[k]) if k in doc else default
            for k, default in zip("fgh", setup.probes)
        ]
    except CategoryError as exc:
        raise UsageError(str(exc)) from None
    report = isbell_chain_report(setup.model, cat, setup.choice, *probes, choice_name=setup.choice_name)
    return setup, report


def _expectations(doc, observed):
    expect = doc.get("expect", {})
    mismatches = {
        k: {"expected": v, "observed": observed.get(k)}
        for k, v in sorted(expect.items())
        if observed.get(k) != v
    }
    return expect, mismatches


def cmd_replay(args):
    doc = _scenario(args)
    setup, report = _run_chain(args, doc)
    observed = {**report.verdicts(), "alpha_is_identity": report.alpha_is_identity, "naturality": report.naturality}
    expect, mismatches = _expectations(doc, observed)
    return _report(
        args,
        "replay",
        not mismatches,
        observed,
        {"mismatches": mismatches},
        {"chain": report.to_dict(), "expect": expect},
        {"scenario": str(args.scenario) if args.scenario else None, "model": setup.model, "choice": setup.choice_name},
    )


def cmd_isbell(args):
    doc = _scenario(args)
    setup, report = _run_chain(args, doc)
    cat = setup.cat
    observed = {**report.verdicts(), "alpha_is_identity": report.alpha_is_identity, "naturality": report.naturality}
    witnesses, details = {}, {"chain": report.to_dict()}
    if setup.self_cone is not None:
        obj = setup.self_cone.apex
        observed["subterminal"] = is_subterminal(cat, obj)
        lit = literal_alpha_check(cat, setup.self_cone)
        observed["literal_solvable"] = lit.solvable
        details["literal_alpha"] = lit.to_dict()
        rows = _lemma_rows(cat, obj, [setup.self_cone])
        observed["lemma_holds"] = all(r["agree"] for r in rows)
        details["lemma"] = rows
    if setup.model == "nat":
        from .infinite.nat import nat_find_witness

        w = nat_find_witness(args.scan)
        observed["witness_found"] = w.found
        witnesses["nat_alpha"] = w.to_dict()
    if setup.model == "stream":
        from .infinite.stream import first_difference, identity, stream_alpha_same_cones

        i = first_difference(stream_alpha_same_cones(cat), identity())
        witnesses["same_cones_alpha_index"] = i
        observed["witness_found"] = i is not None
    expect, mismatches = _expectations(doc, observed)
    witnesses["mismatches"] = mismatches
    details["expect"] = expect
    return _report(
        args,
        "isbell",
        not mismatches,
        observed,
        witnesses,
        details,
        {"scenario": str(args.scenario) if args.scenario else None, "model": setup.model, "choice": setup.choice_name, "scan": args.scan},
    )


# -- plumbing ----------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--depth", type=int, default=None, dest="depth_given")
    common.add_argument("--scan", type=int, default=1000)
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--timing", action="store_true", help="add elapsed seconds to the report")

    parser = argparse.ArgumentParser(prog="conestrict", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"conestrict {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check the category laws of a file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("product-check", parents=[common], help="check universal properties of named cones")
    p.add_argument("path")
    p.add_argument("--cone")
    p.add_argument("--cones", help="cones file for a category file")
    p.set_defaults(func=cmd_product_check)

    p = sub.add_parser("paste-roundtrip", parents=[common], help="random cone pasting roundtrips in finite sets")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--max-size", type=int, default=4)
    p.set_defaults(func=cmd_paste_roundtrip)

    p = sub.add_parser("strictify", parents=[common], help="derive cones that make the associator the identity")
    p.add_argument("path", nargs="?")
    p.add_argument("--ab")
    p.add_argument("--bc")
    p.add_argument("--triple")
    p.add_argument("--cones")
    p.add_argument("--model", choices=MODELS)
    p.add_argument("--choice")
    p.set_defaults(func=cmd_strictify)

    p = sub.add_parser("subterminal", parents=[common], help="same-cones associator vs subterminality")
    p.add_argument("path", nargs="?")
    p.add_argument("--model", choices=MODELS)
    p.add_argument("--choice")
    p.set_defaults(func=cmd_subterminal)

    for name, func, text in (
        ("isbell", cmd_isbell, "chain replay plus obstruction witnesses"),
        ("replay", cmd_replay, "chain replay for one scenario"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("scenario", nargs="?")
        p.add_argument("--model")
        p.add_argument("--choice")
        p.set_defaults(func=func)
    return parser


def _human(report) -> str:
    lines = [f"{report['command']}: {report['status'].upper()}"]
    for k, v in report["verdicts"].items():
        lines.append(f"  {k}: {json.dumps(v, sort_keys=True) if isinstance(v, dict) else v}")
    for k, v in report["witnesses"].items():
        if v:
            lines.append(f"  witness {k}: {json.dumps(v, sort_keys=True)}")
    for step in report["details"].get("chain", {}).get("steps", []):
        if "witness" in step["detail"]:
            lines.append(f"  witness {step['step']}: {json.dumps(step['detail']['witness'], sort_keys=True)}")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    args.depth = args.depth_given if args.depth_given is not None else 64
    if getattr(args, "model", None) and args.model not in MODELS:
        print(f"error: unknown model {args.model!r}; expected one of {', '.join(MODELS)}", file=sys.stderr)
        return 2
    start = time.perf_counter()
    try:
        report = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.timing:
        report["elapsed_seconds"] = round(time.perf_counter() - start, 6)
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(_human(report))
    return 0 if report["status"] == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
