"""Command-line front end.

Exit codes: 0 success, 1 a checked condition fails, 2 usage or parse error.
``--format machine`` prints one JSON document; diagrams inside it are
embedded in the text format so they can be parsed back.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .construct import ConstructionError, choose_coefficients, construct, verify_construction
from .diagrams import DiagramError, PlumbingGraph, SpliceDiagram, parse, serialize
from .discriminant import check_orbifold_congruence, discriminant_data
from .equations import SemigroupConditionError, check_homogeneity, generate_equations
from .plumbing import (
    DegenerateShapeError,
    SingularPlumbingError,
    classify_shape,
    extract_splice,
    homology,
    underlying,
)
from .splice import DEFAULT_CAP, check_conditions, reduce_splice, underlying_splice

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load(path: str, kind: str | None = None):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        doc = parse(text, source=path)
    except DiagramError as exc:
        raise UsageError(f"{path}: {exc}") from exc
    if kind is not None and doc.kind != kind:
        raise UsageError(f"{path}: expected a {kind} document, found {doc.kind}")
    return doc.payload


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {(k if isinstance(k, str) else "-".join(k)): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _table(rows: list[list], header: list[str]) -> str:
    cells = [[str(c) for c in header]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _yes(flag) -> str:
    return {True: "yes", False: "no", None: "n/a"}[flag]


# each command returns (exit code, machine document, human text)

def cmd_check(args):
    g = _load(args.input, "splice")
    r = check_conditions(g, cap=args.cap)
    failed = not (r.ideal_condition and r.semigroup_condition and r.realizability_screen)
    doc = {
        "edge_determinants": {f"{a}-{b}": D for (a, b), D in r.edge_determinants.items()},
        "ends": [
            {"vertex": e.vertex, "toward": e.toward, "ideal_generator": e.ideal_generator,
             "weight": e.weight, "divisible": e.divisible, "semigroup": e.semigroup,
             "generators": dict(zip(e.leaves, e.generators)),
             "witnesses": [dict(zip(e.leaves, c)) for c in e.witnesses]}
            for e in r.ends
        ],
        "ideal_condition": r.ideal_condition,
        "semigroup_condition": r.semigroup_condition,
        "singularity_link": r.singularity_link,
        "realizability_screen": r.realizability_screen,
        "screen_failures": r.screen_failures,
        "cap": r.cap,
        "notes": r.notes,
    }
    rows = [[e.vertex, e.toward, e.weight if e.weight is not None else "-", e.ideal_generator,
             _yes(e.divisible), _yes(e.semigroup), len(e.witnesses) if e.weight is not None else "-"]
            for e in r.ends]
    parts = [_table(rows, ["vertex", "toward", "weight", "ideal gen", "divides", "semigroup", "witnesses"])]
    if r.edge_determinants:
        parts.append(_table([[f"{a}-{b}", D] for (a, b), D in r.edge_determinants.items()],
                            ["edge", "determinant"]))
    parts.append("\n".join([
        f"ideal condition:      {_yes(r.ideal_condition)}",
        f"semigroup condition:  {_yes(r.semigroup_condition)} (cap {r.cap})",
        f"singularity link:     {_yes(r.singularity_link)}",
        f"realizability screen: {_yes(r.realizability_screen)}",
    ] + [f"  {f}" for f in r.screen_failures] + [f"note: {n}" for n in r.notes]))
    return (FAILED if failed else OK), doc, "\n\n".join(parts)


def _discriminant_doc(p: PlumbingGraph):
    d = discriminant_data(p)
    return {
        "order": d.det,
        "leaves": d.leaves,
        "leaf_vertices": d.leaf_vertices,
        "pairing": d.pairing,
        "rows": d.rows,
        "off_diagonal_mismatches": [list(x) for x in d.off_diagonal_mismatches],
        "diagonal_mismatches": d.diagonal_mismatches,
    }


def cmd_analyze(args):
    p = _load(args.input, "plumbing")
    h, ho = homology(p), homology(p, orbifold=True)
    doc = {
        "shape": classify_shape(p),
        "homology": {"order": h.order, "factors": list(h.factors), "free_rank": h.free_rank},
        "orbifold_homology": {"order": ho.order, "factors": list(ho.factors), "free_rank": ho.free_rank},
        "splice": None,
        "discriminant": None,
        "notes": [],
    }
    try:
        doc["splice"] = serialize(extract_splice(p))
        doc["discriminant"] = _discriminant_doc(p)
    except (DegenerateShapeError, SingularPlumbingError) as exc:
        doc["notes"].append(str(exc))

    def fmt(x):
        order = "infinite" if x["order"] is None else str(x["order"])
        inv = " + ".join(f"Z/{f}" for f in x["factors"]) or "0"
        free = f" + Z^{x['free_rank']}" if x["free_rank"] else ""
        return f"order {order}  ({inv}{free})"

    lines = [f"shape:             {doc['shape']}",
             f"homology:          {fmt(doc['homology'])}",
             f"orbifold homology: {fmt(doc['orbifold_homology'])}"]
    if doc["splice"]:
        lines += ["", doc["splice"].rstrip()]
    disc = doc["discriminant"]
    if disc:
        rows = [[w] + [str(x) for x in row] for w, row in zip(disc["leaves"], disc["rows"])]
        lines += ["", f"discriminant group of order {disc['order']}; rows mod 1:",
                  _table(rows, ["leaf"] + disc["leaves"])]
        if disc["off_diagonal_mismatches"] or disc["diagonal_mismatches"]:
            lines.append("closed forms do not match the matrix entries for this plumbing")
    lines += [f"note: {n}" for n in doc["notes"]]
    return OK, _jsonable(doc), "\n".join(lines)


def _underlying_splice_doc(g: SpliceDiagram, doc: dict, lines: list[str]):
    u = underlying_splice(g)
    doc["underlying"] = serialize(u)
    lines += ["underlying splice diagram:", serialize(u).rstrip(), ""]
    try:
        r = reduce_splice(u)
        doc["reduced"] = serialize(r)
        lines += ["reduced:", serialize(r).rstrip()]
    except DegenerateShapeError as exc:
        doc["reduced"] = None
        lines.append(f"reduced: none ({exc})")


def cmd_underlying(args):
    x = _load(args.input)
    doc, lines = {}, []
    if isinstance(x, SpliceDiagram):
        _underlying_splice_doc(x, doc, lines)
    else:
        u = underlying(x)
        doc["plumbing"] = serialize(u)
        lines += ["underlying plumbing:", serialize(u).rstrip(), ""]
        try:
            _underlying_splice_doc(extract_splice(x), doc, lines)
        except (DegenerateShapeError, SingularPlumbingError) as exc:
            doc["underlying"] = doc["reduced"] = None
            lines.append(f"no splice diagram: {exc}")
    return OK, doc, "\n".join(lines)


def cmd_construct(args):
    g = _load(args.input, "splice")
    try:
        choices = choose_coefficients(g, args.mode, cap=args.cap)
    except ConstructionError as exc:
        return FAILED, {"error": str(exc)}, f"cannot construct: {exc}"
    if not choices:
        msg = f"no coefficient choice exists ({args.mode} condition fails)"
        return FAILED, {"error": msg}, msg
    if not 0 <= args.choice < len(choices):
        raise UsageError(f"--choice must be in [0, {len(choices) - 1}]")
    reports = []
    first = None
    for i, c in enumerate(choices):
        try:
            out = construct(g, c)
        except ConstructionError as exc:
            reports.append({"alpha": c.alpha, "error": str(exc), "passed": False})
            continue
        r = verify_construction(g, out)
        reports.append({
            "alpha": c.alpha, "passed": r.passed, "splice_matches": r.splice_matches,
            "orbifold_order": r.homology_order, "edge_determinant": r.edge_determinant,
            "reducible": r.reducible, "two_node_congruence": r.two_node_congruence,
            "orbifold_congruence": r.orbifold_congruence, "notes": r.notes,
        })
        if i == args.choice:
            first = (out, r)
    ok = all(x["passed"] for x in reports)
    doc = {"choices": reports, "selected": args.choice, "plumbing": None}
    lines = []
    if first:
        out, r = first
        doc["plumbing"] = serialize(out.plumbing)
        doc["branches"] = [
            {"leaf": b.leaf, "side": b.side, "n": b.n, "alpha": b.alpha, "o": b.o,
             "lambda": b.lam, "p": b.p, "string": b.string} for b in out.branches]
        doc["node_weights"] = list(out.b)
        lines += [serialize(out.plumbing).rstrip(), ""]
        rows = [[b.leaf, b.side, b.n, b.alpha, b.o, b.lam, b.p, " ".join(map(str, b.string)) or "-"]
                for b in out.branches]
        lines += [_table(rows, ["leaf", "node", "n", "alpha", "o", "lambda", "p", "string"]), ""]
        if r.order_matches:
            lines.append(f"order {r.homology_order} = D(e)")
        else:
            lines.append(f"order {r.homology_order} != D(e) = {r.edge_determinant}")
    rows = [[i, " ".join(f"{w}={a}" for w, a in sorted(x["alpha"].items())), _yes(x["passed"])]
            for i, x in enumerate(reports)]
    lines += ["", _table(rows, ["choice", "coefficients", "verified"])]
    for i, x in enumerate(reports):
        for n in x.get("notes", []) + ([x["error"]] if "error" in x else []):
            lines.append(f"choice {i}: {n}")
    return (OK if ok else FAILED), doc, "\n".join(lines)


def cmd_congruence(args):
    p = _load(args.input, "plumbing")
    try:
        w = check_orbifold_congruence(p, cap=args.cap)
    except SemigroupConditionError as exc:
        return FAILED, {"passed": False, "error": str(exc)}, f"congruence not checkable: {exc}"
    except (DegenerateShapeError, SingularPlumbingError) as exc:
        return FAILED, {"passed": False, "error": str(exc)}, f"no splice diagram: {exc}"
    doc = {
        "passed": w.passed, "order": w.det, "cap": w.cap, "criteria_agree": w.criteria_agree,
        "nodes": [{"node": n.node, "passed": n.passed, "chosen": n.chosen, "character": n.character,
                   "per_leaf_passed": n.per_leaf_passed, "candidates": n.candidates} for n in w.nodes],
    }
    rows = []
    for n in w.nodes:
        chosen = "; ".join(
            f"{u}: " + " ".join(f"{x}^{e}" for x, e in sorted(m.items()) if e) for u, m in n.chosen.items())
        rows.append([n.node, _yes(n.passed), chosen or "-",
                     " ".join(str(c) for c in n.character) if n.character else "-"])
    lines = [_table(rows, ["node", "passed", "monomials", "character"]), "",
             f"congruence condition: {_yes(w.passed)} (cap {w.cap}, group order {w.det})",
             f"per-leaf formula agrees: {_yes(w.criteria_agree)}"]
    return (OK if w.passed else FAILED), _jsonable(doc), "\n".join(lines)


def cmd_equations(args):
    g = _load(args.input, "splice")
    try:
        s = generate_equations(g, seed=args.seed)
    except SemigroupConditionError as exc:
        return FAILED, {"error": str(exc)}, f"no admissible monomials: {exc}"
    h = check_homogeneity(s, g)
    doc = dict(s.to_dict(), homogeneous=h.ok, violations=h.violations)
    text = s.render().rstrip() or "(no equations)"
    if not h.ok:
        text += "\n" + "\n".join(h.violations)
    return (OK if h.ok else FAILED), doc, text


COMMANDS = {
    "check": (cmd_check, "splice diagram conditions and realizability screen"),
    "analyze": (cmd_analyze, "homology, splice diagram and discriminant group of a plumbing"),
    "underlying": (cmd_underlying, "underlying and reduced splice diagrams"),
    "construct": (cmd_construct, "orbifold plumbing realizing a two-node splice diagram"),
    "congruence": (cmd_congruence, "orbifold congruence condition of a plumbing"),
    "equations": (cmd_equations, "splice diagram equations"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="splicekit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("input", help="diagram file")
        sp.add_argument("--format", choices=["human", "machine"], default="human")
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP,
                        help="maximum semigroup representations enumerated per edge end")
        sp.add_argument("--seed", type=int, default=0, help="offset of the coefficient bases")
        if name == "construct":
            sp.add_argument("--mode", choices=["semigroup", "ideal"], default="semigroup")
            sp.add_argument("--choice", type=int, default=0, help="index of the choice to print")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    if args.cap < 1 or args.seed < 0:
        print("error: --cap must be positive and --seed non-negative", file=sys.stderr)
        return USAGE
    try:
        code, doc, text = COMMANDS[args.command][0](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    if args.format == "machine":
        print(json.dumps(_jsonable(doc), sort_keys=True, indent=2))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
