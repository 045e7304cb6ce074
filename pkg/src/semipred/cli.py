"""Command-line interface.

Exit status: 0 on success (including mathematical negatives such as a
"hard" verdict, unless ``--strict``), 1 for a negative under ``--strict``,
2 for usage or format errors, 3 when a budget is exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, TextIO

from .classify import DEFAULT_MAX_ORDER, ClassificationReport, QiResult, classify, survey
from . import powers, relational, semigroup
from .errors import BudgetExceededError, QiHoldsError, QiViolatedError, SemipredError
from .formats import parse_rees_file, parse_table_file

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


@dataclass
class Report:
    command: str
    payload: dict = field(default_factory=dict)
    negative: bool = False
    exit_status: int = EXIT_OK

    def to_dict(self) -> dict:
        return {"command": self.command, "exit_status": self.exit_status, "payload": self.payload}


def emit_report(report: Report, fmt: str = "structured", out: TextIO | None = None) -> str:
    """Serialize deterministically.

    ``structured`` is JSON with sorted keys.  ``text`` is one ``key = value``
    line per top-level field with the value as compact JSON, so it parses back
    with :func:`parse_report`.
    """
    doc = report.to_dict()
    if fmt == "structured":
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    elif fmt == "text":
        lines = [f"command = {json.dumps(doc['command'])}", f"exit_status = {doc['exit_status']}"]
        for key in sorted(doc["payload"]):
            lines.append(f"{key} = {json.dumps(doc['payload'][key], sort_keys=True)}")
        text = "\n".join(lines) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if out is not None:
        out.write(text)
    return text


def parse_report(text: str, fmt: str = "structured") -> dict:
    if fmt == "structured":
        return json.loads(text)
    doc: dict = {"payload": {}}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, _, value = line.partition(" = ")
        if key in ("command", "exit_status"):
            doc[key] = json.loads(value)
        else:
            doc["payload"][key] = json.loads(value)
    return doc


# -- payload builders ------------------------------------------------------------


def _qi_dict(qi: QiResult) -> dict:
    return {
        "holds": qi.holds,
        "side": qi.side,
        "witness": list(qi.witness) if qi.witness else None,
        "products": qi.products,
    }


def classification_payload(report: ClassificationReport) -> dict:
    return {
        "verdict": report.verdict,
        "qi_left": _qi_dict(report.qi_left),
        "qi_right": _qi_dict(report.qi_right),
        "kernel": sorted(report.kernel),
        "reducible": sorted(report.reducible),
        "kernel_is_reducible": report.kernel_is_reducible,
        "is_homogroup": report.is_homogroup,
        "kernel_identity": report.kernel_identity,
        "is_rect_band_kernel": report.is_rect_band_kernel,
    }


def chain_payload(ch: powers.ChainReport) -> dict:
    return {
        "side": ch.side,
        "witness": dict(zip(("a", "b", "alpha", "beta", "c"), ch.witness)),
        "exponent": ch.exponent,
        "equations": [str(sub.atoms[-1]) for sub in ch.systems],
        "counts": list(ch.counts),
        "strictly_decreasing": ch.strictly_decreasing(),
        "violating_points": [
            {"n": v.n, "point": list(v.point), "failing_coordinate": v.failing_coordinate}
            for v in ch.violating_points
        ],
    }


# -- commands ----------------------------------------------------------------------


def _structure(path, as_group_lang: bool) -> relational.RelationalStructure:
    s = parse_table_file(path)
    if as_group_lang:
        return relational.predicatize_group(semigroup.as_group(s))
    return relational.predicatize_semigroup(s)


def _check_universe(args, n: int) -> None:
    if n > args.max_universe:
        raise BudgetExceededError("universe", args.max_universe, n)


def _check_vars(args, count: int) -> None:
    if count > args.max_vars:
        raise BudgetExceededError("variables", args.max_vars, count)


def cmd_check(args) -> Report:
    report = classify(parse_table_file(args.table))
    return Report("check", classification_payload(report), negative=report.verdict == "hard")


def cmd_rees(args) -> Report:
    spec = parse_rees_file(args.spec)
    labeled = semigroup.rees_construct(spec)
    s = labeled.semigroup
    return Report(
        "rees",
        {
            "order": s.size,
            "table": semigroup.format_table(s.table),
            "labels": [list(lab) for lab in labeled.labels],
            "is_simple": semigroup.is_simple(s),
            "is_rectangular_band_of_groups": semigroup.is_rectangular_band_of_groups(s),
        },
    )


def cmd_kernel(args) -> Report:
    s = parse_table_file(args.table)
    hg = semigroup.is_homogroup(s)
    payload = {
        "kernel": semigroup.kernel(s).sorted(),
        "reducible": semigroup.reducible(s).sorted(),
        "idempotents": semigroup.idempotents(s).sorted(),
        "is_simple": semigroup.is_simple(s),
        "is_homogroup": hg.is_homogroup,
        "kernel_identity": hg.identity,
    }
    if hg:
        center = semigroup.verify_homogroup_center(s)
        payload["center_check"] = {"holds": center.holds, "witness": center.witness}
    return Report("kernel", payload)


def cmd_predicatize(args) -> Report:
    a = _structure(args.table, args.group)
    rels = {
        name: {"arity": arity, "tuples": sorted(list(t) for t in tuples)}
        for name, (arity, tuples) in a.relations.items()
    }
    return Report("predicatize", {"universe_size": a.universe_size, "relations": rels})


def _load_system(args) -> tuple[relational.EquationSystem, tuple[str, ...]]:
    if args.system:
        sys_ = relational.parse_system(Path(args.system).read_text())
        _check_vars(args, len(sys_.variables))
        return sys_, sys_.variables
    words = relational.parse_words(Path(args.words).read_text())
    _check_vars(args, len(words.variables()))
    lang = "group" if args.group else "semigroup"
    compiled = relational.compile_word_equations(words, lang)
    return compiled.system, compiled.projection


def cmd_solve(args) -> Report:
    a = _structure(args.structure, args.group)
    _check_universe(args, a.universe_size)
    sys_, default_proj = _load_system(args)
    project = tuple(v.strip() for v in args.project.split(",")) if args.project else default_proj
    if args.N is None:
        sol = relational.solve(a, sys_, max_cells=None)
        sol = relational.project_solutions(sol, project)
        count = len(sol)
        points = [list(p) for p in list(sol)[: args.limit]]
    else:
        powers.exponent_budget(args.N, args.max_exponent)
        psol = powers.solve_power(powers.PowerStructure(a, args.N), sys_, max_cells=None)
        psol = powers.project_product(psol, project)
        count = psol.count
        points = []
        for p in psol:
            if len(points) >= args.limit:
                break
            points.append([list(v) for v in p])
    payload = {"variables": list(project), "count": count, "inconsistent": count == 0}
    if not args.count:
        payload["points"] = points
    if args.N is not None:
        payload["exponent"] = args.N
    return Report("solve", payload, negative=count == 0)


def cmd_reduce(args) -> Report:
    a = _structure(args.structure, args.group)
    _check_universe(args, a.universe_size)
    powers.exponent_budget(args.N, args.max_exponent)
    sys_ = relational.parse_system(Path(args.system).read_text())
    _check_vars(args, len(sys_.variables))
    p = powers.PowerStructure(a, args.N)
    payload = {"input_atoms": len(sys_), "exponent": args.N}
    try:
        reduced = powers.reduce_to_finite(p, sys_, max_cells=None)
    except QiViolatedError as exc:
        payload.update(reducible=False, reason=str(exc), witness=_qi_dict(exc.witness))
        return Report("reduce", payload, negative=True)
    consistency = powers.check_consistency(p, sys_, max_cells=None)
    payload.update(
        reducible=True,
        consistent=consistency.consistent,
        inconsistent_coordinate=consistency.coordinate,
        buckets=[
            {"tag": b.tag, "variables": list(b.variables), "size": len(b)}
            for b in powers.decompose(sys_)
        ],
        reduced_atoms=len(reduced),
        reduced_system=relational.format_system(reduced),
        equivalent=powers.power_systems_equivalent(p, sys_, reduced, max_cells=None),
    )
    return Report("reduce", payload, negative=not consistency.consistent)


def cmd_chain(args) -> Report:
    s = parse_table_file(args.table)
    powers.exponent_budget(args.N, args.max_exponent)
    try:
        ch = powers.counterexample_chain(s, args.N - 1, max_cells=None)
    except QiHoldsError as exc:
        return Report("chain", {"qi_holds": True, "reason": str(exc)}, negative=True)
    return Report("chain", {"qi_holds": False, **chain_payload(ch)})


def cmd_survey(args) -> Report:
    mode = "iso" if args.iso else "labeled"
    out = survey(args.order, mode, max_order=args.max_order, workers=args.workers)
    return Report("survey", out.to_dict(), negative=out.violations > 0)


# -- argument parsing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semipred",
        description="Semigroups as relational structures: QI classification, "
        "equation solving over direct powers, surveys of small semigroups.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("structured", "text"), default="structured")
    common.add_argument("--strict", action="store_true", help="exit 1 on mathematical negatives")
    common.add_argument("--max-vars", type=int, default=6)
    common.add_argument("--max-universe", type=int, default=8)
    common.add_argument("--max-exponent", type=int, default=4)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="quasi-identities and verdict")
    p.add_argument("table")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("rees", parents=[common], help="build a Rees matrix semigroup")
    p.add_argument("spec")
    p.set_defaults(func=cmd_rees)

    p = sub.add_parser("kernel", parents=[common], help="kernel, reducible elements, idempotents")
    p.add_argument("table")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("predicatize", parents=[common], help="relations M (and I, E)")
    p.add_argument("table")
    p.add_argument("--group", action="store_true")
    p.set_defaults(func=cmd_predicatize)

    p = sub.add_parser("solve", parents=[common], help="solve a system over a structure or power")
    p.add_argument("--structure", required=True)
    p.add_argument("--group", action="store_true")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--system")
    src.add_argument("--words")
    p.add_argument("--N", type=_positive, default=None)
    p.add_argument("--project", default=None)
    p.add_argument("--count", action="store_true")
    p.add_argument("--limit", type=int, default=20, help="maximum points listed")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", parents=[common], help="finite equivalent subsystem over a power")
    p.add_argument("--structure", required=True)
    p.add_argument("--group", action="store_true")
    p.add_argument("--system", required=True)
    p.add_argument("--N", type=_positive, required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("chain", parents=[common], help="shrinking prefix chain for a hard semigroup")
    p.add_argument("table")
    p.add_argument("--N", type=_positive, required=True)
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("survey", parents=[common], help="check kernel and homogroup properties on all tables of an order")
    p.add_argument("--order", type=_positive, required=True)
    p.add_argument("--iso", action="store_true", help="one table per isomorphism class")
    p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_survey)
    return parser


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def run(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
    except BudgetExceededError as exc:
        print(f"semipred: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (SemipredError, OSError, ValueError) as exc:
        print(f"semipred: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report.exit_status = EXIT_NEGATIVE if (args.strict and report.negative) else EXIT_OK
    emit_report(report, args.format, out)
    return report.exit_status


def main(argv: Sequence[str] | None = None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
