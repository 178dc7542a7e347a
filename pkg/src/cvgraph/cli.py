"""Command line front end.

Subcommands:

* ``apply``       run measurement actions on a graph, print the session state
* ``lc``          rewrite a graph by a single local complementation
* ``verify``      randomized rule-vs-oracle trials, JSONL report plus figure
* ``plan``        search for a measurement sequence reaching a target graph
* ``export-dot``  print a graph in DOT format
* ``serve``       start the HTTP session service

Exit codes: 0 success, 1 domain error, 2 usage error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .actions import assign_outcomes, parse_action
from .bases import MeasurementBasis
from .engine import Session
from .errors import EngineError
from .graph import parse_graph, serialize_graph, to_dot
from .planner import PlanQuery, plan
from .rationals import parse_rational
from .rules import local_complement
from .verify import run_verification


def _load_graph(path: str):
    return parse_graph(Path(path).read_text())


def _r_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad squeezing list: {text!r}")
    if len(values) < 2:
        raise argparse.ArgumentTypeError("need at least two squeezing values")
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvgraph",
        description="measurement rewrites on weighted graph states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    apply_p = sub.add_parser("apply", help="run measurement actions on a graph")
    apply_p.add_argument("--graph", required=True, metavar="FILE")
    apply_p.add_argument(
        "--measure",
        action="append",
        required=True,
        metavar="ACTION",
        help="vertex:basis action, repeatable; see the action grammar",
    )
    apply_p.add_argument("--out", metavar="FILE", help="write state JSON here")
    apply_p.add_argument("--dot", metavar="FILE", help="write final graph DOT here")

    lc_p = sub.add_parser("lc", help="local complementation about a vertex")
    lc_p.add_argument("--graph", required=True, metavar="FILE")
    lc_p.add_argument("--vertex", required=True, metavar="V")
    lc_p.add_argument("--delta", required=True, metavar="RATIONAL")

    verify_p = sub.add_parser("verify", help="randomized cross-validation")
    verify_p.add_argument("--random", type=int, required=True, metavar="N")
    verify_p.add_argument("--max-vertices", type=int, default=8, metavar="K")
    verify_p.add_argument("--seed", type=int, default=0, metavar="S")
    verify_p.add_argument("--covariance", action="store_true")
    verify_p.add_argument("--r-list", type=_r_list, default=(2.0, 3.0, 4.0))
    verify_p.add_argument("--report", default="verify-report.jsonl", metavar="FILE")

    plan_p = sub.add_parser("plan", help="search for a measurement sequence")
    plan_p.add_argument("--graph", required=True, metavar="FILE")
    plan_p.add_argument("--target", required=True, metavar="FILE")
    plan_p.add_argument("--max-depth", type=int, required=True, metavar="D")
    plan_p.add_argument(
        "--bases",
        required=True,
        metavar="LIST",
        help="comma separated basis labels, e.g. x,p,theta:1",
    )

    dot_p = sub.add_parser("export-dot", help="print a graph in DOT format")
    dot_p.add_argument("--graph", required=True, metavar="FILE")

    serve_p = sub.add_parser("serve", help="start the HTTP session service")
    serve_p.add_argument("--port", type=int, required=True, metavar="P")
    serve_p.add_argument("--static", metavar="DIR", help="also serve this directory")

    return parser


def _cmd_apply(args: argparse.Namespace) -> int:
    graph = _load_graph(args.graph)
    actions = assign_outcomes([parse_action(text) for text in args.measure])
    session = Session(graph)
    for action in actions:
        session.measure(action.vertex, action.basis, action.outcome, b0=action.b0)
    payload = json.dumps(session.state_json(), indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(payload)
    else:
        sys.stdout.write(payload)
    if args.dot:
        Path(args.dot).write_text(to_dot(session.graph))
    return 0


def _cmd_lc(args: argparse.Namespace) -> int:
    graph = _load_graph(args.graph)
    rewritten = local_complement(graph, args.vertex, parse_rational(args.delta))
    sys.stdout.write(serialize_graph(rewritten) + "\n")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    summary = run_verification(
        args.random,
        args.max_vertices,
        args.seed,
        covariance=args.covariance,
        r_values=tuple(args.r_list),
        report_path=args.report,
    )
    print(f"trials:   {summary.total}")
    print(f"failures: {summary.failures}")
    print(f"report:   {summary.report_path}")
    print(f"figure:   {summary.figure_path}")
    return 0 if summary.passed else 3


def _cmd_plan(args: argparse.Namespace) -> int:
    source = _load_graph(args.graph)
    target = _load_graph(args.target)
    bases = tuple(
        MeasurementBasis.from_label(tok.strip()) for tok in args.bases.split(",")
    )
    search = plan(PlanQuery(source, target, args.max_depth, bases))
    sys.stdout.write(json.dumps(search.to_json(), indent=2, sort_keys=True) + "\n")
    return 0


def _cmd_export_dot(args: argparse.Namespace) -> int:
    sys.stdout.write(to_dot(_load_graph(args.graph)))
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from .server import run_server

    run_server(args.port, static_dir=args.static)
    return 0


_COMMANDS = {
    "apply": _cmd_apply,
    "lc": _cmd_lc,
    "verify": _cmd_verify,
    "plan": _cmd_plan,
    "export-dot": _cmd_export_dot,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
