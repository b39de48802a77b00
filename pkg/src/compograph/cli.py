"""compograph command line.

Exit status: 0 success, 1 unsatisfiable / no match, 2 bad input, 3 internal
invariant violation. Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import enum
import os
import sys
from pathlib import Path

from . import io
from .composer import Unsatisfiable, build_interaction_graph, compose
from .export import (
    composition_dot,
    composition_json,
    interaction_dot,
    interaction_json,
    trace_json,
    trace_text,
)
from .matcher import SubRequest, best_match
from .model import Taxonomy, TaxonomyError, WorldState
from .planner import (
    GoalShortfall,
    InvariantViolation,
    MissingInput,
    PreconditionViolation,
    execution_order,
    simulate,
)
from .registry import PublishError, Registry, RegistryError, publish_composite


class ExitStatus(enum.IntEnum):
    OK = 0
    UNSATISFIABLE = 1
    INPUT_ERROR = 2
    INTERNAL_ERROR = 3


class _Fail(Exception):
    def __init__(self, status: ExitStatus, message: str):
        self.status = status
        super().__init__(message)


def _color() -> bool:
    return "COMPOGRAPH_NO_COLOR" not in os.environ and sys.stderr.isatty()


def _err(msg: str) -> None:
    prefix = "\033[31merror:\033[0m" if _color() else "error:"
    print(f"{prefix} {msg}", file=sys.stderr)


def _csv(value: str) -> list[str]:
    return [v for v in (p.strip() for p in value.split(",")) if v]


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _registry(args) -> Registry:
    try:
        r = io.read_registry(args.registry)
        if args.taxonomy:
            extra = io.read_taxonomy(args.taxonomy)
            r = Registry(r, r.vocab, Taxonomy(r.taxonomy.edges | extra.edges))
    except (io.FormatError, TaxonomyError) as exc:
        raise _Fail(ExitStatus.INPUT_ERROR, str(exc)) from exc
    except RegistryError as exc:
        raise _Fail(ExitStatus.INPUT_ERROR, "invalid registry: " + str(exc)) from exc
    if args.approx_threshold is not None:
        if not 0.0 <= args.approx_threshold <= 1.0:
            raise _Fail(ExitStatus.INPUT_ERROR, "--approx-threshold must lie in [0, 1]")
        r = r.with_approx(args.approx_threshold)
    return r


def _request(args):
    try:
        return io.read_request(args.request)
    except io.FormatError as exc:
        raise _Fail(ExitStatus.INPUT_ERROR, str(exc)) from exc


def _compose(r, req):
    try:
        return compose(r, req)
    except Unsatisfiable as exc:
        raise _Fail(ExitStatus.UNSATISFIABLE, str(exc)) from exc


def cmd_validate(args) -> ExitStatus:
    try:
        r = io.read_registry(args.registry)
    except io.FormatError as exc:
        raise _Fail(ExitStatus.INPUT_ERROR, str(exc)) from exc
    except RegistryError as exc:
        for v in exc.violations:
            print(v)
        print(f"{len(exc.violations)} violations")
        return ExitStatus.INPUT_ERROR
    print(f"{len(r)} services valid")
    return ExitStatus.OK


def cmd_discover(args) -> ExitStatus:
    r = _registry(args)
    available, missing = set(_csv(args.available)), set(_csv(args.missing))
    sub = SubRequest(available, missing)
    if not sub.missing:
        raise _Fail(ExitStatus.INPUT_ERROR, "--missing is empty")
    if sub.available & sub.missing:
        overlap = ",".join(sorted(sub.available & sub.missing))
        raise _Fail(ExitStatus.INPUT_ERROR, f"concepts both available and missing: {overlap}")
    found = best_match(r, sub, WorldState(_csv(args.world)))
    if found is None:
        print("no match", file=sys.stderr)
        return ExitStatus.UNSATISFIABLE
    name, score = found
    sys.stdout.write(io.dumps({"service": name, **score.as_dict()}))
    return ExitStatus.OK


def cmd_compose(args) -> ExitStatus:
    r = _registry(args)
    g = _compose(r, _request(args))
    plan = execution_order(g) if args.plan else None
    if args.dot:
        _write(args.dot, composition_dot(g))
    _write(args.json, io.dumps(composition_json(g, plan)))
    return ExitStatus.OK


def cmd_plan(args) -> ExitStatus:
    r = _registry(args)
    req = _request(args)
    plan = execution_order(_compose(r, req))
    try:
        trace = simulate(plan, req, r, strict=args.strict)
    except PreconditionViolation as exc:
        raise _Fail(ExitStatus.UNSATISFIABLE, str(exc)) from exc
    except (MissingInput, GoalShortfall) as exc:
        raise _Fail(ExitStatus.INTERNAL_ERROR, f"plan failed simulation: {exc}") from exc
    for service, prop in trace.violations:
        print(f"warning: {service}: precondition {prop} does not hold", file=sys.stderr)
    if args.json:
        doc = trace_json(trace)
        doc["stages"] = [list(s) for s in plan.stages]
        _write(args.json, io.dumps(doc))
    sys.stdout.write(trace_text(trace))
    return ExitStatus.OK


def cmd_publish(args) -> ExitStatus:
    r = _registry(args)
    req = _request(args)
    name = args.name.strip()
    if name in r:
        raise _Fail(ExitStatus.INPUT_ERROR, f"service name {name!r} already registered")
    plan = execution_order(_compose(r, req))
    try:
        out = publish_composite(r, name, plan, req)
    except PublishError as exc:
        raise _Fail(ExitStatus.INPUT_ERROR, str(exc)) from exc
    io.write_registry(out, args.out)
    sys.stdout.write(io.dumps(out[name].to_record()))
    return ExitStatus.OK


def cmd_graph(args) -> ExitStatus:
    g = build_interaction_graph(_registry(args))
    if args.json:
        _write(args.json, io.dumps(interaction_json(g)))
    if args.dot or not args.json:
        _write(args.dot, interaction_dot(g))
    return ExitStatus.OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--registry", required=True, metavar="PATH")
    common.add_argument("--taxonomy", metavar="PATH", help="extra child/parent edges")
    common.add_argument(
        "--approx-threshold",
        type=float,
        metavar="FLOAT",
        help="also match concepts whose edit-distance similarity reaches this value",
    )
    with_req = argparse.ArgumentParser(add_help=False)
    with_req.add_argument("--request", required=True, metavar="PATH")

    p = argparse.ArgumentParser(prog="compograph", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check a registry file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("discover", parents=[common], help="best single service for a sub-request")
    s.add_argument("--available", default="", help="comma-separated known concepts")
    s.add_argument("--missing", required=True, help="comma-separated wanted concepts")
    s.add_argument("--world", default="", help="comma-separated propositions that hold")
    s.set_defaults(func=cmd_discover)

    s = sub.add_parser("compose", parents=[common, with_req], help="build the composition graph")
    s.add_argument("--dot", metavar="PATH")
    s.add_argument("--json", metavar="PATH", help="default: stdout")
    s.add_argument("--plan", action="store_true", help="include execution stages")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("plan", parents=[common, with_req], help="order and simulate a composition")
    s.add_argument("--strict", action="store_true", help="fail on unmet preconditions")
    s.add_argument("--json", metavar="PATH")
    s.set_defaults(func=cmd_plan)

    s = sub.add_parser("publish", parents=[common, with_req], help="register the composite")
    s.add_argument("--name", required=True)
    s.add_argument("--out", required=True, metavar="PATH")
    s.set_defaults(func=cmd_publish)

    s = sub.add_parser("graph", parents=[common], help="export the interaction graph")
    s.add_argument("--dot", metavar="PATH", help="default: stdout")
    s.add_argument("--json", metavar="PATH")
    s.set_defaults(func=cmd_graph)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ExitStatus.OK if exc.code == 0 else ExitStatus.INPUT_ERROR
    try:
        return int(args.func(args))
    except _Fail as exc:
        _err(str(exc))
        return int(exc.status)
    except InvariantViolation as exc:
        _err(f"internal invariant violated: {exc}")
        return int(ExitStatus.INTERNAL_ERROR)
    except OSError as exc:
        _err(str(exc))
        return int(ExitStatus.INPUT_ERROR)


if __name__ == "__main__":
    sys.exit(main())
