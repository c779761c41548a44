"""Command-line front end.

Exit codes: 0 success / all checks pass, 1 a property check failed,
2 unreadable or malformed input, 3 domain error (dimension mismatch, ground
set too large), 4 a mathematical precondition failed (e.g. not extremal).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import checkers, finite, measures
from .errors import (
    DimensionMismatchError,
    DiversityError,
    DomainError,
    PreconditionError,
    SpecParseError,
)
from .geometry import PointSet
from .variants import spec_from_dict

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_PRECONDITION = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _load(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"{path} is not valid JSON: {exc}") from exc


def _emit(payload, out: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _need(args, name: str) -> str:
    value = getattr(args, name)
    if not value:
        raise SpecParseError(f"--{name} is required for this command")
    return value


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def cmd_compute(args) -> int:
    spec = spec_from_dict(_load(_need(args, "spec")))
    A = PointSet.from_dict(_load(_need(args, "points")))
    value = spec(A)
    print(_fmt(value))
    if args.out:
        _emit({"value": value, "spec": spec.to_dict(), "points": len(A)}, args.out)
    return EXIT_OK


def _config(args) -> checkers.CheckConfig:
    kw = {"seed": args.seed, "trials": args.trials}
    if args.tol is not None:
        kw["tol"] = args.tol
    if args.dim is not None:
        kw["dim"] = args.dim
    return checkers.CheckConfig(**kw)


def cmd_check(args) -> int:
    spec = spec_from_dict(_load(_need(args, "spec")))
    suite = args.suite or "all"
    if suite != "all" and suite not in checkers.SUITES:
        raise SpecParseError(f"unknown suite {suite!r}")
    reports = checkers.run_suite(spec, suite, _config(args))
    _emit([r.to_dict() for r in reports], args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _table(args) -> finite.DiversityTable:
    return finite.DiversityTable.from_dict(_load(_need(args, "table")))


def cmd_negtype(args) -> int:
    t = _table(args)
    report = finite.negative_type(t, args.tol)
    _emit(report.to_dict(t), args.out)
    return EXIT_OK


def cmd_embed_decide(args) -> int:
    t = _table(args)
    report = finite.negative_type(t, args.tol)
    payload = report.to_dict(t)
    payload["linear_embeddable"] = report.decision
    _emit(payload, args.out)
    return EXIT_OK


def cmd_convert(args) -> int:
    data = _load(_need(args, "input"))
    if args.direction == "measure-to-kernel":
        result = measures.kernel_from_measure(measures.DiscreteSphericalMeasure.from_dict(data)).to_dict()
    else:
        result = measures.measure_from_simplex_kernel(measures.HPolytope.from_dict(data)).to_dict()
    _emit(result, args.out)
    return EXIT_OK


def cmd_restrict(args) -> int:
    spec = spec_from_dict(_load(_need(args, "spec")))
    data = _load(_need(args, "points"))
    A = PointSet.from_dict(data)
    labels = data.get("labels") or [f"p{i}" for i in range(len(A))]
    if len(labels) != len(A):
        raise SpecParseError("labels and points differ in length")
    t = finite.restrict(spec, dict(zip(labels, A.points)))
    _emit(t.to_dict(), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="diversity", description="Evaluate, check and convert diversities on R^k.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, *flags):
        if "spec" in flags:
            sp.add_argument("--spec", help="diversity spec JSON")
        if "points" in flags:
            sp.add_argument("--points", help="point set JSON")
        if "table" in flags:
            sp.add_argument("--table", help="diversity table JSON")
        sp.add_argument("--tol", type=float, default=None, help="tolerance override")
        sp.add_argument("--out", help="write JSON output here instead of stdout")

    sp = sub.add_parser("compute", help="evaluate a diversity on a point set")
    common(sp, "spec", "points")
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("check", help="run randomized property checks")
    common(sp, "spec")
    sp.add_argument("--suite", default="all", help=f"one of {sorted(checkers.SUITES) + ['all']}")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--dim", type=int, default=None, help="dimension for dimension-free specs (default 2)")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("negtype", help="decide negative type of a diversity table")
    common(sp, "table")
    sp.set_defaults(func=cmd_negtype)

    sp = sub.add_parser("embed-decide", help="decide linear embeddability of a diversity table")
    common(sp, "table")
    sp.set_defaults(func=cmd_embed_decide)

    sp = sub.add_parser("convert", help="convert between balanced measures and simplex kernels")
    sp.add_argument("direction", choices=["measure-to-kernel", "kernel-to-measure"])
    sp.add_argument("--input", help="measure or kernel JSON")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_convert)

    sp = sub.add_parser("restrict", help="tabulate a diversity on labeled points")
    common(sp, "spec", "points")
    sp.set_defaults(func=cmd_restrict)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (DimensionMismatchError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except DiversityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
