"""Command-line front end.

    minangle angles A.json B.json
    minangle check lemma21 --d 3 --n-blocks 2 --trials 1000 --seed 7
    minangle demo two_by_two

Reports are JSON (sorted keys); ``--format text`` prints a short summary
instead. Exit status is 0 iff the invoked check passed.
"""

from __future__ import annotations

import argparse
import datetime
import inspect
import json
import sys
from pathlib import Path

from . import suites
from .errors import MinAngleError
from .grassmann import Subspace, gap_distance, min_angle, principal_angles, trace_product
from .numerics import DEFAULT_TOLERANCE, using_tolerance
from .preserver_lab import (
    _jsonable,
    certificate_complement_not_standard,
    certificate_degenerate_regime,
    certificate_two_by_two,
)
from .sampling import SEED_ENV_VAR, default_seed

DEMOS = ("nonstandard", "degenerate", "two_by_two", "complement_cert")


def _positive(value: str) -> int:
    k = int(value)
    if k < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return k


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--seed", type=int, default=None,
                        help=f"random seed (default: ${SEED_ENV_VAR} or 0)")
    parser.add_argument("--d", type=_positive, default=None, help="ambient dimension")
    parser.add_argument("--n", type=_positive, default=None, help="subspace dimension")
    parser.add_argument("--trials", type=_positive, default=None)
    parser.add_argument("--eps-angle", type=float, default=DEFAULT_TOLERANCE.eps_angle)
    parser.add_argument("--eps-rank", type=float, default=DEFAULT_TOLERANCE.eps_rank)
    parser.add_argument("--out", type=Path, default=None, help="write the JSON report here")
    parser.add_argument("--format", choices=("json", "text"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minangle", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("angles", help="principal angles, ma, gap and tr(PQ) of two subspaces")
    p.add_argument("first", type=Path)
    p.add_argument("second", type=Path)
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("check", help="run a property suite")
    p.add_argument("suite", choices=sorted(suites.SUITES))
    p.add_argument("--n-blocks", type=_positive, default=None)
    _common(p)

    p = sub.add_parser("demo", help="build and validate a certificate or demo")
    p.add_argument("name", choices=DEMOS)
    _common(p)
    return parser


def _emit(payload: dict, args, summary: str) -> None:
    payload = dict(payload)
    payload["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    text = json.dumps(_jsonable(payload), sort_keys=True, indent=2)
    if getattr(args, "out", None):
        args.out.write_text(text + "\n")
    if args.format == "text":
        print(summary)
    else:
        print(text)


def _load_subspace(path: Path) -> Subspace:
    return Subspace.from_dict(json.loads(path.read_text()))


def cmd_angles(args) -> int:
    S, T = _load_subspace(args.first), _load_subspace(args.second)
    pa = principal_angles(S, T)
    result = {"angles": pa.angles.tolist(), "ma": min_angle(S, T),
              "gap": gap_distance(S, T), "trace_product": trace_product(S, T)}
    summary = "\n".join([
        "angles: " + " ".join(f"{a:.12g}" for a in result["angles"]),
        f"ma:     {result['ma']:.12g}",
        f"gap:    {result['gap']:.12g}",
        f"tr(PQ): {result['trace_product']:.12g}",
    ])
    if args.format == "text":
        print(summary)
    else:
        print(json.dumps(result, sort_keys=True, indent=2))
    return 0


def _suite_kwargs(func, args) -> dict:
    params = inspect.signature(func).parameters
    values = {"seed": args.seed, "d": args.d, "n": args.n, "trials": args.trials,
              "n_blocks": getattr(args, "n_blocks", None)}
    return {k: v for k, v in values.items() if k in params and v is not None}


def cmd_check(args) -> int:
    func = suites.SUITES[args.suite]
    report = func(**_suite_kwargs(func, args))
    data = report.to_dict()
    summary = (f"{report.check}: {'PASS' if report.passed else 'FAIL'} "
               f"(seed {report.seed}, trials {report.trials}, "
               f"max residual {report.max_residual:.3e}, violations {len(report.violations)})")
    _emit(data, args, summary)
    return 0 if report.passed else 1


def cmd_demo(args) -> int:
    if args.name == "two_by_two":
        payload = certificate_two_by_two().to_dict()
    elif args.name == "complement_cert":
        payload = certificate_complement_not_standard(args.n or 2).to_dict()
    elif args.name == "degenerate":
        payload = certificate_degenerate_regime(args.n or 2, args.d or 3,
                                                trials=args.trials or 1000,
                                                seed=args.seed).to_dict()
    else:
        report = suites.nonstandard(**_suite_kwargs(suites.nonstandard, args))
        payload = report.to_dict()
        payload["passed"] = payload["pass"]
    payload["seed"] = args.seed
    passed = bool(payload["passed"])
    summary = f"{args.name}: {'PASS' if passed else 'FAIL'}"
    if "evidence" in payload and "max_ma" in payload["evidence"]:
        summary += f" (max ma {payload['evidence']['max_ma']:.3e})"
    _emit(payload, args, summary)
    return 0 if passed else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is None and args.command != "angles":
        args.seed = default_seed()
    handler = {"angles": cmd_angles, "check": cmd_check, "demo": cmd_demo}[args.command]
    overrides = {}
    if args.command != "angles":
        overrides = {"eps_angle": args.eps_angle, "eps_rank": args.eps_rank}
    try:
        with using_tolerance(**overrides):
            return handler(args)
    except (MinAngleError, ValueError, OSError, KeyError) as exc:
        print(f"minangle: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
