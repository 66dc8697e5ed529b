"""Command-line driver for the verification suites.

Exit status: 0 when no check failed, 1 when some check failed, 2 on a usage
error, 3 when a construction fails its own consistency check.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from .checks import REGISTRY, SUITE_NAMES, SuiteConfig, UsageError, list_checks, run_suite
from .constructions import ConstructionError

REPORT_DIR_ENV = "GKS_REPORT_DIR"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUILD = 0, 1, 2, 3


def format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    return "%.17g" % x


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with keys in insertion order and 17-digit floats."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_string(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return _string(obj)
    if hasattr(obj, "item"):  # numpy scalar
        return dumps(obj.item(), indent, _level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _string(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def _parse_tol(items: list[str]) -> dict[str, float]:
    out = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"tolerance override must look like id=value, got {item!r}")
        if key not in REGISTRY:
            raise UsageError(f"unknown check id {key!r}")
        try:
            out[key] = float(val)
        except ValueError:
            raise UsageError(f"tolerance for {key} is not a number: {val!r}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gks-verify",
        description="Verify generalized Killing spinor identities on model manifolds.",
    )
    p.add_argument("suite", help=f"one of {', '.join(SUITE_NAMES)}, or 'list' to list checks")
    p.add_argument("--model", help="construction or model name overriding the suite's defaults")
    p.add_argument("--samples", type=int, default=100, help="points per target (default 100)")
    p.add_argument("--seed", type=int, default=0, help="64-bit sampling seed (default 0)")
    p.add_argument("--tol", action="append", default=[], metavar="ID=VALUE",
                   help="override the tolerance of a check; repeatable")
    p.add_argument("--report", type=Path,
                   help=f"report path (default: ${REPORT_DIR_ENV}/report-<suite>-<seed>.json, "
                        "or the current directory)")
    return p


def _report_path(args) -> Path:
    if args.report is not None:
        return args.report
    base = Path(os.environ.get(REPORT_DIR_ENV, "."))
    return base / f"report-{args.suite}-{args.seed}.json"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits with 2 on usage errors already
        return int(exc.code or 0)
    if args.suite == "list":
        sys.stdout.write(list_checks())
        return EXIT_OK
    try:
        cfg = SuiteConfig(args.suite, args.model, args.samples, args.seed, _parse_tol(args.tol))
        report = run_suite(cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConstructionError as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_BUILD

    path = _report_path(args)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(report) + "\n", encoding="utf-8")

    for c in report["checks"]:
        if c["verdict"] == "inapplicable":
            continue
        val = "-" if c["max_residual"] is None else f"{c['max_residual']:.3e}"
        print(f"{c['verdict']:4s}  {c['suite']:12s} {c['target']:22s} {c['id']:16s} "
              f"{val} <= {c['tolerance']:.1e}")
    s = report["summary"]
    print(f"{s['status']}: {s['pass']} passed, {s['fail']} failed, "
          f"{s['inapplicable']} inapplicable; report written to {path}")
    return EXIT_FAIL if s["fail"] else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
