"""Command line: ``magweyl verify | list-checks | calibrate``."""
from __future__ import annotations

import argparse
import json
import sys

from .checks import CATALOG, calibrate
from .harness import ConfigError, ScenarioConfig, emit_report, run_scenario


def _config(args) -> ScenarioConfig:
    cfg = ScenarioConfig.load(args.config) if args.config else ScenarioConfig(checks=list(CATALOG))
    if args.seed is not None:
        cfg.seed = args.seed
    return cfg


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="magweyl", description="Magnetic Weyl calculus identity checks")
    sub = p.add_subparsers(dest="cmd", required=True)
    for name in ("verify", "calibrate"):
        s = sub.add_parser(name)
        s.add_argument("--config", help="JSON scenario file (default: every check at the desk grid)")
        s.add_argument("--out", help="directory for report files")
        s.add_argument("--seed", type=int)
        s.add_argument("--tolerance-scale", type=float, default=1.0)
        s.add_argument("--jobs", type=int, default=1)
        s.add_argument("--no-timing", action="store_true", help="write zero wall times (byte-stable reports)")
    sub.add_parser("list-checks")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.cmd == "list-checks":
        for c in CATALOG.values():
            print(f"{c.name:34s} tol={c.tolerance:<8g} [{c.criterion:2d}] {c.summary}")
        return 0
    try:
        cfg = _config(args)
        cfg.validate()
        if args.cmd == "calibrate":
            vals = calibrate(cfg.build())
            vals["kappa"] = [vals["kappa"].real, vals["kappa"].imag]
            text = json.dumps(vals, indent=2, sort_keys=True)
            print(text)
            if args.out:
                from pathlib import Path
                Path(args.out).mkdir(parents=True, exist_ok=True)
                (Path(args.out) / "calibration.json").write_text(text + "\n")
            return 0
        reports = run_scenario(cfg, args.tolerance_scale, args.jobs, timing=not args.no_timing)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    for r in reports:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.check:34s} {r.residual:.3e} <= {r.tolerance:.1e}  {r.seconds:.1f}s")
    if args.out:
        try:
            emit_report(reports, args.out)
        except ConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
