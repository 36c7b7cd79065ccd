"""Command line driver: ``abclab <config.toml> [--scenario NAME] [--seed N] [--trials N] [--out DIR]``.

Writes ``<out>/<scenario>.csv`` and ``<out>/summary.json``. Exit codes:
0 all checks passed, 1 usage or runtime error, 2 a physics check failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .config import SCENARIOS, ConfigError, ScenarioConfig, parse_config
from .errors import ABCLabError
from .scenarios import RUNNERS

EXIT_OK, EXIT_ERROR, EXIT_CHECK_FAILED = 0, 1, 2


@dataclass
class RunSummary:
    scenario: str
    checks: dict
    scalars: dict
    wall_time: float = 0.0
    header: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks.values())

    def to_dict(self, include_timing: bool = False) -> dict:
        d = {
            "scenario": self.scenario,
            "passed": self.passed,
            "checks": self.checks,
            "scalars": self.scalars,
        }
        if include_timing:
            d["wall_time"] = self.wall_time
        return d


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    if isinstance(x, complex):
        raise TypeError("complex values must be split into re_/im_ columns")
    return format(float(x), ".17g")


def run_scenario(cfg: ScenarioConfig) -> RunSummary:
    t0 = time.perf_counter()
    try:
        header, rows, checks, scalars = RUNNERS[cfg.scenario](cfg)
    except ABCLabError as exc:
        raise type(exc)(f"[{cfg.scenario}] {exc}") from exc
    return RunSummary(cfg.scenario, checks, scalars, time.perf_counter() - t0, header, rows)


def write_outputs(summary: RunSummary, out_dir, include_timing: bool = False) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{summary.scenario}.csv"
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(summary.header)
        for row in summary.rows:
            w.writerow([_fmt(x) for x in row])
    json_path = out / "summary.json"
    json_path.write_text(
        json.dumps(summary.to_dict(include_timing), indent=2, sort_keys=True) + "\n"
    )
    return csv_path, json_path


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="abclab", description=__doc__.splitlines()[0])
    ap.add_argument("config", help="TOML scenario file")
    ap.add_argument("--scenario", choices=SCENARIOS, help="override the scenario in the file")
    ap.add_argument("--seed", type=int, help="seed for randomized suites (default 0)")
    ap.add_argument("--trials", type=int, help="number of randomized trials (default 100)")
    ap.add_argument("--out", help="output directory (default: `out` key or ./out)")
    ap.add_argument(
        "--timing", action="store_true", help="record wall time in summary.json (breaks bit-identity)"
    )
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text()
        cfg = parse_config(text, scenario=args.scenario)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.trials is not None:
            if args.trials < 1:
                raise ConfigError("--trials must be >= 1")
            cfg.trials = args.trials
        if args.out is not None:
            cfg.out = args.out
        summary = run_scenario(cfg)
        write_outputs(summary, cfg.out, args.timing)
    except (OSError, ConfigError, ABCLabError, ValueError) as exc:
        print(f"abclab: error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    for name, c in summary.checks.items():
        status = "PASS" if c["passed"] else "FAIL"
        print(f"{status}  {summary.scenario}/{name}: {c['value']:.3e} (tol {c['tolerance']:.1e})")
    print(f"wall time {summary.wall_time:.2f} s", file=sys.stderr)
    return EXIT_OK if summary.passed else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
