"""Scenario configs, the check runner and report emission.

Config files are JSON::

    {
      "field":   {"kind": "constant", "b": 1.0},
      "gauge":   "transversal" | "symmetric" | "landau" | {"rho": {...gauge scalar...}},
      "grid":    {"N": 2, "n": 12, "L": 6.0},
      "fixtures": {"u": {"kind": "gaussian", "width": 1.2}},
      "checks":  ["gauge_covariance", "prop3_4_intertwining"],
      "tolerances": {"gauge_covariance": 1e-10},
      "seed": 0,
      "memory_limit_mb": 4096
    }

Fixture entries are validated and hashed into the input digest; the catalog
checks use their documented Gaussian fixtures.
"""
from __future__ import annotations

import csv
import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field as dc_field
from pathlib import Path

from . import magfield as mf
from .checks import CATALOG, Setup, run_check
from .phasespace import PhaseGrid

FIXTURE_KINDS = ("gaussian", "hermite", "random-bandlimited")
GAUGES = ("transversal", "symmetric", "landau")


class ConfigError(ValueError):
    pass


@dataclass
class ScenarioConfig:
    field: dict = dc_field(default_factory=lambda: {"kind": "constant", "b": 1.0})
    gauge: object = "transversal"
    grid: dict = dc_field(default_factory=lambda: {"N": 2, "n": 12, "L": 6.0})
    fixtures: dict = dc_field(default_factory=dict)
    checks: list = dc_field(default_factory=list)
    tolerances: dict = dc_field(default_factory=dict)
    seed: int = 0
    memory_limit_mb: float = 4096.0

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**d)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "ScenarioConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def validate(self) -> None:
        N, n = int(self.grid.get("N", 0)), int(self.grid.get("n", 0))
        if N not in (1, 2):
            raise ConfigError(f"N must be 1 or 2, got {N}")
        if n % 2 or not 4 <= n <= 32:
            raise ConfigError(f"n must be even with 4 <= n <= 32, got {n}")
        if float(self.grid.get("L", 0)) <= 0:
            raise ConfigError("L must be positive")
        bad = [c for c in self.checks if c not in CATALOG]
        bad += [c for c in self.tolerances if c not in CATALOG]
        if bad:
            raise ConfigError(f"unknown check id(s): {', '.join(bad)}")
        for name, fx in self.fixtures.items():
            if not isinstance(fx, dict) or fx.get("kind") not in FIXTURE_KINDS:
                raise ConfigError(f"fixture {name!r}: kind must be one of {FIXTURE_KINDS}")
        if isinstance(self.gauge, str):
            if self.gauge not in GAUGES:
                raise ConfigError(f"gauge must be one of {GAUGES} or {{'rho': ...}}")
        elif not (isinstance(self.gauge, dict) and "rho" in self.gauge):
            raise ConfigError("custom gauge needs a 'rho' gauge-scalar descriptor")
        try:
            mf.FieldSpec.from_dict(dict(self.field, N=N))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad field descriptor: {exc}") from exc

    def build(self) -> Setup:
        N = int(self.grid["N"])
        grid = PhaseGrid(N, int(self.grid["n"]), float(self.grid["L"]))
        B = mf.FieldSpec.from_dict(dict(self.field, N=N))
        A = mf.transversal_gauge(B)
        if self.gauge == "landau":
            if B.kind != "constant":
                raise ConfigError("landau gauge needs a constant field")
            A = mf.gauge_shift(A, mf.landau_shift(B.b))
        elif isinstance(self.gauge, dict):
            A = mf.gauge_shift(A, mf.GaugeScalar.from_dict(self.gauge["rho"]))
        return Setup(grid=grid, field=B, potential=A, seed=int(self.seed), fixtures=dict(self.fixtures))

    def digest(self, check: str) -> str:
        d = asdict(self)
        d.pop("checks")
        d.pop("memory_limit_mb")
        d["check"] = check
        return hashlib.sha256(json.dumps(d, sort_keys=True, default=str).encode()).hexdigest()[:16]


@dataclass
class CheckReport:
    check: str
    inputs_digest: str
    residual: float
    tolerance: float
    passed: bool
    seconds: float
    N: int
    n: int
    L: float

    @classmethod
    def from_json(cls, line: str) -> "CheckReport":
        return cls(**json.loads(line))


# -- memory guard ---------------------------------------------------------------

def predicted_bytes(check: str, grid: dict) -> int:
    """Rough peak of dense complex allocations for one check."""
    N, n = int(grid["N"]), int(grid["n"])
    size = n**N
    peak = 12 * size**2  # a handful of operator matrices and trace tables
    if check == "thm2_2_orthogonality":
        peak += 2 * ((n // 2) ** (2 * N)) ** 2
    if check == "prop3_4_intertwining":
        peak += 24 * size**2
    if check in ("moyal_b0_oracle", "b0_regression"):
        peak += 4 * size**2 * n
    return 16 * peak


def memory_guard(cfg: ScenarioConfig) -> None:
    limit = cfg.memory_limit_mb * 2**20
    for c in cfg.checks:
        need = predicted_bytes(c, cfg.grid)
        if need > limit:
            raise ConfigError(f"check {c!r} needs about {need / 2**20:.0f} MB, over the "
                              f"{cfg.memory_limit_mb:.0f} MB limit")


# -- runner ------------------------------------------------------------------------

def _run_one(args) -> CheckReport:
    cfg, name, scale, timing = args
    s = cfg.build()
    tol = float(cfg.tolerances.get(name, CATALOG[name].tolerance)) * scale
    t0 = time.perf_counter()
    r = abs(run_check(name, s))
    dt = time.perf_counter() - t0 if timing else 0.0
    g = cfg.grid
    return CheckReport(check=name, inputs_digest=cfg.digest(name), residual=r, tolerance=tol,
                       passed=bool(r <= tol), seconds=round(dt, 3),
                       N=int(g["N"]), n=int(g["n"]), L=float(g["L"]))


def run_scenario(cfg: ScenarioConfig, tolerance_scale: float = 1.0, jobs: int = 1,
                 timing: bool = True) -> list[CheckReport]:
    """Validate, guard memory, then run each check; report order follows ``cfg.checks``."""
    cfg.validate()
    memory_guard(cfg)
    tasks = [(cfg, c, float(tolerance_scale), timing) for c in cfg.checks]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_run_one, tasks))
    return [_run_one(t) for t in tasks]


CSV_FIELDS = ("check", "residual", "tolerance", "passed", "seconds")


def emit_report(reports, out_dir, stem: str = "report") -> tuple[Path, Path]:
    """Write ``<stem>.csv`` and ``<stem>.jsonl`` into ``out_dir``."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        csv_path, jl_path = out / f"{stem}.csv", out / f"{stem}.jsonl"
        with open(csv_path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_FIELDS)
            for r in reports:
                w.writerow([r.check, repr(r.residual), repr(r.tolerance), int(r.passed), f"{r.seconds:.3f}"])
        with open(jl_path, "w") as fh:
            for r in reports:
                fh.write(json.dumps(asdict(r), sort_keys=True) + "\n")
    except OSError as exc:
        raise ConfigError(f"cannot write reports to {out}: {exc}") from exc
    return csv_path, jl_path
