"""Benchmark harness: solver roster, experiment runs and self-checks."""

from __future__ import annotations

import csv
import json
import logging
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from .core import ConfigError, RunRecord, SolverConfig, validate_config
from .nonmonotone import tbar_direct, tbar_recursive_step, tbar_weights
from .problems import SUITES, check_gradient, get_problem, list_suite
from .profiles import MEASURES, profile_from_rows, write_profile_csv
from .solver import minimize, write_trace_csv
from .subproblem import cauchy_bound

log = logging.getLogger(__name__)

SOLVER_PRESETS = {
    "ttr": {"strategy": "monotone"},
    "nmtr-g": {"strategy": "grippo"},
    "nmtr-h": {"strategy": "zhang_hager", "eta_fixed": 0.85},
    "nmtr-n": {"strategy": "amini", "eta0": 0.25},
    "nmtr-m": {"strategy": "mo", "eta0": 0.25},
    "nmtr-1": {"strategy": "term1", "eta0": 0.25},
    "nmtr-2": {"strategy": "term2", "eta0": 0.45},
}
_LABEL = re.compile(r"^(ttr|nmtr-[ghnm12])(?:-(\d*\.\d+))?$")
_OVERRIDABLE = {f.name for f in fields(SolverConfig)}

RESULT_FIELDS = ("problem", "solver", "ng", "nf", "status")


def solver_config(label: str, base: SolverConfig = SolverConfig(), **overrides) -> SolverConfig:
    """Resolve a roster label such as ``"nmtr-1"`` or ``"nmtr-2-0.35"``.

    A numeric suffix sets ``eta0`` (the tuning-grid naming); explicit
    ``overrides`` win over both preset and suffix.
    """
    m = _LABEL.match(label.lower())
    if m is None:
        raise ConfigError(f"unknown solver {label!r}, choose from {sorted(SOLVER_PRESETS)}")
    params = dict(SOLVER_PRESETS[m.group(1)])
    if m.group(2) is not None:
        params["eta0"] = float(m.group(2))
    unknown = set(overrides) - _OVERRIDABLE
    if unknown:
        raise ConfigError(f"unknown solver option(s) {sorted(unknown)}")
    params.update(overrides)
    return validate_config(base.replace(**params))


def eta0_sweep(base_label: str, etas=(0.15, 0.25, 0.35, 0.45)) -> list[str]:
    """Labels of an ``eta0`` tuning grid, e.g. ``nmtr-1-0.15, ...``."""
    return [f"{base_label}-{e:g}" for e in etas]


@dataclass
class ExperimentConfig:
    suite: str = "table1"
    solvers: list = field(default_factory=lambda: ["ttr", "nmtr-1", "nmtr-2"])
    overrides: dict = field(default_factory=dict)
    epsilon: float = 1e-5
    k_max: int = 10000
    window_N: int = 10
    dim: Optional[int] = None
    out: str = "results"
    workers: int = 1
    write_traces: bool = True

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown experiment field(s) {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def validate(self) -> "ExperimentConfig":
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}, choose from {sorted(SUITES)}")
        if not self.solvers:
            raise ConfigError("solver list is empty")
        if len(set(self.solvers)) != len(self.solvers):
            raise ConfigError("duplicate solver labels")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        for label in self.solvers:
            self.solver_config(label)
        for label in self.overrides:
            if label not in self.solvers:
                raise ConfigError(f"override for solver {label!r} which is not in the solver list")
        return self

    def solver_config(self, label: str) -> SolverConfig:
        base = SolverConfig(epsilon=self.epsilon, k_max=self.k_max, window_N=self.window_N)
        return solver_config(label, base, **self.overrides.get(label, {}))


def _run_task(task):
    problem_name, dim, label, cfg = task
    problem = get_problem(problem_name, dim)
    return minimize(problem, cfg, solver_name=label).run


def run_matrix(cfg: ExperimentConfig) -> list[RunRecord]:
    """Run every (problem, solver) pair; results in suite x roster order."""
    cfg.validate()
    problems = list_suite(cfg.suite, cfg.dim)
    tasks = [(p.name, p.dim, label, cfg.solver_config(label))
             for p in problems for label in cfg.solvers]
    if cfg.workers == 1:
        return [_run_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        # map preserves submission order, so output order is deterministic
        return list(pool.map(_run_task, tasks, chunksize=1))


def result_rows(runs) -> list[dict]:
    return [{"problem": r.problem_name, "solver": r.solver_name, "ng": r.n_geval,
             "nf": r.n_feval, "status": r.status} for r in runs]


def write_results_csv(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=RESULT_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def read_results_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    missing = set(RESULT_FIELDS) - set(rows[0] if rows else RESULT_FIELDS)
    if missing:
        raise ConfigError(f"{path}: missing column(s) {sorted(missing)}")
    return rows


def write_profiles(out_dir: Path, rows) -> None:
    for measure in MEASURES:
        solvers, taus, rho = profile_from_rows(rows, measure)
        write_profile_csv(out_dir / f"profile_{measure}.csv", solvers, taus, rho)


def run_experiment(cfg: ExperimentConfig) -> list[RunRecord]:
    """Run the matrix and write ``results.csv``, traces and profiles to ``cfg.out``."""
    runs = run_matrix(cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = result_rows(runs)
    write_results_csv(out / "results.csv", rows)
    if cfg.write_traces:
        tdir = out / "traces"
        tdir.mkdir(exist_ok=True)
        for r in runs:
            write_trace_csv(r, tdir / f"{r.problem_name}__{r.solver_name}.csv")
    write_profiles(out, rows)
    return runs


# ---------------------------------------------------------------------------
# self-checks
# ---------------------------------------------------------------------------

@dataclass
class Check:
    name: str
    subject: str
    ok: bool
    detail: str = ""


def check_gradients(problems, tol: float = 1e-6, n_points: int = 10) -> list[Check]:
    out = []
    for p in problems:
        err = check_gradient(p, n_points)
        out.append(Check("gradient", p.name, err <= tol, f"max rel err {err:.2e}"))
    return out


def check_term_equivalence(n_windows: int = 1000, seed: int = 0) -> Check:
    """Direct windowed term vs. repeated recursive steps on random sequences."""
    rng = np.random.default_rng(seed)
    worst_rel = 0.0
    worst_sum = 0.0
    for _ in range(n_windows):
        N = int(rng.integers(1, 11))
        K = int(rng.integers(0, 3 * N + 3))
        f = rng.uniform(-10, 10, K + 1)
        eta = rng.uniform(0, 1, K)
        tbar = f[0]
        for k in range(1, K + 1):
            if k <= N:
                tbar = tbar_recursive_step(tbar, f[k], eta[k - 1])
            else:
                xi = float(np.prod(eta[k - N - 1:k]))
                tbar = tbar_recursive_step(tbar, f[k], eta[k - 1], xi, f[k - N], f[k - N - 1])
        lo = max(0, K - N)
        direct = tbar_direct(f[lo:K + 1], eta[lo:K])
        worst_rel = max(worst_rel, abs(direct - tbar) / max(1.0, abs(direct)))
        w = tbar_weights(eta[lo:K][::-1])
        worst_sum = max(worst_sum, abs(w.sum() - 1.0))
    ok = worst_rel <= 1e-12 and worst_sum <= 1e-14
    return Check("term_equivalence", f"{n_windows} windows", ok,
                 f"max rel diff {worst_rel:.1e}, max |sum w - 1| {worst_sum:.1e}")


class InvariantMonitor:
    """Collects Cauchy-fraction and sandwich violations over runs."""

    def __init__(self, beta: float = 0.5):
        self.beta = beta
        self.solves = 0
        self.cauchy_violations = []

    def on_subproblem(self, g, H, delta, res):
        self.solves += 1
        gnorm = float(np.linalg.norm(g))
        bound = cauchy_bound(gnorm, delta, H.norm2(), self.beta * (1.0 - 1e-8))
        if res.pred < bound:
            self.cauchy_violations.append((delta, res.pred, bound))

    @staticmethod
    def sandwich_violations(run: RunRecord, upper: bool = True) -> list:
        """Accepted records breaking ``f <= T <= flk`` or a rising ``flk``."""
        bad = []
        prev_flk = np.inf
        for rec in run.trace:
            if not rec.accepted:
                continue
            tol = 1e-10 * max(1.0, abs(rec.flk))
            if rec.f > rec.T + tol:
                bad.append((rec.k, "f > T"))
            if upper and rec.T > rec.flk + tol:
                bad.append((rec.k, "T > flk"))
            if upper and rec.flk > prev_flk + tol:
                bad.append((rec.k, "flk increased"))
            prev_flk = rec.flk
        return bad


# strategies whose reference value is bounded by f_l(k) by construction
BOUNDED_STRATEGIES = ("monotone", "grippo", "amini", "term1", "term2")


def check_runs(problems, labels=tuple(SOLVER_PRESETS), k_max: int = 10000) -> list[Check]:
    """Run the roster on ``problems`` and check Cauchy fraction and sandwich."""
    out = []
    for label in labels:
        cfg = solver_config(label, SolverConfig(k_max=k_max))
        mon = InvariantMonitor(cfg.cauchy_fraction_check)
        sandwich = []
        for p in problems:
            run = minimize(p, cfg, solver_name=label, on_subproblem=mon.on_subproblem).run
            upper = cfg.strategy in BOUNDED_STRATEGIES
            sandwich += [(p.name, *v) for v in InvariantMonitor.sandwich_violations(run, upper)]
        out.append(Check("cauchy_fraction", label, not mon.cauchy_violations,
                         f"{mon.solves} solves, {len(mon.cauchy_violations)} violations"))
        out.append(Check("sandwich", label, not sandwich,
                         f"{len(sandwich)} violations" + (f", first {sandwich[0]}" if sandwich else "")))
    return out


def verify(suite: str, problems=None) -> list[Check]:
    """Gradient, term-equivalence and per-solve invariant checks over a suite."""
    if problems is None:
        problems = list_suite(suite)
    checks = check_gradients(problems)
    checks.append(check_term_equivalence())
    checks += check_runs(problems)
    return checks


def format_checks(checks) -> str:
    width = max(len(c.subject) for c in checks)
    lines = [f"{'PASS' if c.ok else 'FAIL'}  {c.name:<17} {c.subject:<{width}}  {c.detail}"
             for c in checks]
    n_bad = sum(not c.ok for c in checks)
    lines.append(f"{len(checks) - n_bad}/{len(checks)} checks passed")
    return "\n".join(lines)
