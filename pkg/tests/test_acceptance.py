"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

The lines are printed as the tests run (visible with ``-s``) and again in
the terminal summary under "acceptance criteria".  Run on its own with::

    python -m pytest tests/test_acceptance.py
"""

import sys
import time
import warnings

import numpy as np
import pytest

from nmtr import ProfileMatrix, SolverConfig, get_problem, list_suite, minimize
from nmtr import performance_ratios, profile_curve
from nmtr.cli import main
from nmtr.experiment import (
    SOLVER_PRESETS,
    InvariantMonitor,
    check_term_equivalence,
    solver_config,
)
from nmtr.problems import SUITES, check_gradient
from nmtr.profiles import default_taus
from nmtr.solver import write_trace_csv
from test_profiles import brute_ratios, brute_rho

NMTR_LABELS = [label for label in SOLVER_PRESETS if label != "ttr"]

# reference (N_g, N_f) counts for the three valley problems
REFERENCE_COUNTS = {
    ("NCR", "ttr"): (32, 41), ("NCR", "nmtr-1"): (27, 34), ("NCR", "nmtr-2"): (22, 29),
    ("MARATOS", "ttr"): (31, 40), ("MARATOS", "nmtr-1"): (24, 29), ("MARATOS", "nmtr-2"): (22, 29),
    ("NONDIA", "ttr"): (24, 34), ("NONDIA", "nmtr-1"): (27, 34), ("NONDIA", "nmtr-2"): (11, 17),
}


@pytest.fixture(scope="module")
def roster_runs():
    """Every roster solver on table1 + classic with per-solve monitoring."""
    problems = list_suite("table1") + list_suite("classic")
    runs, monitors = {}, {}
    t0 = time.perf_counter()
    for label in SOLVER_PRESETS:
        cfg = solver_config(label)
        mon = InvariantMonitor(0.5)
        for p in problems:
            runs[p.name, label] = minimize(p, cfg, solver_name=label, on_subproblem=mon.on_subproblem).run
        monitors[label] = mon
    return runs, monitors, time.perf_counter() - t0


def test_c01_gradient_oracles(report):
    t0 = time.perf_counter()
    errs = {name: check_gradient(get_problem(name)) for name in SUITES["all"]}
    elapsed = time.perf_counter() - t0
    bad = {k: v for k, v in errs.items() if not v <= 1e-6}
    ok = not bad and elapsed < 10.0
    report(1, "gradient oracle suite", ok,
           f"{len(errs)} problems, worst {max(errs.values()):.1e}, {elapsed:.2f} s, failing {sorted(bad)}")
    assert ok


def test_c02_term_equivalence(report):
    t0 = time.perf_counter()
    check = check_term_equivalence(1000, seed=0)
    elapsed = time.perf_counter() - t0
    ok = check.ok and elapsed < 1.0
    report(2, "windowed term direct vs recursive", ok, f"{check.detail}, {elapsed:.2f} s")
    assert ok


def test_c03_sandwich(roster_runs, report):
    runs, _, _ = roster_runs
    counts = {}
    for label in NMTR_LABELS:
        counts[label] = sum(len(InvariantMonitor.sandwich_violations(runs[p, label], upper=True))
                            for p in SUITES["all"])
    ok = not any(counts.values())
    report(3, "f <= T <= f_l(k) and nonincreasing f_l(k)", ok,
           ", ".join(f"{k} {v}" for k, v in counts.items()) + " violations")
    assert ok


def test_c04_cauchy_fraction(roster_runs, report):
    _, monitors, _ = roster_runs
    solves = sum(m.solves for m in monitors.values())
    bad = {k: len(m.cauchy_violations) for k, m in monitors.items() if m.cauchy_violations}
    ok = not bad
    report(4, "Cauchy fraction on every subproblem solve", ok, f"{solves} solves, violations {bad or 0}")
    assert ok


def _trace_bytes(run, path):
    write_trace_csv(run, path)
    return path.read_bytes()


def test_c05_zero_eta_equivalence(tmp_path, report):
    mismatched = []
    for p in list_suite("table1"):
        base = _trace_bytes(minimize(p, solver_config("ttr")).run, tmp_path / "ttr.csv")
        for label in ("nmtr-1", "nmtr-2"):
            run = minimize(p, solver_config(label, eta0=0.0)).run
            if _trace_bytes(run, tmp_path / f"{label}.csv") != base:
                mismatched.append(f"{p.name}/{label}")
    ok = not mismatched
    report(5, "eta = 0 traces equal the monotone traces", ok, f"mismatched {mismatched}")
    assert ok


def test_c06_valley_counts_band(report):
    t0 = time.perf_counter()
    counts, problems = {}, []
    for p in list_suite("table1"):
        for label in ("ttr", "nmtr-1", "nmtr-2"):
            run = minimize(p, solver_config(label), solver_name=label).run
            counts[p.name, label] = (run.n_geval, run.n_feval, run.converged)
    elapsed = time.perf_counter() - t0
    problems = []
    for key, (ng, nf, conv) in counts.items():
        if not conv:
            problems.append(f"{key} not converged")
        ref_g, ref_f = REFERENCE_COUNTS[key]
        for got, ref, tag in ((ng, ref_g, "N_g"), (nf, ref_f, "N_f")):
            if abs(got - ref) > 0.5 * ref:
                problems.append(f"{key[0]}/{key[1]} {tag} {got} vs {ref}")
    for name in ("NCR", "MARATOS"):
        if not counts[name, "nmtr-2"][0] < counts[name, "ttr"][0]:
            problems.append(f"{name}: N_g nmtr-2 {counts[name, 'nmtr-2'][0]} "
                            f"not below ttr {counts[name, 'ttr'][0]}")
    if elapsed >= 5.0:
        problems.append(f"runtime {elapsed:.1f} s")
    table = " ".join(f"{k[0]}/{k[1]}={v[0]}/{v[1]}" for k, v in counts.items())
    ok = not problems
    report(6, "valley-problem counts within +-50% and ordering", ok,
           f"{table}; issues: {problems or 'none'}")
    assert ok


def test_c07_example_one(report):
    run = minimize(get_problem("NCR", start="alternate"), solver_config("ttr")).run
    ok = run.converged and run.final_grad_norm < 1e-5 and abs(run.n_iter - 22) <= 11
    report(7, "monotone run from the second NCR start", ok,
           f"{run.n_iter} iterations, {run.n_feval} f-evals, |g| {run.final_grad_norm:.1e}")
    assert ok


def test_c08_classic_robustness(roster_runs, report):
    runs, _, elapsed = roster_runs
    classic = SUITES["classic"]
    rates = {label: sum(runs[p, label].converged for p in classic) / len(classic) for label in SOLVER_PRESETS}
    dims = max(get_problem(p).dim for p in classic)
    ok = all(r >= 0.9 for r in rates.values()) and len(classic) >= 20 and dims <= 200 and elapsed < 300
    report(8, "classic suite convergence rate >= 90%", ok,
           ", ".join(f"{k} {v:.0%}" for k, v in rates.items()) + f"; max n {dims}; {elapsed:.0f} s")
    assert ok


def test_c09_profile_oracle(report):
    issues = []
    m = ProfileMatrix(["a", "b"], ["s1", "s2"], [[1, 2], [4, 2]], np.zeros((2, 2), bool))
    r, _, _ = performance_ratios(m)
    if not np.array_equal(r, [[1, 2], [2, 1]]):
        issues.append("2x2 ratios")
    if not np.array_equal(profile_curve(r, [1.0, 2.0]), [[0.5, 1.0], [0.5, 1.0]]):
        issues.append("2x2 rho")
    for seed in range(20):
        rng = np.random.default_rng(1000 + seed)
        t = rng.integers(1, 500, size=(10, 4)).astype(float)
        failed = rng.random((10, 4)) < 0.25
        t[failed] = np.nan
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            r, r_failed, _ = performance_ratios(ProfileMatrix(list(range(10)), list("abcd"), t, failed))
        ref_r, ref_sentinel = brute_ratios(t, failed)
        taus = default_taus(r_failed)
        if r_failed != ref_sentinel or not np.array_equal(r, np.array(ref_r)):
            issues.append(f"ratios seed {seed}")
        elif not np.array_equal(profile_curve(r, taus), np.array(brute_rho(ref_r, taus))):
            issues.append(f"rho seed {seed}")
    ok = not issues
    report(9, "profile ratios and curves vs brute force", ok, f"21 matrices, issues {issues or 'none'}")
    assert ok


def test_c10_determinism(tmp_path, report):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"suite": "table1", "solvers": ["ttr", "nmtr-g", "nmtr-h", "nmtr-n", '
                   '"nmtr-m", "nmtr-1", "nmtr-2"], "write_traces": false}')
    codes = [main(["run", "--config", str(cfg), "--out", str(tmp_path / d)]) for d in ("a", "b")]
    a = (tmp_path / "a" / "results.csv").read_bytes()
    b = (tmp_path / "b" / "results.csv").read_bytes()
    ok = codes == [0, 0] and a == b
    report(10, "byte-identical results.csv across runs", ok, f"{len(a)} bytes, exit codes {codes}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
