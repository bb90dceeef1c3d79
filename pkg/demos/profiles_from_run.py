"""
Performance profiles from a small benchmark
===========================================

Runs the whole solver roster on the classic suite at a reduced dimension,
then turns the result matrix into Dolan-More profiles.  A profile value
rho_s(tau) is the fraction of problems that solver s finishes within a
factor tau of the best solver.
"""

import tempfile
from pathlib import Path

import numpy as np

from nmtr.experiment import ExperimentConfig, SOLVER_PRESETS, read_results_csv, run_experiment
from nmtr.profiles import profile_from_rows

out = Path(tempfile.mkdtemp(prefix="nmtr-demo-"))
cfg = ExperimentConfig(suite="classic", solvers=list(SOLVER_PRESETS), dim=30, out=str(out),
                       write_traces=False)
runs = run_experiment(cfg)
print(f"{len(runs)} runs written to {out}")

rows = read_results_csv(out / "results.csv")
for measure in ("ng", "nf", "mixed"):
    solvers, taus, rho = profile_from_rows(rows, measure)
    # rho at tau = 1 is the share of wins, at tau = 2 the share within a factor two
    at2 = np.searchsorted(taus, 2.0, side="right") - 1
    print(f"\nmeasure {measure}")
    for s, curve in zip(solvers, rho):
        print(f"  {s:8s} rho(1) = {curve[0]:.2f}   rho(2) = {curve[at2]:.2f}   rho(max) = {curve[-1]:.2f}")
