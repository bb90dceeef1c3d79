"""
Monotone versus nonmonotone acceptance in a curved valley
=========================================================

The Nesterov-Chebyshev-Rosenbrock function has a narrow parabolic valley.
A monotone trust-region method must keep every step downhill, so it creeps
along the valley floor.  A nonmonotone reference value lets the method accept
a step that goes slightly uphill, as long as it beats a weighted mix of recent
values.

Run with ``python demos/valley_comparison.py``.
"""

import numpy as np

from nmtr import get_problem, minimize
from nmtr.experiment import SOLVER_PRESETS, solver_config

# the problem and both customary starting points
for start in ("standard", "alternate"):
    problem = get_problem("NCR", start=start)
    print(f"\nNCR from {tuple(problem.x0)}")
    print(f"{'solver':8s} {'N_g':>4s} {'N_f':>4s} {'uphill':>7s} {'final f':>10s}")
    for label in SOLVER_PRESETS:
        run = minimize(problem, solver_config(label), solver_name=label).run
        accepted = [r for r in run.trace if r.accepted]
        # an accepted step is "uphill" when the new value exceeds the old one
        uphill = sum(r.f_trial > r.f for r in accepted)
        print(f"{label:8s} {run.n_geval:4d} {run.n_feval:4d} {uphill:7d} {run.final_f:10.2e}")

# %%
# Watching the reference value
# ----------------------------
# For the second nonmonotone term the reference stays at the running window
# maximum during the first N accepted steps, then switches to the convex
# combination.  The gap ``T_k - f_k`` is the slack the method is allowed.

run = minimize(get_problem("NCR"), solver_config("nmtr-2")).run
print("\n k      f_k          T_k        T_k - f_k")
for rec in run.trace:
    if rec.accepted:
        print(f"{rec.k:2d}  {rec.f:11.4e}  {rec.T:11.4e}  {rec.T - rec.f:10.3e}")

xs = np.array([rec.x for rec in run.trace if rec.accepted])
print(f"\npath length {np.sum(np.linalg.norm(np.diff(xs, axis=0), axis=1)):.3f}")
