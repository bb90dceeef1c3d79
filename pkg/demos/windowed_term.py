"""
The windowed convex term and its recursion
==========================================

The windowed term is a convex combination of the last N + 1 accepted
values.  Evaluating it directly costs O(N^2) multiplications.  The recursion
only needs the newest value, the previous term and the two values that
leave the window.  This script checks both forms on a random sequence and
shows how the weights decay.
"""

import numpy as np

from nmtr import eta_schedule, tbar_direct, tbar_recursive_step
from nmtr.nonmonotone import NonmonotoneState, tbar_weights

rng = np.random.default_rng(7)
N = 4
f = rng.uniform(-10, 10, 15)

# the eta schedule used by the roster, started from 0.45
etas = [0.45]
for k in range(1, len(f)):
    etas.append(eta_schedule(etas[-1], etas[-2] if k > 1 else None, k))
etas = np.array(etas[: len(f) - 1])
print("eta_k:", np.round(etas, 4))

# %%
# Weights for the newest window
w = tbar_weights(etas[-N:][::-1])
print("weights, newest first:", np.round(w, 4), " sum =", w.sum())

# %%
# Recursive versus direct
tbar = f[0]
print("\n k   recursive        direct")
for k in range(1, len(f)):
    if k <= N:
        tbar = tbar_recursive_step(tbar, f[k], etas[k - 1])
    else:
        xi = np.prod(etas[k - N - 1:k])
        tbar = tbar_recursive_step(tbar, f[k], etas[k - 1], xi, f[k - N], f[k - N - 1])
    lo = max(0, k - N)
    print(f"{k:2d}  {tbar:12.8f}  {tbar_direct(f[lo:k + 1], etas[lo:k]):12.8f}")

# %%
# The state object keeps all of this for the solver
state = NonmonotoneState("term1", f[0], N)
for k in range(1, len(f)):
    state.update(f[k], etas[k - 1])
print("\nstate:", state)
