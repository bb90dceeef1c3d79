"""Dolan-More performance profiles over a problem x solver result matrix."""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MEASURES = ("ng", "nf", "mixed")


def mixed_measure(nf, ng):
    """Cost measure ``N_f + 3 N_g`` (one gradient ~ three function values)."""
    if nf < 0 or ng < 0:
        raise ValueError("counts must be nonnegative")
    return nf + 3 * ng


def measure_value(measure: str, nf, ng):
    if measure == "ng":
        return ng
    if measure == "nf":
        return nf
    if measure == "mixed":
        return mixed_measure(nf, ng)
    raise ValueError(f"unknown measure {measure!r}, choose from {MEASURES}")


@dataclass
class ProfileMatrix:
    """Performance measures ``t[p, s]`` with a failure mask."""

    problems: list
    solvers: list
    t: np.ndarray
    failed: np.ndarray

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=np.float64)
        self.failed = np.asarray(self.failed, dtype=bool)
        shape = (len(self.problems), len(self.solvers))
        if self.t.shape != shape or self.failed.shape != shape:
            raise ValueError(f"t and failed must have shape {shape}")
        ok = ~self.failed
        if np.any(~np.isfinite(self.t[ok])) or np.any(self.t[ok] <= 0):
            raise ValueError("measures of successful runs must be finite and > 0")

    @classmethod
    def from_rows(cls, rows: Iterable[dict], measure: str = "ng") -> "ProfileMatrix":
        """Build from result rows with keys ``problem, solver, ng, nf, status``.

        Row order fixes problem/solver order (first appearance wins).
        """
        rows = list(rows)
        problems = list(dict.fromkeys(r["problem"] for r in rows))
        solvers = list(dict.fromkeys(r["solver"] for r in rows))
        t = np.full((len(problems), len(solvers)), np.nan)
        failed = np.ones_like(t, dtype=bool)
        pi = {p: i for i, p in enumerate(problems)}
        si = {s: j for j, s in enumerate(solvers)}
        for r in rows:
            i, j = pi[r["problem"]], si[r["solver"]]
            t[i, j] = measure_value(measure, int(r["nf"]), int(r["ng"]))
            failed[i, j] = r["status"] != "converged"
        return cls(problems, solvers, t, failed)


def performance_ratios(m: ProfileMatrix):
    """Ratios ``r[p, s] = t[p, s] / min_s t[p, s]``.

    Failed runs get the sentinel ``r_failed = max(2 * max finite ratio, 1e6)``.
    Problems that every solver failed are dropped with a warning.

    Returns
    -------
    r : ndarray, shape (n_kept, n_solvers)
    r_failed : float
    kept : list
        Names of the problems that were kept, in order.
    """
    ok = ~m.failed
    solved_any = ok.any(axis=1)
    if not solved_any.all():
        dropped = [p for p, s in zip(m.problems, solved_any) if not s]
        warnings.warn(f"problems failed by every solver are excluded: {dropped}", stacklevel=2)
    t = m.t[solved_any]
    ok = ok[solved_any]
    best = np.where(ok, t, np.inf).min(axis=1, initial=np.inf)
    r = np.full(t.shape, np.nan)
    r[ok] = (t / best[:, None])[ok]
    max_ratio = float(r[ok].max()) if ok.any() else 1.0
    r_failed = max(2.0 * max_ratio, 1e6)
    r[~ok] = r_failed
    kept = [p for p, s in zip(m.problems, solved_any) if s]
    return r, r_failed, kept


def default_taus(r_failed: float, num: int = 200) -> np.ndarray:
    """Geometric grid from 1 to ``r_failed / 2``."""
    return np.geomspace(1.0, r_failed / 2.0, num)


def profile_curve(r, taus) -> np.ndarray:
    """``rho[s, i]``: fraction of problems with ``r[p, s] <= taus[i]``.

    The denominator is the number of rows in ``r``, so a solver that fails
    some problems plateaus below 1.
    """
    r = np.asarray(r, dtype=np.float64)
    taus = np.asarray(taus, dtype=np.float64)
    if taus.size == 0:
        raise ValueError("empty tau grid")
    if np.any(np.diff(taus) < 0) or taus[0] < 1:
        raise ValueError("taus must be sorted and start at >= 1")
    n_p = r.shape[0]
    if n_p == 0:
        return np.zeros((r.shape[1], taus.size))
    # sort each column once, then count with searchsorted (side="right" -> <=)
    cols = np.sort(r, axis=0)
    counts = np.stack([np.searchsorted(cols[:, s], taus, side="right") for s in range(r.shape[1])])
    return counts / n_p


def write_profile_csv(dest, solvers: Sequence[str], taus, rho) -> None:
    """Write ``solver,tau,rho`` rows to a path or an open text file."""
    if hasattr(dest, "write"):
        _write_profile(dest, solvers, taus, rho)
        return
    with open(dest, "w", newline="") as fh:
        _write_profile(fh, solvers, taus, rho)


def _write_profile(fh, solvers, taus, rho):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["solver", "tau", "rho"])
    for j, s in enumerate(solvers):
        for tau, val in zip(taus, rho[j]):
            w.writerow([s, repr(float(tau)), repr(float(val))])


def profile_from_rows(rows, measure: str, num: int = 200):
    """Convenience pipeline: rows -> (solvers, taus, rho)."""
    m = ProfileMatrix.from_rows(rows, measure)
    r, r_failed, _ = performance_ratios(m)
    taus = default_taus(r_failed, num)
    return m.solvers, taus, profile_curve(r, taus)
