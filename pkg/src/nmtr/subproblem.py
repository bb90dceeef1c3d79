"""Steihaug-Toint truncated CG for the trust-region subproblem

    minimize  g'd + 1/2 d'Bd   subject to  ||d||_2 <= delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import NumericFailure

EXITS = ("small_residual", "boundary", "negative_curvature", "max_cg")


@dataclass(frozen=True)
class SubproblemResult:
    d: np.ndarray
    pred: float
    hit_boundary: bool
    cg_iters: int
    exit: str


def boundary_tau(p, d, delta):
    """Return the nonnegative ``tau`` with ``||p + tau d|| = delta``.

    ``p`` must lie inside the ball; the larger root of the quadratic is
    returned.
    """
    p = np.asarray(p, dtype=np.float64)
    d = np.asarray(d, dtype=np.float64)
    a = float(np.dot(d, d))
    if not a > 0.0 or not math.isfinite(a):
        raise ValueError("direction must be nonzero and finite")
    b = float(np.dot(p, d))
    c = float(np.dot(p, p)) - delta * delta
    # c <= 0 for interior p; clamp roundoff so the root stays real
    c = min(c, 0.0)
    disc = math.sqrt(b * b - a * c)
    # larger root of a t^2 + 2 b t + c, written without cancellation
    if b >= 0.0:
        return -c / (b + disc) if b + disc > 0.0 else 0.0
    return (disc - b) / a


def steihaug_solve(g, matvec: Callable[[np.ndarray], np.ndarray], delta: float,
                   gnorm0: float | None = None, max_iter: int | None = None,
                   tol: float | None = None, callback=None) -> SubproblemResult:
    """Approximately minimize the quadratic model inside the trust region.

    Parameters
    ----------
    g : ndarray
        Model gradient at ``d = 0``; must be nonzero.
    matvec : callable
        ``v -> B v`` for the (symmetric) model matrix.
    delta : float
        Trust-region radius.
    gnorm0 : float, optional
        ``||g_k||`` for the inexactness test
        ``||r|| <= min(0.1, sqrt(||g_k||)) ||g_k||``.  Defaults to ``||g||``.
    max_iter : int, optional
        CG iteration cap, ``n + 10`` by default.
    tol : float, optional
        Absolute residual tolerance replacing the rule above.
    callback : callable, optional
        Called with every CG iterate (including the final one).

    Returns
    -------
    SubproblemResult
        ``pred`` is ``q(0) - q(d) = -(g'd + d'Bd / 2)``.

    Raises
    ------
    NumericFailure
        If ``matvec`` produces non-finite values.
    """
    g = np.asarray(g, dtype=np.float64)
    n = g.shape[0]
    gnorm = float(np.linalg.norm(g)) if gnorm0 is None else float(gnorm0)
    if not gnorm > 0.0:
        raise ValueError("steihaug_solve needs a nonzero gradient")
    if max_iter is None:
        max_iter = n + 10
    if tol is None:
        tol = min(0.1, math.sqrt(gnorm)) * gnorm

    z = np.zeros(n)
    r = g.copy()
    p = -r
    rr = float(np.dot(r, r))
    exit_ = "max_cg"
    it = 0
    while it < max_iter:
        it += 1
        Bp = matvec(p)
        if not np.all(np.isfinite(Bp)):
            raise NumericFailure("non-finite model matrix product in CG")
        pBp = float(np.dot(p, Bp))
        if pBp <= 0.0:
            z = z + boundary_tau(z, p, delta) * p
            exit_ = "negative_curvature"
            break
        alpha = rr / pBp
        z_next = z + alpha * p
        if np.linalg.norm(z_next) >= delta:
            z = z + boundary_tau(z, p, delta) * p
            exit_ = "boundary"
            break
        z = z_next
        if callback is not None:
            callback(z)
        r = r + alpha * Bp
        rr_next = float(np.dot(r, r))
        if math.sqrt(rr_next) <= tol:
            exit_ = "small_residual"
            break
        p = -r + (rr_next / rr) * p
        rr = rr_next

    if callback is not None and exit_ in ("boundary", "negative_curvature"):
        callback(z)
    Bz = matvec(z)
    if not np.all(np.isfinite(Bz)):
        raise NumericFailure("non-finite model matrix product in CG")
    pred = -(float(np.dot(g, z)) + 0.5 * float(np.dot(z, Bz)))
    return SubproblemResult(
        d=z,
        pred=pred,
        hit_boundary=exit_ in ("boundary", "negative_curvature"),
        cg_iters=it,
        exit=exit_,
    )


def cauchy_bound(gnorm: float, delta: float, B_norm: float, beta: float = 0.5) -> float:
    """Sufficient-reduction threshold ``beta ||g|| min(delta, ||g|| / ||B||)``."""
    if B_norm <= 0.0:
        return beta * gnorm * delta
    return beta * gnorm * min(delta, gnorm / B_norm)
