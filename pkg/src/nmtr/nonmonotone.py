"""Nonmonotone reference values ``T_k`` for the trust-region ratio.

Every strategy keeps a small running state that is advanced once per
accepted step.  ``reference()`` returns the value that replaces ``f_k`` in
the numerator of the acceptance ratio:

========== ==========================================================
monotone   ``f_k``
grippo     ``f_l(k)``, max of the last ``min(k, N) + 1`` accepted values
zhang_hager ``C_k`` with ``Q_k`` weights (fixed ``eta``)
mo         ``D_k = eta D_{k-1} + (1 - eta) f_k``
amini      ``R_k = eta f_l(k) + (1 - eta) f_k``
term1      windowed convex term ``Tbar_k`` (``max{Tbar_k, f_k}`` once k >= N)
term2      ``f_l(k)`` while k < N, then ``max{Tbar_k, f_k}``
========== ==========================================================
"""

from __future__ import annotations

import copy
from collections import deque
from typing import Sequence

import numpy as np

from .core import STRATEGIES, SolverConfig

__all__ = [
    "NonmonotoneState",
    "nm_init",
    "reference_value",
    "nm_update",
    "tbar_weights",
    "tbar_direct",
    "tbar_recursive_step",
    "eta_schedule",
]


def tbar_weights(eta_window: Sequence[float]) -> np.ndarray:
    """Convex weights of the windowed term, newest value first.

    ``eta_window`` holds ``eta_{k-1}, eta_{k-2}, ...`` oldest last, and
    the result has one more entry than ``eta_window``:
    ``(1 - eta_{k-1}), eta_{k-1}(1 - eta_{k-2}), ..., eta_{k-1}...eta_{k-L+1}``.
    """
    etas = np.asarray(eta_window, dtype=np.float64)
    prefix = np.concatenate(([1.0], np.cumprod(etas)))
    w = np.empty(len(etas) + 1)
    w[:-1] = prefix[:-1] * (1.0 - etas)
    w[-1] = prefix[-1]
    return w


def tbar_direct(f_window: Sequence[float], eta_window: Sequence[float]) -> float:
    """Evaluate the windowed term directly from its definition.

    Parameters
    ----------
    f_window : sequence of float
        Accepted values ``f_{k-L+1}, ..., f_k`` (newest last), ``L >= 1``.
    eta_window : sequence of float
        ``eta_{k-L+1}, ..., eta_{k-1}`` (newest last), length ``L - 1``.
    """
    f = np.asarray(f_window, dtype=np.float64)
    etas = np.asarray(eta_window, dtype=np.float64)
    if f.ndim != 1 or len(f) == 0:
        raise ValueError("f_window must be a non-empty 1-D sequence")
    if len(etas) != len(f) - 1:
        raise ValueError(
            f"window mismatch: {len(f)} f values need {len(f) - 1} eta values, got {len(etas)}"
        )
    w = tbar_weights(etas[::-1])
    return float(np.dot(w, f[::-1]))


def tbar_recursive_step(tbar_prev, f_new, eta_new, xi=0.0, f_out=0.0, f_out_prev=0.0):
    """Advance the windowed term by one accepted value.

    ``Tbar_k = (1 - eta_{k-1}) f_k + eta_{k-1} Tbar_{k-1} + xi_k (f_{k-N} - f_{k-N-1})``
    where ``xi_k`` is the product of the last ``N + 1`` etas.  While the
    window is still growing (``k <= N``) pass ``xi=0`` to get the plain
    two-term recursion.
    """
    return (1.0 - eta_new) * f_new + eta_new * tbar_prev + xi * (f_out - f_out_prev)


def eta_schedule(eta_prev: float, eta_prev2: float | None, k: int) -> float:
    """``eta_1 = eta_0 / 2`` and ``eta_k = (eta_{k-1} + eta_{k-2}) / 2`` for k >= 2."""
    if k < 1:
        raise ValueError("eta_schedule is defined for k >= 1")
    if k == 1:
        return eta_prev / 2.0
    return (eta_prev + eta_prev2) / 2.0


class NonmonotoneState:
    """Running state of one nonmonotone strategy over accepted steps."""

    def __init__(self, strategy: str, f0: float, window_N: int = 10):
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}")
        if window_N < 1:
            raise ValueError("window_N must be >= 1")
        f0 = float(f0)
        self.strategy = strategy
        self.N = int(window_N)
        self.k = 0
        # one extra slot so f_{k-N-1} is still around for the recursion
        self._f_hist = deque([f0], maxlen=self.N + 2)
        self.eta_window = deque(maxlen=self.N + 1)
        self.tbar = f0
        self.xi = 0.0
        self.C = f0
        self.Q = 1.0
        self.D = f0
        self.R = f0
        self.flk = f0

    @property
    def f_window(self) -> list:
        """Last ``min(k + 1, N + 1)`` accepted values, newest last."""
        return list(self._f_hist)[-(self.N + 1):]

    @property
    def f_last(self) -> float:
        return self._f_hist[-1]

    def window_max(self) -> float:
        """``f_l(k)`` recomputed from the raw history, m(k) = min(k, N)."""
        m = min(self.k, self.N)
        return max(list(self._f_hist)[-(m + 1):])

    def reference(self) -> float:
        s = self.strategy
        fk = self.f_last
        if s == "monotone":
            return fk
        if s == "grippo":
            return self.flk
        if s == "zhang_hager":
            return self.C
        if s == "mo":
            return self.D
        if s == "amini":
            return self.R
        if self.k >= self.N:
            return max(self.tbar, fk)
        if s == "term1":
            return self.tbar
        return self.flk

    def update(self, f_next: float, eta_next: float = 0.0) -> "NonmonotoneState":
        """Absorb the value of a newly accepted iterate (in place)."""
        if not 0.0 <= eta_next < 1.0:
            raise ValueError(f"eta must lie in [0, 1), got {eta_next!r}")
        f_next = float(f_next)
        eta = float(eta_next)
        self.k += 1
        self._f_hist.append(f_next)
        self.eta_window.append(eta)
        self.flk = self.window_max()

        if self.k <= self.N:
            self.xi = 0.0
            self.tbar = tbar_recursive_step(self.tbar, f_next, eta)
        else:
            # fresh product each step; the division update breaks on eta = 0
            self.xi = float(np.prod(self.eta_window))
            self.tbar = tbar_recursive_step(
                self.tbar, f_next, eta, self.xi, self._f_hist[1], self._f_hist[0]
            )

        q_new = eta * self.Q + 1.0
        self.C = (eta * self.Q * self.C + f_next) / q_new
        self.Q = q_new
        self.D = eta * self.D + (1.0 - eta) * f_next
        self.R = eta * self.flk + (1.0 - eta) * f_next
        return self

    def copy(self) -> "NonmonotoneState":
        return copy.deepcopy(self)

    def __repr__(self):
        return (
            f"NonmonotoneState({self.strategy!r}, k={self.k}, N={self.N}, "
            f"T={self.reference():.6g}, flk={self.flk:.6g})"
        )


def nm_init(strategy: str, f0: float, cfg: SolverConfig | None = None) -> NonmonotoneState:
    N = cfg.window_N if cfg is not None else 10
    return NonmonotoneState(strategy, f0, N)


def reference_value(state: NonmonotoneState) -> float:
    return state.reference()


def nm_update(state: NonmonotoneState, f_next: float, eta_next: float) -> NonmonotoneState:
    """Return a new state advanced by one accepted value; ``state`` is untouched."""
    return state.copy().update(f_next, eta_next)
