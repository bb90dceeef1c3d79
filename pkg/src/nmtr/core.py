"""Shared types: problems, solver configuration and run records."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

STRATEGIES = ("monotone", "grippo", "zhang_hager", "mo", "amini", "term1", "term2")
RADIUS_RULES = ("classic", "step_based")
STATUSES = ("converged", "max_iter", "subproblem_failure", "numeric_failure")


class ConfigError(ValueError):
    """Raised when a configuration violates one of its constraints."""


class NumericFailure(ArithmeticError):
    """Raised when a non-finite value shows up where it cannot be recovered."""


@dataclass(frozen=True, eq=False)
class Problem:
    """Smooth unconstrained test problem ``min f(x)``.

    ``eval_f`` and ``eval_grad`` must be pure functions of ``x``.
    ``f_star`` / ``x_star`` are only used by tests and may be ``None``.
    """

    name: str
    dim: int
    eval_f: Callable[[np.ndarray], float]
    eval_grad: Callable[[np.ndarray], np.ndarray]
    x0: np.ndarray
    f_star: Optional[float] = None
    x_star: Optional[np.ndarray] = None

    def __post_init__(self):
        x0 = np.array(self.x0, dtype=np.float64)
        x0.setflags(write=False)
        object.__setattr__(self, "x0", x0)
        if self.x_star is not None:
            xs = np.array(self.x_star, dtype=np.float64)
            xs.setflags(write=False)
            object.__setattr__(self, "x_star", xs)
        if x0.shape != (self.dim,):
            raise ValueError(f"{self.name}: x0 has shape {x0.shape}, expected ({self.dim},)")


@dataclass(frozen=True)
class SolverConfig:
    """Scalar knobs of the trust-region driver.

    Defaults are the experimental setting: ``mu1=0.05, mu2=0.9, c1=0.25,
    c2=2.5``, ``delta0 = 0.1 * ||g0||``, ``epsilon=1e-5``, window ``N=10``.
    ``rho1``/``rho2`` only matter for ``radius_rule="classic"``.
    """

    mu1: float = 0.05
    mu2: float = 0.9
    rho1: float = 0.25
    rho2: float = 2.5
    c1: float = 0.25
    c2: float = 2.5
    epsilon: float = 1e-5
    k_max: int = 10000
    window_N: int = 10
    eta0: float = 0.25
    eta_fixed: Optional[float] = None
    strategy: str = "monotone"
    radius_rule: str = "step_based"
    delta0_scale: float = 0.1
    cauchy_fraction_check: float = 0.5
    max_inner: int = 60

    def replace(self, **changes) -> "SolverConfig":
        return dataclasses.replace(self, **changes)


def validate_config(cfg: SolverConfig) -> SolverConfig:
    """Return ``cfg`` unchanged, or raise :class:`ConfigError` naming the first
    violated constraint."""
    checks = [
        (cfg.mu1 > 0, "mu1 must be > 0"),
        (cfg.mu1 <= 1, "mu1 must be <= 1"),
        (cfg.mu2 >= cfg.mu1, "mu2 >= mu1 required"),
        (cfg.mu2 <= 1, "mu2 must be <= 1"),
        (cfg.rho1 > 0, "rho1 must be > 0"),
        (cfg.rho1 <= 1, "rho1 must be <= 1"),
        (cfg.rho2 >= 1, "rho2 must be >= 1"),
        (0 < cfg.c1 < 1, "c1 must lie in (0, 1)"),
        (cfg.c2 > 1, "c2 must be > 1"),
        (cfg.epsilon > 0, "epsilon must be > 0"),
        (cfg.k_max >= 0, "k_max must be >= 0"),
        (int(cfg.window_N) == cfg.window_N and cfg.window_N >= 1, "window_N must be an integer >= 1"),
        (0 <= cfg.eta0 < 1, "eta0 must lie in [0, 1)"),
        (cfg.eta_fixed is None or 0 <= cfg.eta_fixed < 1, "eta_fixed must lie in [0, 1)"),
        (cfg.strategy in STRATEGIES, f"strategy must be one of {STRATEGIES}"),
        (cfg.radius_rule in RADIUS_RULES, f"radius_rule must be one of {RADIUS_RULES}"),
        (cfg.delta0_scale > 0, "delta0_scale must be > 0"),
        (0 < cfg.cauchy_fraction_check < 1, "cauchy_fraction_check must lie in (0, 1)"),
        (cfg.max_inner >= 1, "max_inner must be >= 1"),
    ]
    for ok, message in checks:
        if not ok:
            raise ConfigError(message)
    return cfg


@dataclass(frozen=True, slots=True)
class IterateRecord:
    """One trial step of the outer/inner cycle.

    ``x``, ``f``, ``grad_norm``, ``T`` and ``flk`` describe the current iterate
    ``x_k``; ``delta``, ``ratio``, ``f_trial``, ``pred`` and ``step_norm``
    describe the trial ``x_k + d``. Rejected trials are kept in the trace.
    """

    k: int
    x: np.ndarray
    f: float
    grad_norm: float
    delta: float
    T: float
    flk: float
    ratio: float
    accepted: bool
    f_trial: float
    pred: float
    step_norm: float


@dataclass
class RunRecord:
    problem_name: str
    solver_name: str
    n_iter: int
    n_feval: int
    n_geval: int
    final_f: float
    final_grad_norm: float
    status: str
    trace: list = field(default_factory=list, repr=False)

    @property
    def converged(self) -> bool:
        return self.status == "converged"
