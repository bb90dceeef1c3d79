"""Monotone and nonmonotone trust-region driver."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import IterateRecord, NumericFailure, Problem, RunRecord, SolverConfig, validate_config
from .hessian import HessianApprox
from .nonmonotone import NonmonotoneState, eta_schedule
from .subproblem import SubproblemResult, steihaug_solve

log = logging.getLogger(__name__)

TRACE_FIELDS = ("k", "f", "grad_norm", "delta", "T", "ratio", "accepted")


@dataclass
class SolverOutcome:
    run: RunRecord
    x_final: np.ndarray


def ratio(reference_T: float, f_trial: float, pred: float) -> float:
    """Acceptance ratio ``(T - f_trial) / pred``; ``T = f_k`` gives the monotone ratio."""
    if not pred > 0.0:
        raise ValueError(f"predicted reduction must be positive, got {pred!r}")
    return (reference_T - f_trial) / pred


def update_radius(rule: str, delta: float, d_norm: float, r_hat: float, cfg: SolverConfig) -> float:
    """Next trust radius after a trial with ratio ``r_hat``.

    ``step_based``: ``c1 ||d||`` on rejection, unchanged for
    ``mu1 <= r < mu2``, ``max(delta, c2 ||d||)`` when ``r >= mu2``.
    ``classic``: ``rho1 delta`` on rejection, ``rho2 delta`` when ``r >= mu2``.
    """
    if rule == "step_based":
        if r_hat < cfg.mu1:
            return cfg.c1 * d_norm
        if r_hat < cfg.mu2:
            return delta
        return max(delta, cfg.c2 * d_norm)
    if rule == "classic":
        if r_hat < cfg.mu1:
            return cfg.rho1 * delta
        if r_hat < cfg.mu2:
            return delta
        return cfg.rho2 * delta
    raise ValueError(f"unknown radius rule {rule!r}")


def _eta_for(cfg: SolverConfig) -> Optional[float]:
    if cfg.strategy == "zhang_hager":
        return 0.85 if cfg.eta_fixed is None else cfg.eta_fixed
    return cfg.eta_fixed


SubproblemCallback = Callable[[np.ndarray, HessianApprox, float, SubproblemResult], None]


def minimize(problem: Problem, cfg: SolverConfig = SolverConfig(), *,
             solver_name: Optional[str] = None, B0=None,
             on_subproblem: Optional[SubproblemCallback] = None) -> SolverOutcome:
    """Minimize ``problem`` with the trust-region method selected by ``cfg``.

    ``cfg.strategy="monotone"`` is the classical method; any other strategy
    replaces ``f_k`` in the acceptance ratio by the strategy's reference
    value.  The nonmonotone state and ``eta`` only advance on accepted steps,
    so every re-solve inside one inner cycle sees the same ``T_k``.

    ``on_subproblem(g, H, delta, result)`` is called after every
    subproblem solve; it is meant for diagnostics and must not mutate its
    arguments.

    Counting: ``n_feval`` counts every objective call, start point and
    rejected trials included; ``n_geval = n_iter + 1``.
    """
    validate_config(cfg)
    name = solver_name or cfg.strategy
    nf = ng = 0

    def F(z):
        nonlocal nf
        nf += 1
        return float(problem.eval_f(z))

    def G(z):
        nonlocal ng
        ng += 1
        return np.asarray(problem.eval_grad(z), dtype=np.float64)

    x = np.array(problem.x0, dtype=np.float64)
    f = F(x)
    g = G(x)
    trace = []

    def finish(status):
        run = RunRecord(
            problem_name=problem.name, solver_name=name, n_iter=k, n_feval=nf,
            n_geval=ng, final_f=f, final_grad_norm=gnorm, status=status, trace=trace,
        )
        return SolverOutcome(run=run, x_final=x)

    k = 0
    gnorm = float(np.linalg.norm(g))
    if not (math.isfinite(f) and math.isfinite(gnorm)):
        return finish("numeric_failure")

    H = HessianApprox(problem.dim, B0)
    state = NonmonotoneState(cfg.strategy, f, cfg.window_N)
    fixed_eta = _eta_for(cfg)
    eta_cur, eta_prev = cfg.eta0, None
    delta = cfg.delta0_scale * gnorm

    while gnorm >= cfg.epsilon:
        if k >= cfg.k_max:
            return finish("max_iter")
        T = state.reference()
        flk = state.flk
        delta_min = 1e-14 * max(1.0, float(np.linalg.norm(x)))
        shrinks = 0
        while True:
            try:
                res = steihaug_solve(g, H.matvec, delta, gnorm)
            except NumericFailure:
                log.debug("%s/%s: subproblem failure at k=%d", problem.name, name, k)
                return finish("numeric_failure")
            if on_subproblem is not None:
                on_subproblem(g, H, delta, res)
            d_norm = float(np.linalg.norm(res.d))
            if not res.pred > 0.0:
                return finish("subproblem_failure")
            x_trial = x + res.d
            f_trial = F(x_trial)
            r_hat = ratio(T, f_trial, res.pred) if math.isfinite(f_trial) else -math.inf
            accepted = r_hat >= cfg.mu1
            trace.append(IterateRecord(
                k=k, x=x, f=f, grad_norm=gnorm, delta=delta, T=T, flk=flk,
                ratio=r_hat, accepted=accepted, f_trial=f_trial, pred=res.pred,
                step_norm=d_norm,
            ))
            if accepted:
                break
            shrinks += 1
            delta = update_radius(cfg.radius_rule, delta, d_norm, r_hat, cfg)
            if shrinks > cfg.max_inner or delta < delta_min:
                log.debug("%s/%s: inner cycle stalled at k=%d", problem.name, name, k)
                return finish("numeric_failure")

        g_trial = G(x_trial)
        if not np.all(np.isfinite(g_trial)):
            return finish("numeric_failure")
        delta = update_radius(cfg.radius_rule, delta, d_norm, r_hat, cfg)
        try:
            H.bfgs_update(x_trial - x, g_trial - g)
        except NumericFailure:
            return finish("numeric_failure")
        x, f, g = x_trial, f_trial, g_trial
        gnorm = float(np.linalg.norm(g))
        k += 1

        eta = fixed_eta if fixed_eta is not None else eta_cur
        state.update(f, eta)
        eta_next = eta_schedule(eta_cur, eta_prev, k)
        eta_prev, eta_cur = eta_cur, eta_next

    return finish("converged")


def write_trace_csv(run: RunRecord, path) -> None:
    """One line per trial: ``k,f,grad_norm,delta,T,ratio,accepted``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_FIELDS)
        for rec in run.trace:
            w.writerow([rec.k, repr(rec.f), repr(rec.grad_norm), repr(rec.delta),
                        repr(rec.T), repr(rec.ratio), int(rec.accepted)])
