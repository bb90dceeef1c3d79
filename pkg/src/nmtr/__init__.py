"""Monotone and nonmonotone trust-region methods for unconstrained minimization."""

from .core import (
    ConfigError,
    IterateRecord,
    NumericFailure,
    Problem,
    RunRecord,
    SolverConfig,
    validate_config,
)
from .hessian import HessianApprox
from .nonmonotone import NonmonotoneState, eta_schedule, tbar_direct, tbar_recursive_step
from .problems import get_problem, list_suite
from .profiles import ProfileMatrix, mixed_measure, performance_ratios, profile_curve
from .solver import SolverOutcome, minimize, ratio, update_radius
from .subproblem import SubproblemResult, boundary_tau, steihaug_solve

__version__ = "0.1.0"
