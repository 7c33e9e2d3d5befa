"""Asymptotic multiuser efficiency of pseudo-orthogonal randomly spread CDMA.

The analytic side (:mod:`pocdma.saddle`, :mod:`pocdma.efficiency`) solves the
large-system fixed-point equations; :mod:`pocdma.oracle` counts admissible
codewords exactly on finite random instances; :mod:`pocdma.link` simulates a
small link over AWGN.
"""

__version__ = "0.1.0"

from .efficiency import (  # noqa: E402
    AmeCurvePoint,
    EntropyResult,
    ame,
    ame_direct,
    comparison_ame,
    entropy,
    evaluate,
    optimize_gamma,
    sweep_beta,
)
from .errors import CapacityError, DomainError, NotConvergedError, PreconditionError  # noqa: E402
from .saddle import SaddleSolution, SystemPoint, saddle_residuals, solve_multistart, solve_saddle  # noqa: E402
from .tail import hazard_ratio, log_two_q, q_function  # noqa: E402

__all__ = [
    "AmeCurvePoint",
    "CapacityError",
    "DomainError",
    "EntropyResult",
    "NotConvergedError",
    "PreconditionError",
    "SaddleSolution",
    "SystemPoint",
    "ame",
    "ame_direct",
    "comparison_ame",
    "entropy",
    "evaluate",
    "hazard_ratio",
    "log_two_q",
    "optimize_gamma",
    "q_function",
    "saddle_residuals",
    "solve_multistart",
    "solve_saddle",
    "sweep_beta",
]
