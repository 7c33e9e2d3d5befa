"""Saddle-point equations for the admissible-codeword entropy and their solver.

The unknowns are ``a > 0`` and ``b``; the auxiliary ``t = (b - 1)/sqrt(a*beta)``.
The solver works in ``u = log a`` so positivity of ``a`` never needs a guard.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .tail import hazard_ratio, hazard_ratio_derivative

DEFAULT_TOL = 1e-11
DEFAULT_MAX_ITER = 200
DEFAULT_INIT = (1.0, 0.0)

# Step caps in (log a, b); keep exp(u) finite while far from the root.
_MAX_DU = 4.0
_MAX_DB = 4.0
_ARMIJO = 1e-4
_MIN_STEP = 1e-12
_POLISH_STEPS = 4


@dataclass(frozen=True)
class SystemPoint:
    """System load ``beta = K/N`` and protected-user fraction ``gamma = K'/K``."""

    beta: float
    gamma: float

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta > 0.0):
            raise DomainError(f"beta must be a positive finite number, got {self.beta!r}")
        if not (0.0 < self.gamma <= 1.0):
            raise DomainError(f"gamma must lie in (0, 1], got {self.gamma!r}")


@dataclass(frozen=True)
class SaddleSolution:
    a_star: float
    b_star: float
    t_star: float
    residual_inf_norm: float
    iterations: int
    converged: bool
    message: str = ""


def aux_t(point: SystemPoint, a: float, b: float) -> float:
    return (b - 1.0) / math.sqrt(a * point.beta)


def saddle_residuals(point: SystemPoint, a: float, b: float) -> tuple[float, float, float]:
    """Evaluate both stationarity conditions at ``(a, b)``.

    Returns ``(r_a, r_b, t)``.  The two residuals are the scaled partial
    derivatives of the entropy exponent with respect to ``a`` and ``b``.
    """
    if not (a > 0.0) or not math.isfinite(a):
        raise DomainError(f"a must be positive and finite, got {a!r}")
    beta, gamma = point.beta, point.gamma
    sab = math.sqrt(a * beta)
    t = (b - 1.0) / sab
    h = hazard_ratio(t)
    one_b = 1.0 - b
    r_a = (one_b * one_b / a - 1.0) / beta + gamma * t * h
    r_b = (1.0 - one_b / a) / beta + gamma * h / sab
    return r_a, r_b, t


def saddle_jacobian(point: SystemPoint, u: float, b: float) -> np.ndarray:
    """Jacobian of ``(r_a, r_b)`` with respect to ``(log a, b)``."""
    beta, gamma = point.beta, point.gamma
    a = math.exp(u)
    sab = math.sqrt(a * beta)
    t = (b - 1.0) / sab
    h = hazard_ratio(t)
    dh = hazard_ratio_derivative(t)
    one_b = 1.0 - b
    ab = a * beta
    d_th = h + t * dh  # d(t*h)/dt
    return np.array([
        [-one_b * one_b / ab - 0.5 * gamma * t * d_th, -2.0 * one_b / ab + gamma * d_th / sab],
        [one_b / ab - 0.5 * gamma * d_th / sab, 1.0 / ab + gamma * dh / ab],
    ])


def _residual_vec(point, u, b):
    r_a, r_b, _ = saddle_residuals(point, math.exp(u), b)
    return np.array([r_a, r_b])


def _finalize(point, u, b, res, it, converged, message):
    a = math.exp(u)
    return SaddleSolution(
        a_star=a,
        b_star=float(b),
        t_star=float(aux_t(point, a, b)),
        residual_inf_norm=float(np.max(np.abs(res))),
        iterations=it,
        converged=converged,
        message=message,
    )


def solve_saddle(
    point: SystemPoint,
    init: tuple[float, float] | None = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SaddleSolution:
    """Solve the saddle-point equations by damped Newton iteration.

    Parameters
    ----------
    point : SystemPoint
    init : (a0, b0), optional
        Starting point; defaults to ``(1, 0)``, the exact solution at
        ``gamma = 0``.  Sweeps pass the previous solution here.
    tol : float
        Target for the infinity norm of ``(r_a, r_b)``.
    max_iter : int

    Returns
    -------
    SaddleSolution
        ``converged`` is False (with ``message`` set) when the tolerance was
        not reached; a non-converged result is never presented as a root.
    """
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    a0, b0 = DEFAULT_INIT if init is None else init
    if not a0 > 0.0:
        raise DomainError(f"initial a must be positive, got {a0!r}")
    u, b = math.log(a0), float(b0)

    res = _residual_vec(point, u, b)
    merit = 0.5 * float(res @ res)
    for it in range(max_iter + 1):
        if np.max(np.abs(res)) < tol:
            u, b, res = _polish(point, u, b, res)
            return _finalize(point, u, b, res, it, True, "converged")
        if it == max_iter:
            break

        jac = saddle_jacobian(point, u, b)
        newton = True
        try:
            if not np.all(np.isfinite(jac)) or np.linalg.cond(jac) > 1e14:
                raise np.linalg.LinAlgError("ill-conditioned Jacobian")
            step = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError:
            # steepest descent on the merit function
            newton = False
            step = -(jac.T @ res) if np.all(np.isfinite(jac)) else -res
            norm = float(np.max(np.abs(step)))
            if norm == 0.0 or not math.isfinite(norm):
                return _finalize(point, u, b, res, it, False, "singular Jacobian, no descent direction")
            step = step / norm

        scale = min(1.0, _MAX_DU / max(abs(step[0]), 1e-300), _MAX_DB / max(abs(step[1]), 1e-300))
        step = step * scale
        # Newton direction: d(merit) = -2*merit; gradient direction: use the slope directly
        slope = -2.0 * merit if newton else float(res @ (jac @ step))

        lam = 1.0
        while lam >= _MIN_STEP:
            u_new, b_new = u + lam * step[0], b + lam * step[1]
            try:
                res_new = _residual_vec(point, u_new, b_new)
            except (DomainError, OverflowError):
                res_new = None
            if res_new is not None and np.all(np.isfinite(res_new)):
                merit_new = 0.5 * float(res_new @ res_new)
                if merit_new <= merit + _ARMIJO * lam * slope or merit_new < 0.25 * tol * tol:
                    break
            lam *= 0.5
        else:
            return _finalize(point, u, b, res, it, False, "line search stalled")

        u, b, res, merit = u_new, b_new, res_new, merit_new

    return _finalize(point, u, b, res, max_iter, False, f"no convergence in {max_iter} iterations")


def _polish(point, u, b, res, steps=_POLISH_STEPS):
    # The residuals scale like 1/beta, so meeting tol alone can leave a* loose
    # at large load; take plain Newton steps while they keep reducing |r|.
    for _ in range(steps):
        try:
            step = np.linalg.solve(saddle_jacobian(point, u, b), -res)
            res_new = _residual_vec(point, u + step[0], b + step[1])
        except (np.linalg.LinAlgError, DomainError, OverflowError):
            break
        if not np.all(np.isfinite(res_new)) or np.max(np.abs(res_new)) >= np.max(np.abs(res)):
            break
        u, b, res = u + step[0], b + step[1], res_new
    return u, b, res


@dataclass(frozen=True)
class MultiStartReport:
    solutions: tuple[SaddleSolution, ...]
    max_spread: float
    distinct: bool


DEFAULT_MULTISTART = ((1.0, 0.0), (3.0, 0.5), (0.3, -1.0), (10.0, -2.0))


def solve_multistart(
    point: SystemPoint,
    inits=DEFAULT_MULTISTART,
    tol: float = DEFAULT_TOL,
    agree: float = 1e-8,
) -> MultiStartReport:
    """Solve from several initializations and report whether they agree.

    ``distinct`` is True when converged solutions differ by more than
    ``agree`` in ``a`` or ``b``; that is a diagnostic, not an error.
    """
    sols = tuple(solve_saddle(point, init=x0, tol=tol) for x0 in inits)
    ok = [s for s in sols if s.converged]
    spread = 0.0
    for s in ok:
        for r in ok:
            spread = max(spread, abs(s.a_star - r.a_star), abs(s.b_star - r.b_star))
    return MultiStartReport(solutions=sols, max_spread=spread, distinct=spread > agree)
