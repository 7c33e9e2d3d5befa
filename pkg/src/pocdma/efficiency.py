"""Entropy of the admissible signaling set and the resulting multiuser efficiency.

The efficiency of the scheme at ``(beta, gamma)`` is ``gamma * H`` with ``H``
the per-user entropy in bits.  :func:`optimize_gamma` maximizes it over the
protected fraction and :func:`sweep_beta` traces the optimum along a load grid.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotConvergedError, PreconditionError
from .saddle import DEFAULT_TOL, SaddleSolution, SystemPoint, solve_saddle
from .tail import log_two_q

log = logging.getLogger(__name__)

LOG2E = math.log2(math.e)
LN2 = math.log(2.0)

GAMMA_GRID_STEP = 0.01
GAMMA_XTOL = 1e-5
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class EntropyResult:
    h_nats: float
    h_bits: float
    system: SystemPoint
    saddle: SaddleSolution


@dataclass(frozen=True)
class AmeCurvePoint:
    beta: float
    gamma_opt: float
    eta_opt: float
    eta_decorrelator: float | None = None
    eta_lmmse: float | None = None
    eta_optimal_mud: float | None = None
    status: str = "ok"


def _bracket(a: float, b: float) -> float:
    # b - 1/2 + (1-b)^2/(2a) + log(a)/2
    return b - 0.5 + (1.0 - b) ** 2 / (2.0 * a) + 0.5 * math.log(a)


def entropy(point: SystemPoint, solution: SaddleSolution) -> EntropyResult:
    """Per-user entropy at a converged saddle point, in nats and bits."""
    if not solution.converged:
        raise PreconditionError(f"entropy needs a converged saddle point ({solution.message})")
    a, b, t = solution.a_star, solution.b_star, solution.t_star
    g = point.gamma
    h_nats = _bracket(a, b) / point.beta + g * log_two_q(t) + (1.0 - g) * LN2
    return EntropyResult(h_nats=h_nats, h_bits=h_nats * LOG2E, system=point, saddle=solution)


def ame_direct(point: SystemPoint, solution: SaddleSolution) -> float:
    """Efficiency written out term by term rather than as ``gamma * H``."""
    if not solution.converged:
        raise PreconditionError(f"efficiency needs a converged saddle point ({solution.message})")
    g = point.gamma
    return (
        g * LOG2E / point.beta * _bracket(solution.a_star, solution.b_star)
        + g * g * LOG2E * log_two_q(solution.t_star)
        + g * (1.0 - g)
    )


def evaluate(point: SystemPoint, init=None, tol: float = DEFAULT_TOL) -> EntropyResult:
    """Solve the saddle point and return the entropy; raise if the solve fails."""
    sol = solve_saddle(point, init=init, tol=tol)
    if not sol.converged:
        raise NotConvergedError(
            f"saddle point did not converge at beta={point.beta!r}, gamma={point.gamma!r}: {sol.message}"
        )
    return entropy(point, sol)


def ame(point: SystemPoint, init=None, tol: float = DEFAULT_TOL) -> float:
    """Asymptotic multiuser efficiency ``gamma * H_bits(beta, gamma)``."""
    return point.gamma * evaluate(point, init=init, tol=tol).h_bits


def comparison_ame(beta: float) -> tuple[float, float, float]:
    """Reference efficiencies: (decorrelator, zero-noise LMMSE, optimal MUD)."""
    if not beta > 0.0:
        raise DomainError(f"beta must be positive, got {beta!r}")
    linear = max(0.0, 1.0 - beta)
    return linear, linear, 1.0


def _golden_max(f, lo, hi, xtol):
    """Golden-section search for the maximum of a unimodal ``f`` on [lo, hi]."""
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > xtol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = f(d)
    return (c, fc) if fc > fd else (d, fd)


def gamma_grid(step: float = GAMMA_GRID_STEP) -> np.ndarray:
    n = int(round(1.0 / step))
    return np.arange(1, n + 1) / n


def optimize_gamma(
    beta: float,
    tol: float = DEFAULT_TOL,
    xtol: float = GAMMA_XTOL,
    warm: dict | None = None,
    grid_step: float = GAMMA_GRID_STEP,
) -> tuple[float, float]:
    """Maximize the efficiency over the protected fraction ``gamma`` in (0, 1].

    A coarse grid with spacing ``grid_step`` locates the best cell, then a
    golden-section search refines ``gamma`` to ``xtol``.  Ties go to the
    larger ``gamma``.

    ``warm`` maps grid indices to ``(a, b)`` starting points and is updated
    in place with the solutions found, which is how :func:`sweep_beta`
    continues from one load to the next.  Grid points whose solve fails are
    skipped with a warning.

    Returns ``(gamma_opt, eta_opt)``.
    """
    if not beta > 0.0:
        raise DomainError(f"beta must be positive, got {beta!r}")
    grid = gamma_grid(grid_step)
    etas = np.full(grid.size, -np.inf)
    starts: dict[int, tuple[float, float]] = {}
    prev = None
    for i, g in enumerate(grid):
        init = warm.get(i) if warm is not None and i in warm else prev
        point = SystemPoint(beta, float(g))
        sol = solve_saddle(point, init=init, tol=tol)
        if not sol.converged and init is not None:
            sol = solve_saddle(point, tol=tol)
        if not sol.converged:
            log.warning("skipping gamma=%.2f at beta=%g: %s", g, beta, sol.message)
            continue
        etas[i] = point.gamma * entropy(point, sol).h_bits
        prev = starts[i] = (sol.a_star, sol.b_star)
    if warm is not None:
        warm.update(starts)
    if not np.isfinite(etas).any():
        raise NotConvergedError(f"no gamma grid point converged at beta={beta!r}")

    best = int(np.flatnonzero(etas == etas.max())[-1])
    g_best, eta_best = float(grid[best]), float(etas[best])

    lo = float(grid[best - 1]) if best > 0 else 0.5 * float(grid[0])
    hi = float(grid[min(best + 1, grid.size - 1)])
    seed = starts[best]

    def eta_of(g):
        try:
            return ame(SystemPoint(beta, g), init=seed, tol=tol)
        except NotConvergedError:
            return -math.inf

    g_ref, eta_ref = _golden_max(eta_of, lo, hi, xtol)
    if eta_ref > eta_best:
        g_best, eta_best = g_ref, eta_ref
    return g_best, eta_best


def sweep_beta(betas, with_comparisons: bool = True, tol: float = DEFAULT_TOL) -> list[AmeCurvePoint]:
    """Optimum efficiency along an ascending load grid.

    Each load warm-starts its solves from the previous load's saddle points at
    the same ``gamma``.  A failing load is reported in its row's ``status``
    and does not stop the sweep.
    """
    betas = [float(x) for x in betas]
    if not betas:
        raise DomainError("betas must be non-empty")
    if any(x <= 0.0 for x in betas):
        raise DomainError("betas must be positive")
    if any(y < x for x, y in zip(betas, betas[1:])):
        raise DomainError("betas must be sorted ascending")

    warm: dict = {}
    rows = []
    for beta in betas:
        comps = comparison_ame(beta) if with_comparisons else (None, None, None)
        try:
            g_opt, eta_opt = optimize_gamma(beta, tol=tol, warm=warm)
            status = "ok"
        except NotConvergedError as exc:
            log.warning("sweep point beta=%g failed: %s", beta, exc)
            g_opt, eta_opt, status = math.nan, math.nan, f"failed: {exc}"
        rows.append(AmeCurvePoint(beta, g_opt, eta_opt, *comps, status=status))
    return rows
