"""Gaussian tail kernel.

``Q(t)`` is the standard normal survival function.  The fixed-point
equations only ever need ``Q'(t)/Q(t)`` and ``log(2 Q(t))``, and both are
evaluated here without forming ``Q`` by subtraction, so they stay accurate
deep in either tail.
"""

import math

from scipy.special import erfc, erfcx, log_ndtr

from .errors import DomainError

_SQRT2 = math.sqrt(2.0)
_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _check(t):
    t = float(t)
    if not math.isfinite(t):
        raise DomainError(f"tail kernel needs a finite argument, got {t!r}")
    return t


def q_function(t):
    """Standard Gaussian complementary CDF, ``Q(t) = P(Z > t)``."""
    t = _check(t)
    return 0.5 * float(erfc(t / _SQRT2))


def hazard_ratio(t):
    """Return ``Q'(t)/Q(t) = -phi(t)/Q(t)``.

    Negative for every finite ``t``.  For ``t >= 0`` it is computed as
    ``-sqrt(2/pi) / erfcx(t/sqrt(2))``, which neither overflows nor loses
    precision for large ``t`` (where the value approaches ``-t - 1/t``).
    For ``t < 0`` the denominator ``Q(t)`` lies in ``[1/2, 1]`` and the
    density is evaluated directly; the result underflows gracefully
    towards ``-0.0`` once ``phi(t)`` leaves the double range (``t < -38.6``).
    """
    t = _check(t)
    if t >= 0.0:
        return -_SQRT_2_OVER_PI / float(erfcx(t / _SQRT2))
    density = _INV_SQRT_2PI * math.exp(-0.5 * t * t)
    return -density / (0.5 * float(erfc(t / _SQRT2)))


def hazard_ratio_derivative(t):
    """d/dt of :func:`hazard_ratio`, using ``h' = -h (t + h)``."""
    h = hazard_ratio(t)
    return -h * (t + h)


def log_two_q(t):
    """``log(2 Q(t))`` in nats; zero at ``t = 0``, tends to ``log 2`` as ``t -> -inf``."""
    t = _check(t)
    return math.log(2.0) + float(log_ndtr(-t))
