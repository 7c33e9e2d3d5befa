"""Independent reference computations used to freeze expected values.

Nothing here imports the package.  The Gaussian tail is obtained by
quadrature of the Mills integral, and the fixed point is located by brute
force grid scanning rather than Newton iteration.
"""

import itertools
import math

import mpmath as mp
import numpy as np
from scipy.optimize import brentq

mp.mp.dps = 40


def mills(t):
    """Q(t)/phi(t) = int_0^inf exp(-t s - s^2/2) ds by adaptive quadrature."""
    t = mp.mpf(t)
    pts = [0, -t, -t + 10, mp.inf] if t < 0 else [0, 1, mp.inf]
    return mp.quad(lambda s: mp.exp(-t * s - s * s / 2), pts)


def hazard(t):
    return -1 / mills(t)


def q_quad(t):
    t = mp.mpf(t)
    return mills(t) * mp.exp(-t * t / 2) / mp.sqrt(2 * mp.pi)


def residuals(beta, gamma, a, b):
    beta, gamma, a, b = (mp.mpf(x) for x in (beta, gamma, a, b))
    t = (b - 1) / mp.sqrt(a * beta)
    h = hazard(t)
    return ((1 - b) ** 2 / a - 1) / beta + gamma * t * h, (1 - (1 - b) / a) / beta + gamma * h / mp.sqrt(a * beta), t


def entropy_bits(beta, gamma, a, b):
    beta, gamma, a, b = (mp.mpf(x) for x in (beta, gamma, a, b))
    t = (b - 1) / mp.sqrt(a * beta)
    g = (b - mp.mpf(1) / 2 + (1 - b) ** 2 / (2 * a) + mp.log(a) / 2) / beta
    g += gamma * mp.log(2 * q_quad(t)) + (1 - gamma) * mp.log(2)
    return g / mp.log(2)


def grid_scan_saddle(beta, gamma, n=81, rounds=12, shrink=0.25):
    """Minimize r_a^2 + r_b^2 over (log a, b) in [-5, 5] x [-5, 1) by
    repeated dense grid scans around the incumbent minimum."""
    f = lambda u, b: sum(x * x for x in residuals(beta, gamma, mp.e ** u, b)[:2])
    lo_u, hi_u, lo_b, hi_b = -5.0, 5.0, -5.0, 1.0 - 1e-9
    best = None
    for _ in range(rounds):
        us = np.linspace(lo_u, hi_u, n)
        bs = np.linspace(lo_b, hi_b, n)
        vals = [(float(f(u, b)), u, b) for u, b in itertools.product(us, bs)]
        best = min(vals)
        _, u0, b0 = best
        du, db = (hi_u - lo_u) * shrink, (hi_b - lo_b) * shrink
        lo_u, hi_u = u0 - du, u0 + du
        lo_b, hi_b = b0 - db, min(b0 + db, 1.0 - 1e-9)
        n = 21
    _, u0, b0 = best
    return float(mp.e ** u0), float(b0)


def reduced_a(beta, gamma):
    """a* on the b = 0 line by bisection of r_a(a, 0) over a in [1, 1e6].

    On b = 0, r_b = -r_a identically, so one scalar root gives the fixed point.
    """
    lo, hi = mp.mpf(1), mp.mpf(10) ** 6
    r = lambda a: residuals(beta, gamma, a, 0)[0]
    for _ in range(200):
        mid = (lo + hi) / 2
        if r(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < mp.mpf(10) ** -30 * hi:
            break
    return (lo + hi) / 2


def _pdf(t):
    return math.exp(-0.5 * t * t) / math.sqrt(2 * math.pi)


def _sf(t):
    return 0.5 * math.erfc(t / math.sqrt(2))


def _reduced_a_double(beta, gamma):
    # bracketing root of r_a(a, 0) with the naive ratio pdf/sf from math.erfc
    def r(a):
        t = -1.0 / math.sqrt(a * beta)
        return (1.0 / a - 1.0) / beta - gamma * t * _pdf(t) / _sf(t)

    hi = 2.0
    while r(hi) > 0:
        hi *= 2.0
    return brentq(r, 1.0, hi, xtol=1e-15, rtol=1e-15, maxiter=500)


def _eta_double(beta, gamma):
    a = _reduced_a_double(beta, gamma)
    t = -1.0 / math.sqrt(a * beta)
    g = (-0.5 + 1.0 / (2 * a) + 0.5 * math.log(a)) / beta + gamma * math.log(2 * _sf(t)) + (1 - gamma) * math.log(2)
    return gamma * g / math.log(2)


def exhaustive_gamma(beta, step=1e-4):
    """Fine-grid maximizer of gamma * H_bits over gamma in (0, 1]; ties to larger gamma."""
    n = int(round(1 / step))
    gs = np.arange(1, n + 1) / n
    etas = np.array([_eta_double(beta, g) for g in gs])
    i = int(np.flatnonzero(etas == etas.max())[-1])
    return float(gs[i]), float(etas[i])
