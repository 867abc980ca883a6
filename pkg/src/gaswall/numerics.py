"""Small numerical building blocks: quadrature, root bracketing, derivatives.

Everything here is deterministic and shared by the equilibrium modules; none
of it knows about gases or potentials.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad

from .errors import BracketError, ConvergenceError


def adaptive_quad(f, a, b, rtol=1e-10, atol=1e-14):
    """Integrate f on [a, b] with an adaptive Gauss panel rule.

    Thin wrapper over scipy's QUADPACK driver; converts its warning channel
    into ConvergenceError so callers never consume a silently-bad value.
    """
    if a == b:
        return 0.0
    out = quad(f, a, b, epsabs=atol, epsrel=rtol, limit=200, full_output=1)
    if len(out) > 3:
        raise ConvergenceError(f"quadrature on [{a}, {b}] did not converge: {out[3]}")
    value = out[0]
    if not np.isfinite(value):
        raise ConvergenceError(f"quadrature on [{a}, {b}] returned {value}")
    return value


def bracket_root(g, lo, hi_start, hi_max, grow=2.0):
    """Find hi <= hi_max with g(lo) and g(hi) of opposite sign, doubling from
    hi_start.  Returns (lo, hi).  Raises BracketError if the sign never flips.
    """
    glo = g(lo)
    if glo == 0.0:
        return lo, lo
    hi = hi_start
    while hi <= hi_max:
        ghi = g(hi)
        if ghi == 0.0:
            return hi, hi
        if np.sign(ghi) != np.sign(glo):
            return lo, hi
        lo, glo = hi, ghi
        hi *= grow
    raise BracketError(f"no sign change found in ({lo}, {hi_max}]")


def bisect_root(g, lo, hi, xtol=1e-13):
    """Plain bisection on a bracketing interval.  Deterministic, ~50 steps."""
    if lo == hi:
        return lo
    glo = g(lo)
    if glo == 0.0:
        return lo
    ghi = g(hi)
    if ghi == 0.0:
        return hi
    if np.sign(glo) == np.sign(ghi):
        raise BracketError(f"[{lo}, {hi}] does not bracket a root")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        gm = g(mid)
        if gm == 0.0:
            return mid
        if np.sign(gm) == np.sign(glo):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def richardson_slope(f, x, h):
    """First derivative of f at x: symmetric differences at h and h/2 combined
    by one Richardson step (O(h^4) truncation)."""
    d1 = (f(x + h) - f(x - h)) / (2.0 * h)
    d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h
    return (4.0 * d2 - d1) / 3.0


# Five-point central stencils on a uniform grid x0-2h .. x0+2h.
_W_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_W_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0


def stencil5_first(values, h):
    return float(np.dot(_W_D1, values)) / h


def stencil5_second(values, h):
    return float(np.dot(_W_D2, values)) / (h * h)
