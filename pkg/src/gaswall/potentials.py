"""Radial confining potentials v(r) with first and second derivatives.

A potential enters every module through three callables (v, dv, ddv), all
vectorized over numpy arrays.  Monomial sums k1 r^p1 + k2 r^p2 + ... carry
their term list so downstream code can use exact radial moments and feed the
Monte Carlo kernels without callbacks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .numerics import adaptive_quad

_CHECK_POINTS = (0.31, 0.77, 1.4)
_CHECK_TOL = 1e-6


@dataclass(frozen=True)
class RadialPotential:
    """Confinement v(r) on r >= 0; V(x) = v(|x|) in every gas model.

    monomials, when present, lists (coefficient, exponent) pairs that define
    v exactly.  check() verifies dv/ddv against finite differences of v.
    """

    v: Callable
    dv: Callable
    ddv: Callable
    label: str = "custom"
    monomials: Optional[tuple] = None

    def check(self):
        for r in _CHECK_POINTS:
            h = 1e-5 * max(1.0, r)
            fd1 = (self.v(r + h) - self.v(r - h)) / (2.0 * h)
            fd2 = (self.v(r + h) - 2.0 * self.v(r) + self.v(r - h)) / (h * h)
            scale1 = max(1.0, abs(fd1))
            scale2 = max(1.0, abs(fd2))
            if abs(fd1 - self.dv(r)) > _CHECK_TOL * scale1:
                raise ValueError(f"dv inconsistent with v near r={r}")
            if abs(fd2 - self.ddv(r)) > 1e-4 * scale2:
                raise ValueError(f"ddv inconsistent with v near r={r}")
        return self

    def radial_moment(self, d, R):
        """int_0^R v(r) r^(d-1) dr, exact for monomial sums."""
        if R < 0.0:
            raise ValueError("moment upper limit must be >= 0")
        if R == 0.0:
            return 0.0
        if self.monomials is not None:
            return float(sum(k * R ** (p + d) / (p + d) for k, p in self.monomials))
        return adaptive_quad(lambda r: self.v(r) * r ** (d - 1), 0.0, R, rtol=1e-12)


def monomial_sum(terms, label=None):
    """Potential sum_i k_i r^(p_i); exponents must be even integers >= 2."""
    terms = tuple((float(k), int(p)) for k, p in terms)
    if not terms:
        raise ValueError("at least one monomial term is required")
    for k, p in terms:
        if p < 2 or p % 2 != 0:
            raise ValueError(f"exponent {p}: only even exponents >= 2 keep V smooth and symmetric")
        if not np.isfinite(k) or k <= 0.0:
            raise ValueError(f"coefficient {k} must be positive and finite")
    if label is None:
        label = "+".join(f"{k:g}*r^{p}" for k, p in terms)

    def v(r):
        r = np.asarray(r, dtype=float)
        out = sum(k * r ** p for k, p in terms)
        return out if out.ndim else float(out)

    def dv(r):
        r = np.asarray(r, dtype=float)
        out = sum(k * p * r ** (p - 1) for k, p in terms)
        return out if out.ndim else float(out)

    def ddv(r):
        r = np.asarray(r, dtype=float)
        out = sum(k * p * (p - 1) * r ** (p - 2) for k, p in terms)
        return out if out.ndim else float(out)

    return RadialPotential(v=v, dv=dv, ddv=ddv, label=label, monomials=terms)


def quadratic(k=0.5):
    """v(r) = k r^2; the k = 1/2 default is the harmonic well."""
    return monomial_sum([(k, 2)], label=f"quadratic:{k:g}")


def quartic(k=0.25):
    """v(r) = k r^4."""
    return monomial_sum([(k, 4)], label=f"quartic:{k:g}")


def monomial(p, k=1.0):
    """v(r) = k r^p for an even exponent p >= 2."""
    return monomial_sum([(k, p)], label=f"monomial:{p:d},{k:g}")


def zero_potential():
    """Free gas between walls: v = 0 (no finite pulled support)."""
    z = lambda r: np.zeros_like(np.asarray(r, dtype=float)) if np.ndim(r) else 0.0
    return RadialPotential(v=z, dv=z, ddv=z, label="zero", monomials=())
