"""Numeric verification of the identities the solvers are built on.

Each suite re-derives one load-bearing formula by an independent route and
reports the worst deviation over a fixed case list:

* multipole: the log kernel against its Chebyshev multipole expansion,
  truncated at 10^4 terms (converges like 1/N off the diagonal),
* log_moment: the closed-form logarithmic Chebyshev moments against brute
  quadrature (singularity subtracted inside [-1, 1]),
* shell: the factorized spherical-shell average against direct angular
  integration of the kernel in d = 2 and d = 3,
* wronskian: phi' psi - phi psi' + 1/(a^2 r^(d-1)) = 0 with all four
  factors assembled from bessel_k / bessel_i, in d = 1..4.

The suites are deterministic: fixed grids, no randomness, so a failure is
reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as _gamma

from .numerics import adaptive_quad
from .special import (
    bessel_i,
    bessel_k,
    chebyshev_log_moment,
    chebyshev_t,
    gauss_chebyshev,
    multipole_log_partial_sum,
)
from .yukawa import YukawaParams, interaction, shell_average

MULTIPOLE_TERMS = 10_000
MULTIPOLE_MIN_SEP = 0.1
MULTIPOLE_TOL = 1e-3
LOG_MOMENT_MAX_N = 20
LOG_MOMENT_NODES = 100_000
LOG_MOMENT_TOL = 1e-8
SHELL_TOL = 1e-8
WRONSKIAN_TOL = 1e-10


@dataclass(frozen=True)
class IdentityResult:
    name: str
    max_dev: float
    threshold: float
    n_cases: int

    @property
    def passed(self):
        return self.max_dev < self.threshold

    def __str__(self):
        tag = "pass" if self.passed else "FAIL"
        return (f"{self.name:11s} {tag}  max deviation {self.max_dev:.3e} "
                f"(threshold {self.threshold:.0e}, {self.n_cases} cases)")


def multipole_suite(n_terms=MULTIPOLE_TERMS, min_sep=MULTIPOLE_MIN_SEP):
    """-log|x - y| against the truncated multipole sum on fixed pairs."""
    xs = np.linspace(-0.9, 0.9, 7)
    seps = (0.1, 0.25, 0.5, 1.0, 1.5)
    worst = 0.0
    n_cases = 0
    for x in xs:
        for s in seps:
            for y in (x + s, x - s):
                if abs(y) > 1.0 or abs(x - y) < min_sep:
                    continue
                approx = multipole_log_partial_sum(float(x), float(y), n_terms)
                worst = max(worst, abs(approx + math.log(abs(x - y))))
                n_cases += 1
    return IdentityResult("multipole", worst, MULTIPOLE_TOL, n_cases)


def _log_moment_brute(n, x, n_nodes):
    """(1/pi) int log|x - y| T_n(y) / sqrt(1 - y^2) dy, by Gauss-Chebyshev.

    Inside [-1, 1] the log singularity is subtracted: the remainder
    log|x - y| (T_n(y) - T_n(x)) is continuous, and the subtracted part
    integrates in closed form to T_n(x) S(x) with S the zeroth moment.
    Outside, the integrand is smooth and plain quadrature is spectral.
    """
    nodes, weights = gauss_chebyshev(n_nodes)
    tn_y = chebyshev_t(n, nodes)
    if abs(x) <= 1.0:
        s0 = -math.log(2.0)
        tn_x = chebyshev_t(n, x)
        diff = np.where(nodes == x, 0.0, tn_y - tn_x)
        with np.errstate(divide="ignore"):
            logs = np.where(nodes == x, 0.0, np.log(np.abs(x - nodes)))
        return float(np.dot(weights, logs * diff) / math.pi + tn_x * s0)
    return float(np.dot(weights, np.log(np.abs(x - nodes)) * tn_y) / math.pi)


def log_moment_suite(max_n=LOG_MOMENT_MAX_N, n_nodes=LOG_MOMENT_NODES):
    """Closed-form logarithmic moments against brute quadrature.

    The closed form carries the sign convention moment = -(1/pi) int ...,
    so the comparison is moment + brute = 0.
    """
    xs = (0.0, 0.5, -0.5, 1.0, -1.0, 1.5, 3.0, -2.0)
    worst = 0.0
    n_cases = 0
    for n in range(1, max_n + 1):
        for x in xs:
            brute = _log_moment_brute(n, x, n_nodes)
            closed = chebyshev_log_moment(n, x)
            worst = max(worst, abs(closed + brute))
            n_cases += 1
    return IdentityResult("log_moment", worst, LOG_MOMENT_TOL, n_cases)


def _shell_direct(params, x_norm, r):
    """Average of the kernel over the sphere |y| = r, by angular quadrature."""
    d = params.d
    if d == 2:
        def f(theta):
            dist = math.sqrt(x_norm**2 + r**2 - 2.0 * x_norm * r * math.cos(theta))
            return interaction(params, dist)
        return adaptive_quad(f, 0.0, 2.0 * math.pi, rtol=1e-12) / (2.0 * math.pi)
    if d == 3:
        def f(u):
            dist = math.sqrt(x_norm**2 + r**2 - 2.0 * x_norm * r * u)
            return interaction(params, dist)
        return adaptive_quad(f, -1.0, 1.0, rtol=1e-12) / 2.0
    raise ValueError("direct surface quadrature implemented for d = 2, 3")


_SHELL_PAIRS = ((0.5, 1.2), (1.2, 0.5), (2.0, 1.0), (0.25, 0.75), (3.0, 0.4),
                (0.8, 2.5), (2.5, 0.8), (1.0, 1.5), (1.5, 1.0), (0.4, 0.9))


def shell_suite(dims=(2, 3), n_pairs=5):
    """Factorized shell average against direct surface quadrature."""
    if not 1 <= n_pairs <= len(_SHELL_PAIRS):
        raise ValueError(f"n_pairs must be in 1..{len(_SHELL_PAIRS)}")
    cases = []
    for d, a, m in ((2, 1.0, 1.0), (3, 1.0, 1.0), (2, 0.7, 1.3), (3, 1.5, 0.6)):
        if d not in dims:
            continue
        params = YukawaParams(d=d, a=a, m=m)
        for x_norm, r in _SHELL_PAIRS[:n_pairs]:
            cases.append((params, x_norm, r))
    if not cases:
        raise ValueError("shell suite dimensions must include 2 or 3")
    worst = 0.0
    for params, x_norm, r in cases:
        direct = _shell_direct(params, x_norm, r)
        factorized = shell_average(params, x_norm, r)
        worst = max(worst, abs(factorized - direct) / abs(direct))
    return IdentityResult("shell", worst, SHELL_TOL, len(cases))


def _wronskian_parts(d, a, m, r):
    """phi, phi', psi, psi' assembled from bessel_k / bessel_i."""
    z = m * r / a
    if d == 1:
        phi = np.exp(-z) / (a * m)
        dphi = -np.exp(-z) / (a * a)
        psi = np.cosh(z)
        dpsi = (m / a) * np.sinh(z)
        return phi, dphi, psi, dpsi
    nu = 0.5 * d - 1.0
    B = (m * m / (2.0 * a * a)) ** nu / (a * a * _gamma(0.5 * d))
    G = _gamma(0.5 * d) * 2.0**nu
    phi = B * z ** (-nu) * bessel_k(nu, z)
    dphi = -B * (m / a) * z ** (-nu) * bessel_k(nu + 1.0, z)
    psi = G * z ** (-nu) * bessel_i(nu, z)
    dpsi = G * (m / a) * z ** (-nu) * bessel_i(nu + 1.0, z)
    return phi, dphi, psi, dpsi


def wronskian_suite(dims=(1, 2, 3, 4)):
    """phi' psi - phi psi' = -1/(a^2 r^(d-1)), relative form."""
    bad = [d for d in dims if d not in (1, 2, 3, 4)]
    if bad:
        raise ValueError(f"wronskian suite covers d = 1..4, got {bad}")
    r = np.geomspace(0.01, 10.0, 25)
    worst = 0.0
    n_cases = 0
    for d in dims:
        for a, m in ((1.0, 1.0), (0.5, 2.0), (2.0, 0.5)):
            phi, dphi, psi, dpsi = _wronskian_parts(d, a, m, r)
            lhs = (dphi * psi - phi * dpsi) * a * a * r ** (d - 1)
            worst = max(worst, float(np.max(np.abs(lhs + 1.0))))
            n_cases += r.size
    return IdentityResult("wronskian", worst, WRONSKIAN_TOL, n_cases)


SUITES = {
    "multipole": multipole_suite,
    "log_moment": log_moment_suite,
    "shell": shell_suite,
    "wronskian": wronskian_suite,
}


def run_all(names=None):
    """Run the requested suites (all four by default), in a stable order."""
    if names is None:
        names = list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown identity suites: {', '.join(unknown)}")
    return [SUITES[name]() for name in names]
