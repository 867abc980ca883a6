"""Modified Bessel functions, Chebyshev tools and logarithmic moments.

The Chebyshev side is the workhorse for the one-dimensional gas: confining
potentials are expanded in T_n on the pushed support, and the logarithmic
interaction integrates against that basis in closed form,

    -(1/pi) int_{-1}^{1} log|x - y| T_n(y) / sqrt(1 - y^2) dy
        = T_n(x)/n            for |x| <= 1, n >= 1,
        = exp(-n z)/n,  z = log(x + sqrt(x^2 - 1)),   for x >= 1,

with odd reflection for x <= -1.  The n = 0 moment gives the familiar
log 2 capacity constant, which enters the partial-sum identity

    -log|x - y| = log 2 + sum_{n>=1} (2/n) T_n(x) T_n(y).

Modified Bessel values are delegated to scipy's AMOS-backed routines; the
half-integer closed forms and the recurrence are kept as test oracles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .errors import ConvergenceError

COEFF_TOL = 1e-12        # tail threshold on |n c_n|
MAX_COEFFS = 4096        # hard cap on the truncation index
MAX_NODES = 1 << 16      # hard cap on quadrature nodes


def _check_order(nu):
    nu = float(nu)
    if not np.isfinite(nu) or nu < 0.0:
        raise ValueError(f"Bessel order must be finite and >= 0, got {nu}")
    return nu


def bessel_i(nu, x):
    """Modified Bessel function of the first kind, I_nu(x) for x >= 0.

    x = 0 is handled by the limit: 1 for nu = 0, 0 for nu > 0.
    """
    nu = _check_order(nu)
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)) or np.any(xa < 0.0):
        raise ValueError("bessel_i requires finite x >= 0")
    out = _sp.iv(nu, xa)
    if xa.ndim == 0:
        return float(out)
    return out


def bessel_k(nu, x):
    """Modified Bessel function of the second kind, K_nu(x) for x > 0."""
    nu = _check_order(nu)
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)) or np.any(xa <= 0.0):
        raise ValueError("bessel_k requires finite x > 0")
    out = _sp.kv(nu, xa)
    if xa.ndim == 0:
        return float(out)
    return out


def chebyshev_t(n, u):
    """T_n(u) on [-1, 1] by the stable three-term recurrence."""
    if n < 0 or int(n) != n:
        raise ValueError(f"Chebyshev degree must be a nonnegative integer, got {n}")
    n = int(n)
    ua = np.asarray(u, dtype=float)
    # allow harmless roundoff from x/R at the support edge
    if np.any(np.abs(ua) > 1.0 + 1e-12):
        raise ValueError("chebyshev_t argument outside [-1, 1]")
    ua = np.clip(ua, -1.0, 1.0)
    if n == 0:
        out = np.ones_like(ua)
    elif n == 1:
        out = ua.copy()
    else:
        tkm1 = np.ones_like(ua)
        tk = ua.copy()
        for _ in range(n - 1):
            tkm1, tk = tk, 2.0 * ua * tk - tkm1
        out = tk
    if ua.ndim == 0:
        return float(out)
    return out


def gauss_chebyshev(n):
    """Nodes and weights of the n-point Gauss-Chebyshev rule.

    Integrates f(u)/sqrt(1-u^2) exactly on [-1, 1] for polynomial f of
    degree < 2n.  Nodes are cos((2k-1) pi / (2n)), all weights pi/n.
    """
    if n < 1 or int(n) != n:
        raise ValueError(f"node count must be a positive integer, got {n}")
    n = int(n)
    theta = (2.0 * np.arange(1, n + 1) - 1.0) * (np.pi / (2.0 * n))
    return np.cos(theta), np.full(n, np.pi / n)


def multipole_log_partial_sum(x, y, n_terms):
    """Partial sum log 2 + sum_{n<=N} (2/n) T_n(x) T_n(y).

    Converges to -log|x - y| at rate O(1/N) away from the diagonal.
    """
    if not (np.isfinite(x) and np.isfinite(y)):
        raise ValueError("arguments must be finite")
    if abs(x) > 1.0 or abs(y) > 1.0:
        raise ValueError("arguments must lie in [-1, 1]")
    if x == y:
        raise ValueError("partial sum diverges on the diagonal x = y")
    if n_terms < 1 or int(n_terms) != n_terms:
        raise ValueError("n_terms must be a positive integer")
    n = np.arange(1, int(n_terms) + 1, dtype=float)
    tx, ty = np.arccos(x), np.arccos(y)
    # T_n(cos t) = cos(n t); product-to-sum keeps the sum to two cos arrays
    terms = np.cos(n * (tx - ty)) + np.cos(n * (tx + ty))
    return float(np.log(2.0) + np.sum(terms / n))


def chebyshev_log_moment(n, x):
    """The n-th logarithmic Chebyshev moment (see module docstring), n >= 1."""
    if n < 1 or int(n) != n:
        raise ValueError(f"moment order must be a positive integer, got {n}")
    n = int(n)
    x = float(x)
    if not np.isfinite(x):
        raise ValueError("x must be finite")
    ax = abs(x)
    if ax <= 1.0:
        return chebyshev_t(n, x) / n
    z = np.log(ax + np.sqrt(ax * ax - 1.0))
    val = np.exp(-n * z) / n
    if x < 0.0 and n % 2 == 1:
        val = -val
    return float(val)


def cheb_prime_expansion(n):
    """Chebyshev-T coefficients of u * T_n'(u), for even n.

    u T_n'(u) = n T_0 + n T_n + 2n (T_2 + T_4 + ... + T_{n-2}).  Odd n would
    populate odd modes and is rejected (the gas modules only meet even n).
    """
    if n < 0 or int(n) != n:
        raise ValueError(f"degree must be a nonnegative integer, got {n}")
    n = int(n)
    if n % 2 != 0:
        raise ValueError("cheb_prime_expansion is defined here for even n only")
    out = np.zeros(n + 1)
    if n == 0:
        return out
    out[0] = n
    out[n] = n
    out[2:n:2] = 2.0 * n
    return out


@dataclass(frozen=True)
class ChebExpansion:
    """Truncated Chebyshev-T series c_0 + sum c_n T_n(x / scale).

    tail_bound records the largest |n c_n| discarded by the truncation; it is
    below COEFF_TOL unless the coefficient cap was hit.
    """

    coeffs: np.ndarray
    scale: float
    tail_bound: float = 0.0

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0 or not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be a finite 1-d array")
        if not np.isfinite(self.scale) or self.scale <= 0.0:
            raise ValueError("scale must be positive")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return self.coeffs.size - 1

    def __call__(self, x):
        u = np.asarray(x, dtype=float) / self.scale
        if np.any(np.abs(u) > 1.0 + 1e-12):
            raise ValueError("evaluation point outside the expansion interval")
        u = np.clip(u, -1.0, 1.0)
        out = np.polynomial.chebyshev.chebval(u, self.coeffs)
        if u.ndim == 0:
            return float(out)
        return out

    def weighted_index_sum(self):
        """sum_{n>=1} n c_n, the quantity steering the pushed/pulled split."""
        n = np.arange(self.coeffs.size, dtype=float)
        return float(np.dot(n[1:], self.coeffs[1:]))


def _cos_transform(values, n_nodes, j_max):
    """Coefficients c_j = (2 - delta_{j0}) / n * sum_k f(u_k) cos(j theta_k),
    computed blockwise so the cos matrix never gets large."""
    theta = (2.0 * np.arange(1, n_nodes + 1) - 1.0) * (np.pi / (2.0 * n_nodes))
    coeffs = np.empty(j_max + 1)
    block = 128
    for j0 in range(0, j_max + 1, block):
        j = np.arange(j0, min(j0 + block, j_max + 1))
        coeffs[j0:j0 + j.size] = np.cos(np.outer(j, theta)) @ values * (2.0 / n_nodes)
    coeffs[0] *= 0.5
    return coeffs


def chebyshev_coefficients(f, tol=COEFF_TOL, max_nodes=MAX_NODES, max_coeffs=MAX_COEFFS):
    """Chebyshev-T coefficients of f on [-1, 1] by node-doubling quadrature.

    The node count doubles from 64 until two consecutive passes agree to
    1e-12 (relative to the largest coefficient).  The series is then trimmed
    to the shortest head whose discarded tail satisfies |n c_n| < tol; if the
    tail never gets there the head is capped at max_coeffs and the achieved
    bound is reported on the expansion.

    Returns (coeffs, tail_bound).
    """
    n_nodes = 64
    prev = None
    while True:
        nodes = np.cos((2.0 * np.arange(1, n_nodes + 1) - 1.0) * (np.pi / (2.0 * n_nodes)))
        values = np.asarray(f(nodes), dtype=float)
        if values.shape != nodes.shape or not np.all(np.isfinite(values)):
            raise ValueError("integrand must return finite values of matching shape")
        j_max = min(n_nodes, max_coeffs + 32)
        coeffs = _cos_transform(values, n_nodes, j_max)
        if prev is not None:
            k = min(prev.size, coeffs.size)
            scale = max(1.0, float(np.max(np.abs(coeffs[:k]))))
            if float(np.max(np.abs(coeffs[:k] - prev[:k]))) <= 1e-12 * scale:
                return _trim(coeffs, tol, max_coeffs)
        prev = coeffs
        if n_nodes >= max_nodes:
            raise ConvergenceError(
                f"Chebyshev coefficients did not settle with {max_nodes} nodes")
        n_nodes *= 2


def _trim(coeffs, tol, max_coeffs):
    n = np.arange(coeffs.size, dtype=float)
    weighted = np.abs(n * coeffs)
    running = np.maximum.accumulate(weighted[::-1])[::-1]  # max over the tail
    keep = coeffs.size
    for j in range(coeffs.size - 1, 0, -1):
        if running[j] < tol:
            keep = j
        else:
            break
    if keep > max_coeffs + 1:
        keep = max_coeffs + 1
    tail = float(np.max(weighted[keep:])) if keep < coeffs.size else 0.0
    return coeffs[:keep].copy(), tail
