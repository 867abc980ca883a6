"""One-dimensional log-repelling gas confined by symmetric hard walls.

For a confining potential V(x) = v(|x|) the equilibrium density between
walls at +-R is

    rho_R(x) = P_R(x) / (pi sqrt(R^2 - x^2)),
    P_R(x)   = 1 - sum_{n>=1} n c_n(R) T_n(x/R),

where c_n(R) are the Chebyshev coefficients of V(R u) on [-1, 1].  The walls
stop carrying charge at the critical radius R* fixed by

    sum_{n>=1} n c_n(R*) = 1,

beyond which the density keeps the R* shape (pulled phase).  The excess free
energy of the pushed gas integrates the squared edge polynomial,

    F(R) = (1/2) int_R^{R*} P_r(r)^2 / r dr,      F'(R) = -P_R(R)^2 / (2R),

and the wall pressure is p(r) = P_r(r)^2 / (4 r).  All three derivatives of
F vanish at R*; the third derivative jumps by -[d/dr P_r(r)|_{R*}]^2 / R*.

The module also carries two single-wall rate functions (top-eigenvalue style
models with one hard wall) used as golden references: a semicircle gas
pushed from the right, and the square-case covariance gas whose rate has a
closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BracketError
from .numerics import adaptive_quad, bisect_root, richardson_slope, stencil5_second
from .potentials import RadialPotential
from .special import (
    COEFF_TOL,
    ChebExpansion,
    chebyshev_coefficients,
    chebyshev_log_moment,
)

R_STAR_MAX = 1e6


def expand_potential(pot, R, tol=COEFF_TOL):
    """Chebyshev coefficients of V(R u) = v(R|u|) on u in [-1, 1].

    Odd coefficients vanish by symmetry and are zeroed exactly.
    """
    if not np.isfinite(R) or R <= 0.0:
        raise ValueError(f"expansion radius must be positive, got {R}")
    coeffs, tail = chebyshev_coefficients(lambda u: pot.v(R * np.abs(u)), tol=tol)
    coeffs[1::2] = 0.0
    return ChebExpansion(coeffs=coeffs, scale=R, tail_bound=tail)


def edge_polynomial(expansion):
    """P(x) = 1 - sum n c_n T_n(x/R) from the coefficients of V(R .)."""
    c = expansion.coeffs
    a = -np.arange(c.size, dtype=float) * c
    a[0] = 1.0
    return ChebExpansion(coeffs=a, scale=expansion.scale, tail_bound=expansion.tail_bound)


@dataclass(frozen=True)
class LogGasEquilibrium:
    """Constrained equilibrium between walls at +-wall.

    support is min(wall, r_star); the expansions live on [-support, support].
    """

    wall: float
    support: float
    r_star: float
    phase: str
    coeffs: ChebExpansion
    edge: ChebExpansion
    mu: float

    def density(self, x):
        xa = np.asarray(x, dtype=float)
        scalar = xa.ndim == 0
        xv = np.atleast_1d(xa)
        if np.any(np.abs(xv) > self.wall * (1.0 + 1e-12)):
            raise ValueError("density evaluated outside the walls")
        out = np.zeros_like(xv)
        r = np.abs(xv)
        inside = r < self.support
        if np.any(inside):
            xi = xv[inside]
            out[inside] = self.edge(xi) / (np.pi * np.sqrt(self.support**2 - xi**2))
        at_edge = r == self.support
        if np.any(at_edge):
            # pushed edge diverges like an inverse square root; the pulled
            # edge vanishes like a square root
            out[at_edge] = math.inf if self.phase == "pushed" else 0.0
        return float(out[0]) if scalar else out


class LogGas:
    """Equilibrium family of the hard-wall log-gas for one potential."""

    def __init__(self, pot: RadialPotential, tol=COEFF_TOL):
        pot.check()
        self.pot = pot
        self.tol = tol
        self._r_star = None
        self._expansion = lru_cache(maxsize=4096)(self._expansion_impl)

    @property
    def label(self):
        return f"loggas({self.pot.label})"

    def _expansion_impl(self, R):
        return expand_potential(self.pot, R, tol=self.tol)

    def expansion(self, R):
        return self._expansion(float(R))

    def edge_value(self, r):
        """P_r(r) = 1 - sum n c_n(r): the edge polynomial at its own edge."""
        return 1.0 - self.expansion(r).weighted_index_sum()

    @property
    def r_star(self):
        """Critical wall radius; math.inf when the walls always push."""
        if self._r_star is None:
            self._r_star = self._solve_r_star()
        return self._r_star

    def _solve_r_star(self):
        g = lambda r: self.expansion(r).weighted_index_sum() - 1.0
        g1 = g(1.0)
        if g1 == 0.0:
            return 1.0
        if g1 < 0.0:
            lo, hi = 1.0, 2.0
            while g(hi) < 0.0:
                lo, hi = hi, 2.0 * hi
                if hi > R_STAR_MAX:
                    raise BracketError(
                        "no critical radius below 1e6: potential grows too slowly")
        else:
            lo, hi = 0.5, 1.0
            while g(lo) > 0.0:
                lo, hi = 0.5 * lo, lo
                if lo < 1e-9:
                    raise BracketError("edge sum exceeds 1 down to r=1e-9")
        return bisect_root(g, lo, hi, xtol=1e-13)

    def _r_star_or_inf(self):
        try:
            return self.r_star
        except BracketError:
            return math.inf

    def equilibrium(self, R):
        """Equilibrium measure with walls at +-R (pulled once R >= R*)."""
        if not np.isfinite(R) or R <= 0.0:
            raise ValueError(f"wall radius must be positive, got {R}")
        rs = self._r_star_or_inf()
        phase = "pushed" if R < rs else "pulled"
        support = R if phase == "pushed" else rs
        coeffs = self.expansion(support)
        edge = edge_polynomial(coeffs)
        mu = -math.log(support / 2.0) + coeffs.coeffs[0]
        return LogGasEquilibrium(
            wall=R, support=support, r_star=rs, phase=phase,
            coeffs=coeffs, edge=edge, mu=mu)

    def chemical_potential(self, R):
        return self.equilibrium(R).mu

    def wall_pressure(self, r):
        """Pressure on a wall at radius r; zero once the wall loses contact."""
        if not np.isfinite(r) or r <= 0.0:
            raise ValueError(f"wall radius must be positive, got {r}")
        if r > self._r_star_or_inf():
            return 0.0
        return self.edge_value(r) ** 2 / (4.0 * r)

    def free_energy(self, R):
        """Excess energy of the pushed gas relative to the relaxed one."""
        if not np.isfinite(R) or R <= 0.0:
            raise ValueError(f"wall radius must be positive, got {R}")
        rs = self._r_star_or_inf()
        if R >= rs:
            return 0.0
        if not np.isfinite(rs):
            raise BracketError("free energy needs a finite critical radius")
        return 0.5 * adaptive_quad(
            lambda r: self.edge_value(r) ** 2 / r, R, rs, rtol=1e-10)

    def free_energy_derivative(self, R):
        if not np.isfinite(R) or R <= 0.0:
            raise ValueError(f"wall radius must be positive, got {R}")
        if R >= self._r_star_or_inf():
            return 0.0
        return -self.edge_value(R) ** 2 / (2.0 * R)

    def edge_slope(self):
        """d/dr P_r(r) at R*, by symmetric differences plus Richardson."""
        rs = self.r_star
        return richardson_slope(self.edge_value, rs, 1e-5 * rs)

    def third_derivative_limit(self):
        """lim_{R -> R*-} F'''(R) = -[d/dr P_r(r)|_{R*}]^2 / R*."""
        return -self.edge_slope() ** 2 / self.r_star


def critical_radius(pot, tol=COEFF_TOL):
    return LogGas(pot, tol=tol).r_star


def chemical_potential(pot, R):
    return LogGas(pot).chemical_potential(R)


def wall_pressure(pot, r):
    return LogGas(pot).wall_pressure(r)


def free_energy(pot, R):
    return LogGas(pot).free_energy(R)


def density(eq, x):
    return eq.density(x)


def euler_lagrange_residual(eq, pot, grid):
    """Worst deviation of the effective potential from mu on interior points.

    The effective potential of the equilibrium density is evaluated term by
    term through the logarithmic moments of the edge polynomial,

        -log(S/2) + sum_{n>=1} (a_n / n) T_n(x/S) + v(|x|),   S = support,

    with v evaluated exactly, so the residual measures the truncation of the
    potential expansion (and vanishes identically for polynomial v).
    """
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    S = eq.support
    if np.any(np.abs(grid) >= S):
        raise ValueError("residual grid must consist of interior points |x| < support")
    a = eq.edge.coeffs
    worst = 0.0
    for x in grid:
        acc = -math.log(S / 2.0)
        for n in range(1, a.size):
            if a[n] != 0.0:
                acc += a[n] * chebyshev_log_moment(n, x / S)
        val = acc + float(pot.v(abs(x)))
        worst = max(worst, abs(val - eq.mu))
    return worst


# ---------------------------------------------------------------------------
# single hard wall golden models


@dataclass(frozen=True)
class SingleWallModel:
    """Rate function of a gas with one hard wall at position b.

    pressure(b) is the force per unit length on the wall; the rate follows
    from integrating it back to the critical position b_star.  When a closed
    form of the rate exists it is preferred and the quadrature route stays
    available for cross-checks.
    """

    name: str
    b_star: float

    def pressure(self, u):
        raise NotImplementedError

    def rate_quadrature(self, b):
        if b >= self.b_star:
            return 0.0
        return adaptive_quad(self.pressure, b, self.b_star, rtol=1e-11)

    def rate(self, b):
        return self.rate_quadrature(b)

    # protocol shared with the transition module
    @property
    def r_star(self):
        return self.b_star

    @property
    def label(self):
        return self.name

    def free_energy(self, b):
        return self.rate(b)

    def free_energy_derivative(self, b):
        if b >= self.b_star:
            return 0.0
        return -self.pressure(b)

    def third_derivative_limit(self):
        """-p''(b_star) by a five-point stencil with one Richardson step."""
        bs = self.b_star

        def second(h):
            pts = np.array([self.pressure(bs + k * h) for k in range(-4, 1)])
            return stencil5_second(pts, h)

        h = 1e-3 * bs
        return -(2.0 * second(0.5 * h) - second(h))


class _SemicircleWall(SingleWallModel):
    """Semicircle gas (quadratic well, unit mean-square edge at sqrt(2))
    pushed from the right by a single hard wall."""

    def __init__(self):
        super().__init__(name="gue_wall", b_star=math.sqrt(2.0))

    def support_left(self, b):
        return -(2.0 * math.sqrt(b * b + 6.0) - b) / 3.0

    def pressure(self, u):
        if u > self.b_star:
            return 0.0
        s = math.sqrt(u * u + 6.0)
        return (u**3 + s * u * u + 6.0 * s - 18.0 * u) / 27.0

    def density(self, b, x):
        a = self.support_left(b)
        xa = np.asarray(x, dtype=float)
        out = np.zeros_like(xa)
        inside = (xa > a) & (xa < b)
        xi = xa[inside]
        out[inside] = np.sqrt((xi - a) / (b - xi)) * (b - a - 2.0 * xi) / (2.0 * np.pi)
        return out if xa.ndim else float(out)


class _SquareCovarianceWall(SingleWallModel):
    """Unit-aspect covariance gas with a hard wall at b <= 4; the rate has
    the closed form -b^2/64 + b/4 - log(b/4)/2 - 3/4."""

    def __init__(self):
        super().__init__(name="wishart_c1", b_star=4.0)

    def pressure(self, u):
        if u <= 0.0:
            raise ValueError("wall position must be positive")
        if u > self.b_star:
            return 0.0
        return (u * u - 8.0 * u + 16.0) / (32.0 * u)

    def rate(self, b):
        if b <= 0.0:
            raise ValueError("wall position must be positive")
        if b >= self.b_star:
            return 0.0
        return -b * b / 64.0 + b / 4.0 - 0.5 * math.log(b / 4.0) - 0.75

    def density(self, b, x):
        xa = np.asarray(x, dtype=float)
        out = np.zeros_like(xa)
        inside = (xa > 0.0) & (xa < b)
        xi = xa[inside]
        out[inside] = (b / 2.0 + 2.0 - xi) / (2.0 * np.pi * np.sqrt(xi * (b - xi)))
        return out if xa.ndim else float(out)


SINGLE_WALL_MODELS = {
    "gue_wall": _SemicircleWall(),
    "wishart_c1": _SquareCovarianceWall(),
}


def single_wall_rate(model, b):
    """(pressure callable, rate value) for a named single-wall model."""
    if model not in SINGLE_WALL_MODELS:
        raise ValueError(f"unknown single-wall model {model!r}; "
                         f"choose from {sorted(SINGLE_WALL_MODELS)}")
    m = SINGLE_WALL_MODELS[model]
    return m.pressure, m.rate(b)
