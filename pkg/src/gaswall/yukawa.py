"""Screened repulsive gas in d dimensions confined by a hard spherical wall.

The pair interaction is the Green function of (-a^2 Laplacian + m^2):

    phi_d(r) = (m^2 / 2a^2)^nu / (a^2 Gamma(d/2)) * z^(-nu) K_nu(z),
    nu = d/2 - 1,  z = m r / a,

whose m -> 0 limit is the Coulomb kernel and whose a -> 0 limit collapses to
a delta (Thomas-Fermi).  All three kinds share one surface: the equilibrium
density inside a wall of radius R is an absolutely continuous bulk part plus
a surface charge c(R) >= 0 on the wall, with chemical potential mu(R).  The
pair (mu, c) solves a 2x2 linear system; both unknowns have closed forms in
the Bessel ratio phi/phi' = -(a/m) K_nu(z)/K_{nu+1}(z).

The excess free energy of the pushed phase integrates the squared surface
charge,

    F(R) = (1/2) int_R^{R*} c(r)^2 / (a^2 r^(d-1)) dr,

(Thomas-Fermi replaces c/a by m r^(d-1) (mu - v)), so F and two derivatives
vanish at the critical radius R* where c first hits zero, while

    F'''(R*-) = -c'(R*)^2 / (a^2 R*^(d-1))

stays strictly negative: the wall transition is third order in every d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gamma as _gamma
from scipy.special import ive as _ive
from scipy.special import iv as _iv
from scipy.special import kv as _kv
from scipy.special import kve as _kve

from .errors import BracketError
from .numerics import adaptive_quad, bisect_root, richardson_slope
from .potentials import RadialPotential

R_STAR_MAX = 1e6


@dataclass(frozen=True)
class YukawaParams:
    """Kernel parameters: dimension d in 1..6, gradient cost a, screening m.

    kind is derived: a, m > 0 is the screened (yukawa) gas, m = 0 the
    Coulomb gas, a = 0 the Thomas-Fermi gas.  a = m = 0 is rejected.
    """

    d: int
    a: float = 1.0
    m: float = 1.0

    def __post_init__(self):
        if int(self.d) != self.d or not 1 <= self.d <= 6:
            raise ValueError(f"dimension must be an integer in 1..6, got {self.d}")
        object.__setattr__(self, "d", int(self.d))
        for name in ("a", "m"):
            val = float(getattr(self, name))
            if not np.isfinite(val) or val < 0.0:
                raise ValueError(f"{name} must be finite and >= 0, got {val}")
            object.__setattr__(self, name, val)
        if self.a == 0.0 and self.m == 0.0:
            raise ValueError("a and m cannot both vanish")

    @property
    def kind(self):
        if self.a == 0.0:
            return "thomas_fermi"
        if self.m == 0.0:
            return "coulomb"
        return "yukawa"

    @property
    def nu(self):
        return 0.5 * self.d - 1.0

    @property
    def omega(self):
        """Surface area of the unit sphere in R^d."""
        return 2.0 * math.pi ** (0.5 * self.d) / _gamma(0.5 * self.d)

    @property
    def label(self):
        if self.kind == "coulomb":
            return f"coulomb(d={self.d},a={self.a:g})"
        if self.kind == "thomas_fermi":
            return f"thomas_fermi(d={self.d},m={self.m:g})"
        return f"yukawa(d={self.d},a={self.a:g},m={self.m:g})"


def interaction(params, r):
    """Pair kernel phi_d(r).  r = 0 is allowed only in d = 1."""
    d, a, m = params.d, params.a, params.m
    if params.kind == "thomas_fermi":
        raise ValueError("the Thomas-Fermi kernel is a delta; no pointwise value")
    ra = np.asarray(r, dtype=float)
    scalar = ra.ndim == 0
    rv = np.atleast_1d(ra).astype(float)
    if np.any(rv < 0.0) or not np.all(np.isfinite(rv)):
        raise ValueError("separation must be finite and >= 0")
    if np.any(rv == 0.0) and d >= 2:
        raise ValueError(f"kernel is singular at r = 0 for d = {d}")
    if params.kind == "coulomb":
        if d == 2:
            out = -np.log(rv) / a**2
        else:
            out = rv ** (2 - d) / ((d - 2) * a**2)
    else:
        nu = params.nu
        z = m * rv / a
        if d == 1:
            out = np.exp(-z) / (a * m)
        else:
            B = (m * m / (2.0 * a * a)) ** nu / (a * a * _gamma(0.5 * d))
            out = B * z ** (-nu) * _kv(nu, z)
    return float(out[0]) if scalar else out


def shell_factor(params, r):
    """Interior factor psi_d(r) of the spherical-shell average (yukawa only).

    psi_d(r) = Gamma(d/2) (2/z)^nu I_nu(z), continuous at r = 0 with value 1.
    """
    if params.kind != "yukawa":
        raise ValueError("shell factor is defined for the screened kernel only")
    d, a, m = params.d, params.a, params.m
    ra = np.asarray(r, dtype=float)
    scalar = ra.ndim == 0
    rv = np.atleast_1d(ra).astype(float)
    if np.any(rv < 0.0) or not np.all(np.isfinite(rv)):
        raise ValueError("radius must be finite and >= 0")
    z = m * rv / a
    out = np.ones_like(z)
    pos = z > 0.0
    if np.any(pos):
        zp = z[pos]
        if d == 1:
            out[pos] = np.cosh(zp)
        else:
            nu = params.nu
            out[pos] = _gamma(0.5 * d) * (2.0 / zp) ** nu * _iv(nu, zp)
    return float(out[0]) if scalar else out


def shell_average(params, x_norm, r):
    """Average of the kernel over a sphere of radius r seen from |x| = x_norm.

    Screened kernels factorize as psi(min) phi(max); the Coulomb kernel obeys
    the plain Newton theorem, phi(max).  Overflow-safe via scaled Bessels.
    """
    if x_norm < 0.0 or r < 0.0:
        raise ValueError("radii must be >= 0")
    kind = params.kind
    if kind == "thomas_fermi":
        raise ValueError("no shell average for the delta kernel")
    lo, hi = min(x_norm, r), max(x_norm, r)
    if kind == "coulomb":
        return interaction(params, hi)
    d, a, m = params.d, params.a, params.m
    if hi == 0.0:
        return interaction(params, 0.0) if d == 1 else math.inf
    z_lo, z_hi = m * lo / a, m * hi / a
    nu = params.nu
    if d == 1:
        # cosh(z_lo) e^{-z_hi} / (a m), with the exponentials combined
        return float(0.5 * (np.exp(z_lo - z_hi) + np.exp(-z_lo - z_hi)) / (a * m))
    B = (m * m / (2.0 * a * a)) ** nu / (a * a * _gamma(0.5 * d))
    if z_lo == 0.0:
        psi_scaled, expo = 1.0, -z_hi
    else:
        psi_scaled = _gamma(0.5 * d) * (2.0 / z_lo) ** nu * _ive(nu, z_lo)
        expo = z_lo - z_hi
    phi_scaled = B * z_hi ** (-nu) * _kve(nu, z_hi)
    return float(psi_scaled * phi_scaled * np.exp(expo))


def kernel_ratio(params, r):
    """phi_d(r) / phi_d'(r), the cancellation-safe Bessel ratio.

    Screened: -(a/m) K_nu(z)/K_{nu+1}(z) via exponentially scaled K.
    Coulomb: r log r in d = 2, -r/(d-2) otherwise.
    """
    if r <= 0.0 or not np.isfinite(r):
        raise ValueError("radius must be positive and finite")
    d, a, m = params.d, params.a, params.m
    if params.kind == "coulomb":
        return r * math.log(r) if d == 2 else -r / (d - 2)
    if params.kind == "thomas_fermi":
        return -a / m if a > 0 else 0.0
    z = m * r / a
    nu = params.nu
    return -(a / m) * _kve(nu, z) / _kve(nu + 1.0, z)


class YukawaGas:
    """Equilibrium family for one kernel and one confining potential."""

    def __init__(self, params: YukawaParams, pot: RadialPotential):
        pot.check()
        self.params = params
        self.pot = pot
        self._r_star = None
        self._fe_cache = lru_cache(maxsize=4096)(self._free_energy_impl)

    @property
    def label(self):
        return f"{self.params.label};{self.pot.label}"

    # -- closed forms -----------------------------------------------------

    def _charge_raw(self, R):
        """Surface charge before clamping; negative once R exceeds R*."""
        p = self.params
        d, a, m = p.d, p.a, p.m
        if p.kind == "coulomb":
            return 1.0 - a * a * self.pot.dv(R) * R ** (d - 1)
        if p.kind == "thomas_fermi":
            return 0.0
        t = kernel_ratio(p, R)
        J = self.pot.radial_moment(d, R)
        num = (1.0
               - (a * a - (m * m * R / d) * t) * self.pot.dv(R) * R ** (d - 1)
               - (m * m * R**d / d) * self.pot.v(R)
               + m * m * J)
        den = 1.0 - (m * m * R / (a * a * d)) * t
        return num / den

    def _charge_raw_alt(self, R):
        """Same charge through the a N / (a D) arrangement; test hook."""
        p = self.params
        d, a, m = p.d, p.a, p.m
        if p.kind != "yukawa":
            return self._charge_raw(R)
        t = kernel_ratio(p, R)
        J = self.pot.radial_moment(d, R)
        num = (1.0
               - (a * a - (m * m * R / d) * t) * self.pot.dv(R) * R ** (d - 1)
               - (m * m * R**d / d) * self.pot.v(R)
               + m * m * J)
        den = a - (m * m * R / d) * t / a
        return a * num / den

    def excess_charge(self, R):
        """Surface charge c(R) >= 0; exactly 0 from R* on (and for a = 0)."""
        self._check_radius(R)
        if self.params.kind == "thomas_fermi":
            return 0.0
        if R >= self._r_star_or_inf():
            return 0.0
        return max(0.0, self._charge_raw(R))

    def _mu_pushed(self, R):
        p = self.params
        d, a, m = p.d, p.a, p.m
        if p.kind == "thomas_fermi":
            J = self.pot.radial_moment(d, R)
            return (d / R**d) * (1.0 / (m * m) + J)
        t = kernel_ratio(p, R)
        c = max(0.0, self._charge_raw(R))
        return self.pot.v(R) - t * (self.pot.dv(R) + c / (a * a * R ** (d - 1)))

    def chemical_potential(self, R):
        """Chemical potential mu(R); constant at its R* value once pulled."""
        self._check_radius(R)
        rs = self._r_star_or_inf()
        if R < rs:
            return self._mu_pushed(R)
        p = self.params
        if p.kind == "thomas_fermi":
            return self.pot.v(rs)
        return self.pot.v(rs) - kernel_ratio(p, rs) * self.pot.dv(rs)

    # -- critical radius ----------------------------------------------------

    @property
    def r_star(self):
        if self._r_star is None:
            self._r_star = self._solve_r_star()
        return self._r_star

    def _r_star_or_inf(self):
        try:
            return self.r_star
        except BracketError:
            return math.inf

    def _pull_indicator(self, R):
        """A function decreasing through zero at R*."""
        p = self.params
        d, a, m = p.d, p.a, p.m
        if p.kind == "coulomb":
            return 1.0 - a * a * self.pot.dv(R) * R ** (d - 1)
        if p.kind == "thomas_fermi":
            return 1.0 - m * m * (self.pot.v(R) * R**d / d
                                  - self.pot.radial_moment(d, R))
        return self._charge_raw(R)

    def _solve_r_star(self):
        g = self._pull_indicator
        lo = 1e-8
        if g(lo) <= 0.0:
            raise BracketError("wall charge nonpositive already at r = 1e-8")
        hi = 1.0
        while g(hi) > 0.0:
            lo, hi = hi, 2.0 * hi
            if hi > R_STAR_MAX:
                raise BracketError(
                    "no critical radius below 1e6: potential grows too slowly")
        return bisect_root(g, lo, hi, xtol=1e-13)

    # -- densities, energies, pressure --------------------------------------

    def bulk_density(self, R, r):
        """Per-unit-volume bulk density of the equilibrium at wall radius R."""
        self._check_radius(R)
        p = self.params
        d, a, m = p.d, p.a, p.m
        mu = self.chemical_potential(R)
        support = min(R, self._r_star_or_inf())
        ra = np.asarray(r, dtype=float)
        scalar = ra.ndim == 0
        rv = np.atleast_1d(ra).astype(float)
        if np.any(rv < 0.0):
            raise ValueError("radius must be >= 0")
        out = np.zeros_like(rv)
        inside = rv <= support * (1.0 + 1e-12)
        ri = rv[inside]
        if p.kind == "thomas_fermi":
            val = m * m * (mu - self.pot.v(ri))
        else:
            # v'(r)/r extends continuously to v''(0) at the origin
            ratio = np.empty_like(ri)
            at0 = ri == 0.0
            ratio[~at0] = self.pot.dv(ri[~at0]) / ri[~at0]
            if np.any(at0):
                ratio[at0] = self.pot.ddv(0.0)
            lap = a * a * (self.pot.ddv(ri) + (d - 1) * ratio)
            if p.kind == "coulomb":
                val = lap
            else:
                val = m * m * (mu - self.pot.v(ri)) + lap
        out[inside] = val / p.omega
        return float(out[0]) if scalar else out

    def _free_energy_impl(self, R):
        p = self.params
        rs = self.r_star
        if R >= rs:
            return 0.0
        d, a, m = p.d, p.a, p.m
        if p.kind == "thomas_fermi":
            f = lambda r: (m * m / 2.0) * (self._mu_pushed(r) - self.pot.v(r)) ** 2 \
                * r ** (d - 1)
        else:
            f = lambda r: self._charge_raw(r) ** 2 / (2.0 * a * a * r ** (d - 1))
        return adaptive_quad(f, R, rs, rtol=1e-10)

    def free_energy(self, R):
        """Excess free energy F(R); zero in the pulled phase."""
        self._check_radius(R)
        return self._fe_cache(float(R))

    def free_energy_derivative(self, R):
        self._check_radius(R)
        p = self.params
        if R >= self._r_star_or_inf():
            return 0.0
        d, a, m = p.d, p.a, p.m
        if p.kind == "thomas_fermi":
            return -(m * m / 2.0) * (self._mu_pushed(R) - self.pot.v(R)) ** 2 \
                * R ** (d - 1)
        return -self._charge_raw(R) ** 2 / (2.0 * a * a * R ** (d - 1))

    def wall_pressure(self, r):
        """Electrostatic pressure of the surface charge on the wall."""
        p = self.params
        if p.kind == "thomas_fermi":
            raise ValueError("wall pressure needs a surface charge (a > 0)")
        self._check_radius(r)
        if r >= self._r_star_or_inf():
            return 0.0
        d, a = p.d, p.a
        c = self._charge_raw(r)
        return c * c / (2.0 * p.omega * a * a * r ** (2 * (d - 1)))

    # -- transition protocol -------------------------------------------------

    def edge_slope(self):
        """Derivative at R* of the quantity whose square drives F'''."""
        rs = self.r_star
        p = self.params
        h = 1e-5 * rs
        if p.kind == "thomas_fermi":
            w = lambda r: self._mu_pushed(r) - self.pot.v(r)
            return richardson_slope(w, rs, h)
        return richardson_slope(self._charge_raw, rs, h)

    def third_derivative_limit(self):
        rs = self.r_star
        p = self.params
        s = self.edge_slope()
        if p.kind == "thomas_fermi":
            return -p.m**2 * s * s * rs ** (p.d - 1)
        return -s * s / (p.a**2 * rs ** (p.d - 1))

    # -- Euler-Lagrange ------------------------------------------------------

    def euler_lagrange_residual(self, R, grid):
        """Worst deviation of the effective potential from mu (yukawa kind).

        The bulk density is folded against the kernel through the shell
        theorem, the surface charge contributes c phi(Rc) psi(z), and the
        confinement is added pointwise; the result must be flat at mu inside
        the support.
        """
        p = self.params
        if p.kind != "yukawa":
            raise ValueError("the residual integrals need the screened kernel")
        self._check_radius(R)
        rs = self._r_star_or_inf()
        if not np.isfinite(rs):
            raise BracketError("residual needs a finite critical radius")
        rc = min(R, rs)
        mu = self.chemical_potential(R)
        c = self.excess_charge(R)
        omega = p.omega
        d = p.d

        def f(r):
            return omega * self.bulk_density(R, r) * r ** (d - 1)

        grid = np.atleast_1d(np.asarray(grid, dtype=float))
        if np.any(grid <= 0.0) or np.any(grid >= rc):
            raise ValueError("residual grid must lie strictly inside (0, support)")
        phi_rc = interaction(p, rc)
        worst = 0.0
        for z in grid:
            inner = adaptive_quad(lambda r: shell_factor(p, r) * f(r), 0.0, z,
                                  rtol=1e-9, atol=1e-12)
            outer = adaptive_quad(lambda r: interaction(p, r) * f(r), z, rc,
                                  rtol=1e-9, atol=1e-12)
            val = (interaction(p, z) * inner + shell_factor(p, z) * outer
                   + c * phi_rc * shell_factor(p, z) + self.pot.v(z) - mu)
            worst = max(worst, abs(val))
        return worst

    @staticmethod
    def _check_radius(R):
        if not np.isfinite(R) or R <= 0.0:
            raise ValueError(f"wall radius must be positive, got {R}")


# -- module-level op wrappers ------------------------------------------------


def excess_charge(params, pot, R):
    return YukawaGas(params, pot).excess_charge(R)


def chemical_potential(params, pot, R):
    return YukawaGas(params, pot).chemical_potential(R)


def critical_radius(params, pot):
    return YukawaGas(params, pot).r_star


def bulk_density(params, pot, R, r):
    return YukawaGas(params, pot).bulk_density(R, r)


def free_energy(params, pot, R):
    return YukawaGas(params, pot).free_energy(R)


def wall_pressure(params, pot, r):
    return YukawaGas(params, pot).wall_pressure(r)


def euler_lagrange_residual(params, pot, R, grid):
    return YukawaGas(params, pot).euler_lagrange_residual(R, grid)


# -- limit consistency ---------------------------------------------------------


@dataclass(frozen=True)
class LimitReport:
    """Relative deviations between a screened gas near a singular limit and
    the corresponding closed-form branch."""

    probe: str
    eps: float
    d: int
    r_star_rel: float
    free_energy_rel: float
    charge_rel: float

    @property
    def max_rel(self):
        return max(self.r_star_rel, self.free_energy_rel, self.charge_rel)


def limit_consistency(pot, d, probe, eps=1e-4, fractions=(0.5, 0.8)):
    """Compare yukawa(m=eps) against coulomb, or yukawa(a=eps) against
    thomas_fermi, on the critical radius, the free energy at fractions of
    R*, and the surface charge (scaled by a for the Thomas-Fermi probe).

    F and c are sampled at the same fraction of each branch's own critical
    radius.  F vanishes cubically at R*, so a comparison at one absolute
    radius would mostly re-measure the R* shift (already reported on its
    own) amplified by 3/(1 - fraction).
    """
    if probe == "coulomb":
        near = YukawaGas(YukawaParams(d=d, a=1.0, m=eps), pot)
        ref = YukawaGas(YukawaParams(d=d, a=1.0, m=0.0), pot)
    elif probe == "thomas_fermi":
        near = YukawaGas(YukawaParams(d=d, a=eps, m=1.0), pot)
        ref = YukawaGas(YukawaParams(d=d, a=0.0, m=1.0), pot)
    else:
        raise ValueError(f"probe must be 'coulomb' or 'thomas_fermi', got {probe!r}")
    rs_near, rs_ref = near.r_star, ref.r_star
    r_star_rel = abs(rs_near - rs_ref) / rs_ref
    f_rel = 0.0
    c_rel = 0.0
    for frac in fractions:
        Ra, Rb = frac * rs_near, frac * rs_ref
        fa, fb = near.free_energy(Ra), ref.free_energy(Rb)
        f_rel = max(f_rel, abs(fa - fb) / abs(fb))
        if probe == "coulomb":
            ca, cb = near.excess_charge(Ra), ref.excess_charge(Rb)
        else:
            ca = near.excess_charge(Ra) / near.params.a
            cb = (near.params.m * Rb ** (d - 1)
                  * (ref.chemical_potential(Rb) - pot.v(Rb)))
        c_rel = max(c_rel, abs(ca - cb) / abs(cb))
    return LimitReport(probe=probe, eps=eps, d=d, r_star_rel=r_star_rel,
                       free_energy_rel=f_rel, charge_rel=c_rel)
