"""Screened, Coulomb and Thomas-Fermi gases against hand-computed values.

Most scalar oracles below were worked out by hand for the harmonic well
v = r^2/2 and frozen: the d = 3 screened gas with a = m = 1 has

    c(1) = -1/5  (before clamping), and R* solving
    1 - R^3 - R^5/(3 (1 + R)) - R^5/15 = 0  ->  0.9384011737000764,

the d = 2 Coulomb gas is the classical disk with c(R) = 1 - R^2 and
F(R) = -3/8 - log(R)/2 + R^2/2 - R^4/8, and the d = 1 Thomas-Fermi gas
has mu(R) = 1/(m^2 R) + ... = 7/6 at R = 1 and R* = 3^(1/3).
"""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaswall.errors import BracketError
from gaswall.numerics import adaptive_quad
from gaswall.potentials import monomial_sum, quadratic, quartic
from gaswall.special import bessel_k
from gaswall.yukawa import (
    YukawaGas,
    YukawaParams,
    interaction,
    kernel_ratio,
    limit_consistency,
    shell_average,
    shell_factor,
)

mpmath.mp.dps = 30

POT = quadratic(0.5)
D3 = YukawaParams(d=3, a=1.0, m=1.0)
GAS3 = YukawaGas(D3, POT)
GINUE = YukawaGas(YukawaParams(d=2, a=1.0, m=0.0), POT)
TF1 = YukawaGas(YukawaParams(d=1, a=0.0, m=1.0), POT)

R_STAR_D3 = 0.9384011737000764


def ginue_free_energy(R):
    if R >= 1.0:
        return 0.0
    return -0.375 - 0.5 * math.log(R) + R * R / 2.0 - R**4 / 8.0


# -- kernel ---------------------------------------------------------------------


@pytest.mark.parametrize("d", (1, 2, 3, 4, 5, 6))
@pytest.mark.parametrize("a,m", ((1.0, 1.0), (0.5, 2.0), (2.0, 0.7)))
def test_interaction_matches_bessel_form(d, a, m):
    """phi = (m^2/2a^2)^nu / (a^2 Gamma(d/2)) z^-nu K_nu(z) in every d."""
    params = YukawaParams(d=d, a=a, m=m)
    nu = 0.5 * d - 1.0
    for r in (0.3, 1.0, 2.5):
        z = m * r / a
        want = float(
            (mpmath.mpf(m) ** 2 / (2 * mpmath.mpf(a) ** 2)) ** nu
            / (a * a * mpmath.gamma(0.5 * d))
            * mpmath.mpf(z) ** (-nu) * mpmath.besselk(nu, z))
        assert interaction(params, r) == pytest.approx(want, rel=1e-12)


def test_interaction_odd_d_exponential_forms():
    p1 = YukawaParams(d=1, a=0.5, m=2.0)
    r = 0.7
    assert interaction(p1, r) == pytest.approx(
        math.exp(-2.0 * r / 0.5) / (0.5 * 2.0), rel=1e-14)
    assert interaction(p1, 0.0) == pytest.approx(1.0, rel=1e-14)
    p3 = YukawaParams(d=3, a=1.0, m=1.0)
    assert interaction(p3, 2.0) == pytest.approx(
        math.exp(-2.0) / 2.0, rel=1e-14)
    p5 = YukawaParams(d=5, a=1.0, m=1.0)
    assert interaction(p5, 2.0) == pytest.approx(
        3.0 * math.exp(-2.0) / 24.0, rel=1e-13)


def test_interaction_coulomb_forms():
    c2 = YukawaParams(d=2, a=2.0, m=0.0)
    assert interaction(c2, 0.5) == pytest.approx(-math.log(0.5) / 4.0, rel=1e-14)
    c3 = YukawaParams(d=3, a=1.0, m=0.0)
    assert interaction(c3, 2.0) == pytest.approx(0.5, rel=1e-14)
    c1 = YukawaParams(d=1, a=1.0, m=0.0)
    assert interaction(c1, 2.0) == pytest.approx(-2.0, rel=1e-14)


def test_interaction_rejections():
    with pytest.raises(ValueError):
        interaction(YukawaParams(d=1, a=0.0, m=1.0), 1.0)
    with pytest.raises(ValueError):
        interaction(D3, 0.0)
    with pytest.raises(ValueError):
        interaction(D3, -1.0)


def test_params_validation():
    with pytest.raises(ValueError):
        YukawaParams(d=0)
    with pytest.raises(ValueError):
        YukawaParams(d=7)
    with pytest.raises(ValueError):
        YukawaParams(d=2, a=0.0, m=0.0)
    with pytest.raises(ValueError):
        YukawaParams(d=2, a=-1.0)
    assert YukawaParams(d=2, a=1.0, m=0.0).kind == "coulomb"
    assert YukawaParams(d=2, a=0.0, m=1.0).kind == "thomas_fermi"


@pytest.mark.parametrize("d", (2, 3, 4))
def test_kernel_ratio_is_phi_over_phi_prime(d):
    params = YukawaParams(d=d, a=1.3, m=0.8)
    r, h = 1.1, 1e-5
    phi_prime = (interaction(params, r + h) - interaction(params, r - h)) / (2 * h)
    want = interaction(params, r) / phi_prime
    assert kernel_ratio(params, r) == pytest.approx(want, rel=1e-6)


def test_kernel_ratio_coulomb_forms():
    assert kernel_ratio(YukawaParams(d=2, a=1.0, m=0.0), 0.5) == pytest.approx(
        0.5 * math.log(0.5), rel=1e-14)
    assert kernel_ratio(YukawaParams(d=3, a=1.0, m=0.0), 0.5) == pytest.approx(
        -0.5, rel=1e-14)
    # d = 1 Coulomb: phi = -r/a^2, so phi/phi' = +r
    assert kernel_ratio(YukawaParams(d=1, a=1.0, m=0.0), 0.5) == pytest.approx(
        0.5, rel=1e-14)


def test_kernel_ratio_large_argument_stable():
    # both K factors underflow unscaled near z = 700; the ratio must not
    t = kernel_ratio(D3, 700.0)
    assert math.isfinite(t)
    assert t == pytest.approx(-1.0, rel=1e-2)


# -- shell averages -------------------------------------------------------------


def test_shell_average_frozen_product():
    # d = 3, a = m = 1, x = 1 inside a shell of radius 2:
    # psi(1) phi(2) = sinh(1) * e^-2 / 2
    want = math.sinh(1.0) * math.exp(-2.0) / 2.0
    assert shell_average(D3, 1.0, 2.0) == pytest.approx(want, rel=1e-13)
    assert shell_average(D3, 2.0, 1.0) == pytest.approx(want, rel=1e-13)


def test_shell_average_against_angular_quadrature():
    """(1/2) int_0^pi phi(sqrt(x^2+r^2-2xr u)) sin du for d = 3."""
    x, r = 0.6, 1.1

    def direct():
        f = lambda u: interaction(
            D3, math.sqrt(x * x + r * r - 2.0 * x * r * u))
        return 0.5 * float(mpmath.quad(f, [-1.0, 1.0]))

    assert shell_average(D3, x, r) == pytest.approx(direct(), rel=1e-10)


def test_shell_average_overflow_safe():
    # naive cosh(300) * K(301) would overflow to inf * 0
    val = shell_average(D3, 300.0, 301.0)
    assert math.isfinite(val) and val > 0.0
    want = math.exp(-1.0) / (2.0 * 300.0 * 301.0)  # sinh ~ e^z/2 regime
    assert val == pytest.approx(want, rel=1e-3)


def test_shell_factor_at_origin():
    assert shell_factor(D3, 0.0) == 1.0
    assert shell_factor(YukawaParams(d=1, a=1.0, m=2.0), 0.5) == pytest.approx(
        math.cosh(1.0), rel=1e-14)


def test_shell_average_coulomb_is_newton():
    c3 = YukawaParams(d=3, a=1.0, m=0.0)
    assert shell_average(c3, 0.4, 2.0) == interaction(c3, 2.0)
    assert shell_average(c3, 3.0, 2.0) == interaction(c3, 3.0)


# -- charge, chemical potential, critical radius --------------------------------


def test_charge_raw_hand_value():
    # d = 3, a = m = 1, v = r^2/2 at R = 1: t = -K_{1/2}/K_{3/2} = -1/2,
    # J = 1/10, and the closed form collapses to -1/5
    assert kernel_ratio(D3, 1.0) == pytest.approx(-0.5, rel=1e-13)
    assert GAS3._charge_raw(1.0) == pytest.approx(-0.2, rel=1e-12)
    assert GAS3._charge_raw_alt(1.0) == pytest.approx(-0.2, rel=1e-12)


@given(
    d=st.integers(1, 4),
    a=st.floats(0.4, 2.0),
    m=st.floats(0.4, 2.0),
    R=st.floats(0.2, 1.5),
)
@settings(max_examples=60, deadline=None)
def test_charge_arrangements_agree(d, a, m, R):
    # abs floor: the raw charge crosses zero at R*, where a pure relative
    # comparison of two rounding patterns would be vacuous
    gas = YukawaGas(YukawaParams(d=d, a=a, m=m), POT)
    assert gas._charge_raw(R) == pytest.approx(
        gas._charge_raw_alt(R), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("d,a,m", ((1, 1.0, 1.0), (2, 0.5, 2.0), (3, 2.0, 0.5)))
def test_linear_system_rows(d, a, m):
    """(mu, c) solves the boundary equation and the charge normalization.

    Row 1: (phi'/phi) mu + c / (a^2 R^(d-1)) = (phi'/phi) v(R) - v'(R)
    Row 2: (m^2 R^d / d) mu + c = 1 - a^2 v'(R) R^(d-1) + m^2 J(R)
    """
    params = YukawaParams(d=d, a=a, m=m)
    for pot in (quadratic(0.5), quartic(0.25)):
        gas = YukawaGas(params, pot)
        rs = gas.r_star
        for R in np.linspace(0.3, 0.9, 5) * rs:
            mu = gas.chemical_potential(R)
            c = gas.excess_charge(R)
            t = kernel_ratio(params, R)
            lhs1 = mu / t + c / (a * a * R ** (d - 1))
            rhs1 = pot.v(R) / t - pot.dv(R)
            assert lhs1 == pytest.approx(rhs1, rel=1e-10)
            lhs2 = (m * m * R**d / d) * mu + c
            rhs2 = (1.0 - a * a * pot.dv(R) * R ** (d - 1)
                    + m * m * pot.radial_moment(d, R))
            assert lhs2 == pytest.approx(rhs2, rel=1e-10)


@pytest.mark.parametrize("d", (2, 3, 4))
def test_system_determinant_identity(d):
    """1 - (m^2 R / a^2 d) t = z K_{nu+2} / (d K_{nu+1}), manifestly > 0."""
    a, m, R = 1.2, 0.9, 1.4
    params = YukawaParams(d=d, a=a, m=m)
    t = kernel_ratio(params, R)
    den = 1.0 - (m * m * R / (a * a * d)) * t
    z = m * R / a
    nu = params.nu
    want = z * bessel_k(nu + 2.0, z) / (d * bessel_k(nu + 1.0, z))
    assert den == pytest.approx(want, rel=1e-12)
    assert den > 1.0


def test_charge_approaches_one_at_origin():
    assert GAS3.excess_charge(1e-6) == pytest.approx(1.0, abs=1e-5)
    assert GINUE.excess_charge(1e-8) == pytest.approx(1.0, abs=1e-10)


def test_critical_radius_d3_hand_equation():
    rs = GAS3.r_star
    assert rs == pytest.approx(R_STAR_D3, abs=1e-12)
    # the pull indicator collapses to this polynomial relation at a = m = 1
    residual = 1.0 - rs**3 - rs**5 / (3.0 * (1.0 + rs)) - rs**5 / 15.0
    assert abs(residual) < 1e-12


def test_critical_radius_coulomb_and_tf():
    assert GINUE.r_star == pytest.approx(1.0, abs=1e-12)
    c3 = YukawaGas(YukawaParams(d=3, a=1.0, m=0.0), POT)
    assert c3.r_star == pytest.approx(1.0, abs=1e-12)
    assert TF1.r_star == pytest.approx(3.0 ** (1.0 / 3.0), abs=1e-12)


def test_no_critical_radius_when_potential_too_weak():
    gas = YukawaGas(YukawaParams(d=2, a=1.0, m=0.0), quadratic(1e-14))
    with pytest.raises(BracketError):
        gas.r_star


def test_charge_clamps_to_zero_when_pulled():
    assert GAS3.excess_charge(2.0) == 0.0
    assert GAS3.excess_charge(R_STAR_D3 + 1e-6) == 0.0


# -- Coulomb disk battery --------------------------------------------------------


def test_ginue_charge_exact():
    for R in np.linspace(0.1, 1.0, 10):
        assert GINUE.excess_charge(R) == max(0.0, 1.0 - R * R)


def test_ginue_chemical_potential():
    assert GINUE.chemical_potential(0.8) == pytest.approx(
        0.8**2 / 2.0 - math.log(0.8), rel=1e-14)
    assert GINUE.chemical_potential(1.0) == pytest.approx(0.5, rel=1e-14)
    assert GINUE.chemical_potential(3.0) == pytest.approx(0.5, rel=1e-14)


def test_ginue_bulk_density_uniform():
    r = np.linspace(0.0, 0.5, 6)
    np.testing.assert_allclose(GINUE.bulk_density(0.5, r), 1.0 / math.pi,
                               rtol=1e-14)
    # beyond the support the bulk vanishes
    assert GINUE.bulk_density(0.5, 0.9) == 0.0


@pytest.mark.parametrize("R", np.linspace(0.15, 0.99, 20))
def test_ginue_free_energy_closed_form(R):
    assert GINUE.free_energy(R) == pytest.approx(
        ginue_free_energy(R), rel=1e-8, abs=1e-15)


def test_ginue_frozen_values():
    assert GINUE.free_energy(0.5) == pytest.approx(0.08876109027997264, rel=1e-12)
    assert GINUE.free_energy_derivative(0.5) == pytest.approx(-0.5625, rel=1e-13)
    assert GINUE.wall_pressure(0.5) == pytest.approx(0.5625 / math.pi, rel=1e-13)
    assert GINUE.third_derivative_limit() == pytest.approx(-4.0, rel=1e-8)


def test_ginue_work_energy_balance():
    # pushing the wall in from R* stores exactly the integrated p dA work
    R = 0.5
    work = adaptive_quad(
        lambda r: GINUE.wall_pressure(r) * 2.0 * math.pi * r, R, 1.0,
        rtol=1e-11)
    assert GINUE.free_energy(R) == pytest.approx(work, rel=1e-10)


# -- screened gas global checks --------------------------------------------------


def test_total_mass_bulk_plus_surface():
    """Omega_d int rho r^(d-1) dr + c(R) must give the full unit charge."""
    for R in (0.5, 0.8):
        bulk = adaptive_quad(
            lambda r: GAS3.bulk_density(R, r) * r * r, 0.0, R, rtol=1e-11)
        total = D3.omega * bulk + GAS3.excess_charge(R)
        assert total == pytest.approx(1.0, rel=1e-9)


def test_pressure_matches_free_energy_derivative():
    R = 0.6
    assert GAS3.free_energy_derivative(R) == pytest.approx(
        -D3.omega * R**2 * GAS3.wall_pressure(R), rel=1e-12)


def test_free_energy_derivative_consistent_fd():
    R, h = 0.7, 1e-6
    fd = (GAS3.free_energy(R + h) - GAS3.free_energy(R - h)) / (2.0 * h)
    assert GAS3.free_energy_derivative(R) == pytest.approx(fd, rel=1e-7)


def test_free_energy_vanishes_from_r_star_on():
    assert GAS3.free_energy(R_STAR_D3) == 0.0
    assert GAS3.free_energy(5.0) == 0.0
    assert GAS3.free_energy_derivative(1.2) == 0.0


def test_euler_lagrange_residual_quadratic():
    rs = GAS3.r_star
    pushed = GAS3.euler_lagrange_residual(0.7, np.linspace(0.05, 0.65, 10))
    pulled = GAS3.euler_lagrange_residual(1.5, np.linspace(0.05, 0.9, 10) * rs)
    assert pushed < 1e-10
    assert pulled < 1e-10


def test_euler_lagrange_rejects_non_screened():
    with pytest.raises(ValueError):
        GINUE.euler_lagrange_residual(0.5, [0.2])


# -- Thomas-Fermi battery ---------------------------------------------------------


def test_tf_chemical_potential_and_density():
    assert TF1.chemical_potential(1.0) == pytest.approx(7.0 / 6.0, rel=1e-13)
    assert TF1.chemical_potential(10.0) == pytest.approx(
        3.0 ** (2.0 / 3.0) / 2.0, rel=1e-12)
    assert TF1.bulk_density(1.0, 0.5) == pytest.approx(25.0 / 48.0, rel=1e-13)


def test_tf_surface_charge_always_zero():
    assert TF1.excess_charge(0.3) == 0.0
    assert TF1.excess_charge(2.0) == 0.0


def test_tf_third_derivative():
    assert TF1.third_derivative_limit() == pytest.approx(
        -(3.0 ** (2.0 / 3.0)), rel=1e-9)


def test_tf_wall_pressure_rejected():
    with pytest.raises(ValueError):
        TF1.wall_pressure(0.5)


def test_tf_free_energy_positive_and_cubic_near_star():
    rs = TF1.r_star
    f_half = TF1.free_energy(0.5 * rs)
    assert f_half > 0.0
    # cubic vanishing: F(R* - eps) ~ C eps^3
    eps = 1e-3 * rs
    ratio = TF1.free_energy(rs - 2 * eps) / TF1.free_energy(rs - eps)
    assert ratio == pytest.approx(8.0, rel=0.02)


# -- limits tie the three kinds together ------------------------------------------


@pytest.mark.parametrize("d", (1, 2, 3))
def test_small_m_yukawa_approaches_coulomb(d):
    report = limit_consistency(POT, d, "coulomb", eps=1e-4)
    assert report.max_rel < 1e-3


@pytest.mark.parametrize("d", (1, 2, 3))
def test_small_a_yukawa_approaches_thomas_fermi(d):
    report = limit_consistency(POT, d, "thomas_fermi", eps=1e-4)
    assert report.max_rel < 1e-3


def test_limit_report_tightens_with_eps():
    loose = limit_consistency(POT, 2, "coulomb", eps=1e-3)
    tight = limit_consistency(POT, 2, "coulomb", eps=1e-5)
    assert tight.max_rel < loose.max_rel
