"""Confinement potential constructors and their exact radial moments."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaswall.potentials import (
    RadialPotential,
    monomial,
    monomial_sum,
    quadratic,
    quartic,
    zero_potential,
)


def test_quadratic_values():
    pot = quadratic(0.5)
    assert pot.v(2.0) == 2.0
    assert pot.dv(2.0) == 2.0
    assert pot.ddv(2.0) == 1.0
    assert pot.monomials == ((0.5, 2),)


def test_mixed_sum_vectorizes():
    pot = monomial_sum([(0.5, 2), (0.25, 4)])
    r = np.array([0.0, 1.0, 2.0])
    np.testing.assert_allclose(pot.v(r), [0.0, 0.75, 6.0])
    np.testing.assert_allclose(pot.dv(r), [0.0, 2.0, 10.0])


@given(
    k=st.floats(0.01, 10.0),
    p=st.sampled_from([2, 4, 6, 8]),
    d=st.integers(1, 4),
    R=st.floats(0.1, 5.0),
)
@settings(max_examples=60, deadline=None)
def test_radial_moment_closed_form(k, p, d, R):
    pot = monomial(p, k)
    want = k * R ** (p + d) / (p + d)
    assert pot.radial_moment(d, R) == pytest.approx(want, rel=1e-12)


def test_radial_moment_quadrature_fallback():
    pot = RadialPotential(
        v=lambda r: np.asarray(r, dtype=float) ** 2 / 2.0,
        dv=lambda r: np.asarray(r, dtype=float),
        ddv=lambda r: np.ones_like(np.asarray(r, dtype=float)),
        label="bare quadratic")
    assert pot.monomials is None
    assert pot.radial_moment(3, 2.0) == pytest.approx(2.0**5 / 10.0, rel=1e-10)


def test_check_catches_wrong_derivative():
    pot = RadialPotential(
        v=lambda r: r * r, dv=lambda r: 3.0 * r, ddv=lambda r: 2.0)
    with pytest.raises(ValueError, match="dv"):
        pot.check()


def test_rejects_bad_monomials():
    with pytest.raises(ValueError):
        monomial_sum([(1.0, 3)])
    with pytest.raises(ValueError):
        monomial_sum([(-1.0, 2)])
    with pytest.raises(ValueError):
        monomial_sum([])


def test_zero_potential_moment():
    assert zero_potential().radial_moment(2, 3.0) == 0.0
