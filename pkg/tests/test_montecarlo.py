"""Metropolis sampler: kernels against exact formulas, and the compiled
chain against a pure-Python replay consuming the identical random stream.

The replay test is the strongest guard: it re-executes every proposal of a
short run in plain Python, drawing the same normals and uniforms in the
same positional order, and demands bit-identical final positions and
running energy.  Any silent change in the compiled walk order, acceptance
rule or bookkeeping breaks it.
"""

import math

import numpy as np
import pytest
from scipy.special import k0 as scipy_k0
from scipy.special import k1 as scipy_k1

from gaswall.montecarlo import (
    CHUNK_SWEEPS,
    DensityHistogram,
    GasConfig,
    _full_energy,
    _k0,
    _k1,
    _monomial_arrays,
    _pair_phi,
    density_distance,
    energy,
    initial_positions,
    metropolis_run,
)
from gaswall.potentials import RadialPotential, monomial_sum, quadratic
from gaswall.yukawa import YukawaParams, interaction


def small_config(**over):
    base = dict(n_particles=4, beta=2.0, kernel="log_1d", pot=quadratic(0.5),
                steps=50, burn_in=0, seed=2024)
    base.update(over)
    return GasConfig(**base)


# -- compiled kernels -----------------------------------------------------------


def test_rational_k0_k1_accuracy():
    x = np.geomspace(0.01, 20.0, 200)
    k0_dev = np.abs([_k0(v) for v in x] / scipy_k0(x) - 1.0)
    k1_dev = np.abs([_k1(v) for v in x] / scipy_k1(x) - 1.0)
    assert float(np.max(k0_dev)) < 5e-7
    assert float(np.max(k1_dev)) < 5e-7


@pytest.mark.parametrize("d", (1, 2, 3, 4, 5, 6))
def test_pair_phi_matches_interaction(d):
    params = YukawaParams(d=d, a=1.1, m=0.7)
    tol = 1e-6 if d % 2 == 0 else 1e-12  # even d runs on the rational K_0, K_1
    for r in (0.2, 1.0, 3.0):
        want = interaction(params, r)
        got = _pair_phi(1, d, 1.1, 0.7, r)
        assert got == pytest.approx(want, rel=tol)


@pytest.mark.parametrize("d", (1, 2, 3))
def test_pair_phi_coulomb(d):
    params = YukawaParams(d=d, a=1.3, m=0.0)
    for r in (0.4, 2.0):
        assert _pair_phi(2, d, 1.3, 0.0, r) == pytest.approx(
            interaction(params, r), rel=1e-13)


def test_pair_phi_log():
    assert _pair_phi(0, 1, 1.0, 1.0, 0.5) == pytest.approx(
        -math.log(0.5), rel=1e-15)


# -- exact energy oracle ---------------------------------------------------------


def test_energy_two_particles_log():
    cfg = small_config(n_particles=2)
    e = energy(cfg, np.array([-1.0, 1.0]))
    assert e == pytest.approx(2.0 - math.log(2.0), rel=1e-14)


def test_energy_two_particles_yukawa_d3():
    cfg = small_config(n_particles=2, kernel=YukawaParams(d=3, a=1.0, m=1.0))
    pos = np.array([[0.0, 0.0, 0.0], [2.0, 0.0, 0.0]])
    want = math.exp(-2.0) / 2.0 + 2.0 * (0.0 + 2.0)
    assert energy(cfg, pos) == pytest.approx(want, rel=1e-14)


def test_energy_rejects_coincident_and_bad_shapes():
    cfg = small_config(n_particles=2)
    with pytest.raises(ValueError, match="coincident"):
        energy(cfg, np.array([0.3, 0.3]))
    with pytest.raises(ValueError, match="shape"):
        energy(cfg, np.zeros((3, 1)))
    walled = small_config(n_particles=2, wall=1.0)
    with pytest.raises(ValueError, match="wall"):
        energy(walled, np.array([0.0, 1.5]))


def test_full_energy_kernel_matches_oracle():
    cfg = small_config(n_particles=6)
    rng = np.random.default_rng(5)
    pos = initial_positions(cfg, rng)
    pexp, pcoef = _monomial_arrays(cfg.pot)
    got = _full_energy(pos, 0, 1, 1.0, 1.0, pexp, pcoef)
    assert got == pytest.approx(energy(cfg, pos), rel=1e-12)


def test_monomial_arrays_unpacking():
    # (coefficient, exponent) storage order: v = 0.5 r^2 + 0.25 r^4
    pexp, pcoef = _monomial_arrays(monomial_sum([(0.5, 2), (0.25, 4)]))
    np.testing.assert_array_equal(pexp, [2.0, 4.0])
    np.testing.assert_array_equal(pcoef, [0.5, 0.25])


# -- the replay guard -------------------------------------------------------------


def _python_replay(cfg):
    """Re-run a single-chunk, no-tuning configuration in plain Python."""
    assert cfg.burn_in == 0 and cfg.steps <= CHUNK_SWEEPS and cfg.d == 1
    assert cfg.kernel == "log_1d" and cfg.wall is None
    n = cfg.n_particles
    terms = cfg.pot.monomials

    def conf(r):
        acc = 0.0
        for k, p in terms:
            acc += k * r ** float(p)
        return acc

    rng = np.random.default_rng(cfg.seed)
    pos = [float(v) for v in
           rng.uniform(-1.0, 1.0, size=(n, 1)).ravel()]
    normals = rng.standard_normal(size=(cfg.steps, n, 1))
    uniforms = rng.random(size=(cfg.steps, n))

    # mirror the compiled arithmetic exactly, sqrt(x*x) and all: abs(x)
    # and sqrt(x*x) can differ in the last ulp after the squaring rounds
    e_run = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            diff = pos[i] - pos[j]
            e_run += -math.log(math.sqrt(diff * diff))
    for i in range(n):
        e_run += n * conf(math.sqrt(pos[i] * pos[i]))

    step = cfg.step_scale
    for s in range(cfg.steps):
        for i in range(n):
            trial = pos[i] + step * normals[s, i, 0]
            de = 0.0
            coincident = False
            for j in range(n):
                if j == i:
                    continue
                dn = trial - pos[j]
                do = pos[i] - pos[j]
                r_new = math.sqrt(dn * dn)
                r_old = math.sqrt(do * do)
                if r_new < 1e-12:
                    coincident = True
                    break
                de += -math.log(r_new) - (-math.log(r_old))
            if coincident:
                continue
            de += n * (conf(math.sqrt(trial * trial))
                       - conf(math.sqrt(pos[i] * pos[i])))
            if de <= 0.0 or uniforms[s, i] < math.exp(-cfg.beta * de):
                pos[i] = trial
                e_run += de
    return np.array(pos), e_run


def test_compiled_chain_replays_bit_identically():
    cfg = small_config(n_particles=5, steps=40, seed=99)
    result = metropolis_run(cfg)
    want_pos, want_e = _python_replay(cfg)
    np.testing.assert_array_equal(result.final_positions.ravel(), want_pos)
    assert result.final_energy == want_e


def test_running_energy_consistent_with_oracle():
    # 1200 sweeps crosses the periodic full-energy recompute, so the
    # reported drift is a real measurement rather than the 0.0 default
    cfg = small_config(n_particles=20, steps=1200, burn_in=100, seed=3)
    result = metropolis_run(cfg)
    exact = energy(cfg, result.final_positions)
    assert result.final_energy == pytest.approx(exact, rel=1e-11)
    assert 0.0 < result.energy_drift < 1e-12


def test_reproducibility_and_seed_sensitivity():
    cfg = small_config(n_particles=10, steps=120, burn_in=20, seed=7)
    r1 = metropolis_run(cfg)
    r2 = metropolis_run(cfg)
    np.testing.assert_array_equal(r1.final_positions, r2.final_positions)
    np.testing.assert_array_equal(r1.histogram.mass, r2.histogram.mass)
    assert r1.final_energy == r2.final_energy
    r3 = metropolis_run(small_config(
        n_particles=10, steps=120, burn_in=20, seed=8))
    assert not np.array_equal(r1.final_positions, r3.final_positions)


def test_hard_wall_never_crossed():
    cfg = small_config(n_particles=12, steps=400, burn_in=100,
                       wall=0.8, seed=11, step_scale=0.5)
    result = metropolis_run(cfg)
    assert np.all(np.abs(result.final_positions) <= 0.8)
    # the histogram covers exactly the walled interval
    assert result.histogram.edges[0] == -0.8
    assert result.histogram.edges[-1] == 0.8


def test_step_tuning_shrinks_oversized_steps():
    cfg = small_config(n_particles=8, steps=3 * CHUNK_SWEEPS,
                       burn_in=2 * CHUNK_SWEEPS, step_scale=25.0, seed=4)
    result = metropolis_run(cfg)
    assert result.step_scale_final < 25.0


def test_sample_accounting():
    cfg = small_config(n_particles=6, steps=300, burn_in=120, seed=1)
    result = metropolis_run(cfg)
    assert result.histogram.n_samples == 6 * 180


def test_config_validation():
    with pytest.raises(ValueError, match="at least 2"):
        small_config(n_particles=1)
    with pytest.raises(ValueError, match="beta"):
        small_config(beta=0.0)
    with pytest.raises(ValueError, match="burn_in"):
        small_config(steps=10, burn_in=10)
    with pytest.raises(ValueError, match="Thomas-Fermi"):
        small_config(kernel=YukawaParams(d=1, a=0.0, m=1.0))
    with pytest.raises(ValueError, match="monomial"):
        small_config(pot=RadialPotential(v=lambda r: r * r,
                                         dv=lambda r: 2 * r,
                                         ddv=lambda r: 2.0))
    with pytest.raises(ValueError, match="kernel"):
        small_config(kernel="log_2d")


def test_histogram_mass_must_normalize():
    edges = np.linspace(0.0, 1.0, 5)
    with pytest.raises(ValueError):
        DensityHistogram(edges=edges, mass=np.array([0.5, 0.1, 0.1, 0.1]),
                         n_samples=10, d=2, radial=True)


# -- density comparison ------------------------------------------------------------


def _flat_histogram():
    edges = np.linspace(-1.0, 1.0, 11)
    return DensityHistogram(edges=edges, mass=np.full(10, 0.1),
                            n_samples=1000, d=1, radial=False)


def test_density_distance_exact_match_is_zero():
    hist = _flat_histogram()
    assert density_distance(hist, lambda x: 0.5) == pytest.approx(0.0, abs=1e-14)


def test_density_distance_disjoint_half():
    hist = _flat_histogram()
    half = lambda x: 1.0 if x >= 0.0 else 0.0
    assert density_distance(hist, half) == pytest.approx(1.0, abs=1e-12)


def test_density_distance_exclusion_drops_bins():
    hist = _flat_histogram()
    half = lambda x: 1.0 if x >= 0.0 else 0.0
    partial = density_distance(hist, half, exclude_near=(0.0,),
                               exclude_width=2.0)
    assert partial < 1.0


def test_density_distance_radial_weight():
    # one bin [0, 1] in d = 2: mass of a uniform unit disk density is
    # 2 pi int_0^1 r / pi dr = 1
    edges = np.array([0.0, 1.0, 2.0])
    hist = DensityHistogram(edges=edges, mass=np.array([1.0, 0.0]),
                            n_samples=100, d=2, radial=True)
    uniform = lambda r: 1.0 / math.pi if r <= 1.0 else 0.0
    assert density_distance(hist, uniform) == pytest.approx(0.0, abs=1e-10)


# -- physics sanity ----------------------------------------------------------------


def test_pcg_uniformity_chi_square():
    draws = np.random.default_rng(123).random(1_000_000)
    counts, _ = np.histogram(draws, bins=100, range=(0.0, 1.0))
    expected = 10_000.0
    chi2 = float(np.sum((counts - expected) ** 2 / expected))
    # 99 degrees of freedom: mean 99, sd ~14; generous deterministic bounds
    assert 40.0 < chi2 < 180.0


def test_semicircle_recovered_coarsely():
    cfg = small_config(n_particles=40, steps=4000, burn_in=800, seed=21,
                       bins=32, extent=2.0)
    result = metropolis_run(cfg)
    semicircle = lambda x: (math.sqrt(max(0.0, 2.0 - x * x)) / math.pi)
    l1 = density_distance(result.histogram, semicircle,
                          exclude_near=(-math.sqrt(2.0), math.sqrt(2.0)))
    assert l1 < 0.08
    assert 0.2 < result.acceptance_rate < 0.7


def test_surface_condensation_grows_as_wall_tightens():
    """Tighter walls push more mass into the outermost histogram bins."""
    edge_masses = []
    for wall in (0.9, 0.7, 0.5):
        cfg = GasConfig(
            n_particles=30, beta=2.0, kernel=YukawaParams(d=3, a=1.0, m=1.0),
            pot=quadratic(0.5), steps=2500, burn_in=500, wall=wall, seed=99,
            bins=40)
        result = metropolis_run(cfg)
        hist = result.histogram
        outer = hist.centers > 0.9 * wall
        edge_masses.append(float(np.sum(hist.mass[outer])))
    assert edge_masses[0] < edge_masses[1] < edge_masses[2]


def test_coulomb_disk_uniform_bulk():
    cfg = GasConfig(
        n_particles=48, beta=2.0, kernel=YukawaParams(d=2, a=1.0, m=0.0),
        pot=quadratic(0.5), steps=6000, burn_in=1000, seed=777, bins=32,
        extent=1.5)
    result = metropolis_run(cfg)
    uniform = lambda r: 1.0 / math.pi if r <= 1.0 else 0.0
    l1 = density_distance(result.histogram, uniform, exclude_near=(1.0,))
    assert l1 < 0.12
