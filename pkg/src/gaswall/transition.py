"""Order analysis of the pushed-to-pulled transition.

Every model here exposes the same small surface: a critical radius
``r_star``, an excess free energy ``free_energy(R)`` that vanishes for
R >= r_star, its closed-form derivative ``free_energy_derivative(R)``,
and an analytic ``third_derivative_limit()``.  This module turns that
surface into evidence about the order of the transition:

* ``sweep`` tabulates F with three derivative columns plus the estimated
  third-derivative jump and the cubic coefficient it implies,
* ``jump_estimate`` recovers lim_{R -> r_star-} F''' purely by finite
  differences of the closed-form F', independently of the analytic route,
* ``cubic_fit`` fits F(R) ~ C (r_star - R)^3 on the curve points just
  below the critical radius and cross-checks C against jump/6,
* ``continuity_report`` packages the one-sided limits of F, F', F'' (all
  zero for a third-order transition) with the strictly negative F''' jump.

Finite differences never straddle r_star: F''' is discontinuous there, so
every stencil is kept on the pushed side and the remaining one-sided
offset is removed by one Richardson step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import stencil5_first, stencil5_second

FIT_WINDOW = 0.05
FIT_POINTS = 20
FIT_CLOSEST = 1e-3


@dataclass(frozen=True)
class FreeEnergyCurve:
    """Tabulated excess free energy with derivative columns.

    d2f and d3f come from five-point stencils of the closed-form df whose
    centers are pulled back to r_star - 2h when the grid point is closer
    to the critical radius than that; pulled-phase rows are exactly zero.
    jump is the estimated -lim F'''(r_star-), positive for a third-order
    transition, and c_star = jump/6 is the predicted coefficient of
    (r_star - R)^3 in F just below r_star.
    """

    model_id: str
    r_star: float
    grid: np.ndarray
    f: np.ndarray
    df: np.ndarray
    d2f: np.ndarray
    d3f: np.ndarray
    jump: float
    c_star: float

    def as_columns(self):
        return {"R": self.grid, "F": self.f, "dF": self.df,
                "d2F": self.d2f, "d3F": self.d3f}


@dataclass(frozen=True)
class CubicFit:
    """One-parameter fit F = C (r_star - R)^3 over a near-critical window."""

    coefficient: float
    residual: float
    n_points: int


@dataclass(frozen=True)
class TransitionReport:
    """One-sided limits at the critical radius and the cubic coefficient."""

    model_id: str
    r_star: float
    f_limit: float
    df_limit: float
    d2f_limit: float
    d3f_limit_fd: float
    d3f_limit_analytic: float
    cubic_coeff: float

    @property
    def cubic_coeff_predicted(self):
        """C such that F ~ C (r_star - R)^3, from the analytic F''' limit."""
        return -self.d3f_limit_analytic / 6.0


def _second_of_df(model, center, h):
    """F''' at the stencil center from five closed-form F' values."""
    vals = np.array([model.free_energy_derivative(center + k * h)
                     for k in (-2, -1, 0, 1, 2)])
    return stencil5_second(vals, h)


def _first_of_df(model, center, h):
    """F'' at the stencil center from five closed-form F' values."""
    vals = np.array([model.free_energy_derivative(center + k * h)
                     for k in (-2, -1, 0, 1, 2)])
    return stencil5_first(vals, h)


def jump_estimate(model, h_rel=1e-3):
    """lim F''' from below by finite differences of the closed-form F'.

    The stencil of half-width 2h is parked with its upper end exactly at
    r_star, giving F'''(r_star - 2h); halving h and extrapolating removes
    the one-sided O(h) offset.
    """
    rs = model.r_star
    h = h_rel * rs
    coarse = _second_of_df(model, rs - 2.0 * h, h)
    fine = _second_of_df(model, rs - h, 0.5 * h)
    return 2.0 * fine - coarse


def sweep(model, grid, h_rel=1e-3):
    """Tabulate F, F', F'', F''' over a radius grid."""
    rs = model.r_star
    h = h_rel * rs
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if np.any(grid <= 0.0) or not np.all(np.isfinite(grid)):
        raise ValueError("sweep grid must be positive and finite")
    if np.any(np.diff(grid) <= 0.0):
        raise ValueError("sweep grid must be strictly ascending")
    f = np.array([model.free_energy(R) for R in grid])
    df = np.array([model.free_energy_derivative(R) for R in grid])
    d2f = np.zeros_like(grid)
    d3f = np.zeros_like(grid)
    for i, R in enumerate(grid):
        if R >= rs:
            continue
        center = min(R, rs - 2.0 * h)
        if center - 2.0 * h <= 0.0:
            raise ValueError(
                f"grid point {R} too close to zero for stencil width {2 * h}")
        d2f[i] = _first_of_df(model, center, h)
        d3f[i] = _second_of_df(model, center, h)
    jump = -jump_estimate(model, h_rel=h_rel)
    return FreeEnergyCurve(model_id=model.label, r_star=rs, grid=grid,
                           f=f, df=df, d2f=d2f, d3f=d3f,
                           jump=jump, c_star=jump / 6.0)


def fit_grid(model, n_points=FIT_POINTS, window=FIT_WINDOW, closest=FIT_CLOSEST):
    """Radii log-clustered toward r_star from below, for the cubic fit."""
    rs = model.r_star
    offsets = np.geomspace(closest * rs, window * rs, n_points)
    return rs - offsets[::-1]


def cubic_fit(curve, window=FIT_WINDOW, check_tol=0.05):
    """Least-squares C in F(R) = C (r_star - R)^3 on the curve's points
    inside (r_star (1 - window), r_star).

    One free parameter, so the normal equation is a single ratio.  The
    fitted C is required to agree with the curve's jump-based prediction
    c_star within check_tol; disagreement means the window is not yet in
    the cubic regime (or the transition is not third order).
    """
    rs = curve.r_star
    w = rs - curve.grid
    sel = (w > 0.0) & (w <= window * rs * (1.0 + 1e-12))
    if np.count_nonzero(sel) < 5:
        raise ValueError(
            f"cubic fit needs at least 5 grid points within {window:.0%} "
            f"below the critical radius, found {np.count_nonzero(sel)}")
    ww, ff = w[sel], curve.f[sel]
    coeff = float(np.dot(ff, ww**3) / np.dot(ww**3, ww**3))
    residual = float(np.sqrt(np.mean((ff - coeff * ww**3) ** 2)))
    if curve.c_star > 0.0 and abs(coeff - curve.c_star) > check_tol * curve.c_star:
        raise ValueError(
            f"fitted cubic coefficient {coeff:.6g} deviates more than "
            f"{check_tol:.0%} from the jump-based prediction {curve.c_star:.6g}")
    return CubicFit(coefficient=coeff, residual=residual,
                    n_points=int(np.count_nonzero(sel)))


def cubic_coefficient(model, n_points=FIT_POINTS, window=FIT_WINDOW):
    """Fitted C for a model, on the standard log-clustered near-critical grid."""
    if n_points < 5:
        raise ValueError("cubic fit needs at least 5 points")
    curve = sweep(model, fit_grid(model, n_points=n_points, window=window))
    return cubic_fit(curve, window=window).coefficient


def continuity_report(model, delta_rel=1e-6, h_rel=1e-3):
    """One-sided limits of F, F', F'' at r_star plus the F''' jump.

    F and F' are sampled at r_star (1 - delta_rel), still in the pushed
    phase; F'' is extrapolated to r_star from stencils parked just below
    it.  Raises if any of the three fails to vanish within 1e-6 or if the
    F''' limit is not strictly negative.
    """
    rs = model.r_star
    probe = rs * (1.0 - delta_rel)
    f_limit = model.free_energy(probe)
    df_limit = model.free_energy_derivative(probe)
    h = h_rel * rs
    e_coarse = _first_of_df(model, rs - 2.0 * h, h)
    e_fine = _first_of_df(model, rs - h, 0.5 * h)
    d2f_limit = 2.0 * e_fine - e_coarse
    d3f_fd = jump_estimate(model, h_rel=h_rel)
    d3f_an = model.third_derivative_limit()
    report = TransitionReport(
        model_id=model.label, r_star=rs, f_limit=f_limit, df_limit=df_limit,
        d2f_limit=d2f_limit, d3f_limit_fd=d3f_fd, d3f_limit_analytic=d3f_an,
        cubic_coeff=cubic_coefficient(model))
    for name, val in (("F", f_limit), ("F'", df_limit), ("F''", d2f_limit)):
        if abs(val) >= 1e-6:
            raise ValueError(
                f"{model.label}: one-sided limit of {name} at the critical "
                f"radius is {val:.3e}, not zero; transition is not third order")
    if not d3f_an < 0.0:
        raise ValueError(
            f"{model.label}: analytic F''' limit {d3f_an:.3e} is not negative")
    return report
