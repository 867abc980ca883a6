"""
The third-order wall transition
===============================

At the critical radius the excess free energy vanishes together with its
first two derivatives; the third derivative jumps.  Five built-in models
share that structure while disagreeing on every number, which makes the
comparison worth printing.
"""

from gaswall import (
    SINGLE_WALL_MODELS,
    LogGas,
    YukawaGas,
    YukawaParams,
    continuity_report,
    cubic_fit,
    fit_grid,
    quadratic,
    sweep,
)

MODELS = [
    LogGas(quadratic(0.5)),
    YukawaGas(YukawaParams(d=2, a=1.0, m=0.0), quadratic(0.5)),
    YukawaGas(YukawaParams(d=3, a=1.0, m=1.0), quadratic(0.5)),
    SINGLE_WALL_MODELS["gue_wall"],
    SINGLE_WALL_MODELS["wishart_c1"],
]

print("model                                   r_star     lim F'''    C*")
for model in MODELS:
    rep = continuity_report(model)
    print(f"{rep.model_id:38s}  {rep.r_star:9.6f}  {rep.d3f_limit_analytic:9.5f}"
          f"  {rep.cubic_coeff:.6f}")

# zoom on the log-gas: the one-sided limits really are zero
gue = MODELS[0]
rep = continuity_report(gue)
print(f"\nlog-gas one-sided limits at r_star: F = {rep.f_limit:.2e}, "
      f"F' = {rep.df_limit:.2e}, F'' = {rep.d2f_limit:.2e}")
print(f"finite-difference vs analytic F''' limit: "
      f"{rep.d3f_limit_fd:.8f} vs {rep.d3f_limit_analytic:.8f}")

# near the transition F follows a pure cubic in (r_star - R)
curve = sweep(gue, fit_grid(gue))
fit = cubic_fit(curve)
print(f"\ncubic fit just below r_star: coefficient {fit.coefficient:.6f} "
      f"(predicted {rep.cubic_coeff:.6f}), residual {fit.residual:.1e}, "
      f"{fit.n_points} points")

# a short table of the curve itself
curve = sweep(gue, [1.0, 1.1, 1.2, 1.3, 1.4, 1.5])
print("\n  R     F            F''          F'''        phase")
for i, R in enumerate(curve.grid):
    phase = "pushed" if R < curve.r_star else "pulled"
    print(f" {R:4.2f}  {curve.f[i]: .4e}  {curve.d2f[i]: .4e} "
          f"{curve.d3f[i]: .4e}  {phase}")
