"""
Screened repulsion in d dimensions
==================================

The screened kernel solves (-a^2 Lap + m^2) phi = delta, so one family
covers the Coulomb gas (m = 0), the short-range Thomas-Fermi gas (a = 0)
and everything in between.  Confined in a ball, the walled equilibrium
splits into a bulk density plus a surface charge c(R) on the wall, and
(mu, c) come from a 2x2 linear system.  This script sweeps the family.
"""

import numpy as np

from gaswall import YukawaGas, YukawaParams, limit_consistency, quadratic

pot = quadratic(0.5)

# one gas per dimension, unit screening
print("d   r_star        mu(0.6 r*)    c(0.6 r*)")
for d in (1, 2, 3):
    gas = YukawaGas(YukawaParams(d=d, a=1.0, m=1.0), pot)
    R = 0.6 * gas.r_star
    print(f"{d}   {gas.r_star:.10f}  {gas.chemical_potential(R):.8f}  "
          f"{gas.excess_charge(R):.8f}")

# the coulomb disk: surface charge is exactly 1 - R^2, unit critical radius
disk = YukawaGas(YukawaParams(d=2, a=1.0, m=0.0), pot)
print(f"\ncoulomb disk r_star = {disk.r_star}")
for R in (0.4, 0.8, 1.0):
    print(f"  c({R}) = {disk.excess_charge(R)}   1 - R^2 = {1 - R * R}")

# bulk density of the screened gas is not flat; the charge makes up the rest
gas3 = YukawaGas(YukawaParams(d=3, a=1.0, m=1.0), pot)
R = 0.7
print(f"\nd=3 bulk density inside the wall R = {R}:")
for r in np.linspace(0.0, R, 5):
    print(f"  rho({r:4.2f}) = {gas3.bulk_density(R, r):.8f}")
print(f"surface charge c = {gas3.excess_charge(R):.8f}")

# both degenerate limits are reproduced by the dedicated branches
for probe in ("coulomb", "thomas_fermi"):
    rep = limit_consistency(pot, 3, probe, eps=1e-4)
    print(f"\n{probe} limit, eps = {rep.eps}: relative deviations "
          f"r_star {rep.r_star_rel:.2e}, F {rep.free_energy_rel:.2e}, "
          f"c {rep.charge_rel:.2e}")
