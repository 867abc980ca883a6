"""
Walled log-gas in one dimension
===============================

A hard wall at |x| = R confines a gas of logarithmically repelling
particles in a quadratic trap.  Squeeze the wall below the free support
and the density picks up inverse-square-root spikes at the wall while the
energy starts to grow.  This script walks the whole story at a few radii.
"""

import math

import numpy as np

from gaswall import LogGas, quadratic

gas = LogGas(quadratic(0.5))
rs = gas.r_star
print(f"model: {gas.label}")
print(f"critical radius: {rs:.12f}  (sqrt(2) = {math.sqrt(2):.12f})")

# free gas: wall beyond the support, semicircle density, zero excess energy
free = gas.equilibrium(2.0)
print(f"\nwall at 2.0 -> {free.phase} phase, support ends at "
      f"{free.support:.6f}, mu = {free.mu:.6f}")
print("density at 0:", free.density(0.0), " (semicircle peak sqrt(2)/pi =",
      f"{math.sqrt(2) / math.pi:.12f})")

# squeezed gas: the density diverges at the wall, so sample just inside
eq = gas.equilibrium(1.0)
print(f"\nwall at 1.0 -> {eq.phase} phase, mu = {eq.mu:.6f}")
for x in (0.0, 0.5, 0.9, 0.99):
    print(f"  density({x:4.2f}) = {eq.density(x):.6f}")

# the excess free energy turns on below r_star, third order smooth at it
print("\n   R      F(R)          F'(R)         wall pressure")
for R in np.linspace(0.6, 1.5, 7):
    f = gas.free_energy(R)
    df = gas.free_energy_derivative(R)
    p = gas.wall_pressure(R)
    print(f"  {R:4.2f}  {f: .6e}  {df: .6e}  {p: .6e}")

# pulling the wall off the support costs nothing at all
print(f"\nF({rs:.4f}) = {gas.free_energy(rs)}")
print(f"F(3) = {gas.free_energy(3.0)}")
