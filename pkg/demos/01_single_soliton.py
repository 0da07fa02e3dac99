# %% [markdown]
# # A single soliton
#
# The simplest non-trivial solution: one pole at a = i over the vacuum e1.
# It does not move, its profile winds once around the equator, and its
# energy is 2 pi.

# %%
import numpy as np
from scipy.integrate import quad

from halfwave import (Kernel, SpinPoleData, constraint_residuals, energy_density, eval_m,
                      initial_velocities, one_soliton, total_energy)

kind = Kernel.rational()
data = SpinPoleData.real([1, 0, 0], [1j], [[1, -1j, 0]])
print(constraint_residuals(data, kind).to_dict())

# %%
x = np.linspace(-4, 4, 9)
for xi, m in zip(x, eval_m(data, kind, x).real):
    print(f"x = {xi:+.1f}  m = {np.round(m, 4)}")

# %% Energy: residue formula against brute-force quadrature
print("pair-sum energy   ", total_energy(data, kind))
print("quadrature energy ", quad(lambda y: energy_density(data, kind, y), -np.inf, np.inf)[0])
print("2 pi              ", 2 * np.pi)

# %% Tilting the rotation axis makes the soliton move with v = n . m0
n0 = np.array([0.0, 0.0, 1.0])
for tilt in (0.0, 0.3, 0.6, 0.9):
    axis = np.array([np.sqrt(1 - tilt**2), 0.0, tilt])
    v = initial_velocities(one_soliton(1j, axis, n0), kind)[0][0]
    print(f"n . m0 = {tilt:.1f}   velocity = {v.real:+.6f}")
