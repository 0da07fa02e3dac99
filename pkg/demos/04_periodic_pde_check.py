# %% [markdown]
# # Periodic solutions against a direct PDE solver
#
# On the circle the Hilbert transform is a Fourier multiplier, so the
# equation can be integrated directly with FFTs and RK4.  Starting both
# methods from the same two-soliton profile, they agree to ~1e-10 at t = 1.

# %%
import numpy as np

from halfwave import EvolveOptions, Kernel, SolitonSpec, evolve, eval_m, solve_iterative
from halfwave.oracle import GridField, compare_fields, evolve_pde, grid_points

L = 2 * np.pi
kind = Kernel.trigonometric(L)
spec = SolitonSpec(kind, [-1.5 + 0.5j, 1.5 + 0.8j], [[0.8, 0, 0.6], [0.8, 0, -0.6]], [0, 0, 1])
data = solve_iterative(spec).data
print("vacuum length m =", data.meta["vacuum_length"])

# %%
x = grid_points(L, 1024)
start = GridField(L, eval_m(data, kind, x).real)
pde = evolve_pde(start, (0.0, 1.0), 1e-3, sample_times=[0.0, 0.25, 0.5, 0.75, 1.0])
traj = evolve(data, kind, EvolveOptions(t_span=(0, 1), sample_count=5))

for t, g, state in zip(pde.times, pde, traj.states):
    linf, l2 = compare_fields(g, GridField(L, eval_m(state, kind, x).real))
    print(f"t = {t:.2f}  Linf = {linf:.2e}  L2 = {l2:.2e}")
print("max norm drift of the PDE run:", pde.norm_drift.max())
