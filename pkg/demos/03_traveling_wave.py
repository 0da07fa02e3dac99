# %% [markdown]
# # Rigid traveling waves from a Blaschke product
#
# Any set of upper half-plane poles gives a co-moving N-soliton: the spin
# residues come from the partial fractions of the Blaschke product and every
# pole moves with velocity -sin(theta).

# %%
import numpy as np

from halfwave import (EvolveOptions, Kernel, blaschke_residues, constraint_residuals, eval_m,
                      evolve, traveling_wave)

kind = Kernel.rational()
poles = np.array([1j, 2 + 1.5j, -2 + 0.8j])
print("residues B_k:", np.round(blaschke_residues(poles), 4))

theta = np.pi / 6
data = traveling_wave(poles, theta)
print("max constraint residual:", constraint_residuals(data, kind).max_residual)
print("predicted velocity:", data.meta["velocity"])

# %%
traj = evolve(data, kind, EvolveOptions(t_span=(0, 20), sample_count=5))
v = data.meta["velocity"]
x = np.linspace(-30, 30, 601)
for t, state in zip(traj.times, traj.states):
    shift = np.abs(eval_m(state, kind, x) - eval_m(data, kind, x - v * t)).max()
    print(f"t = {t:5.1f}  poles = {np.round(state.upper_poles, 6)}  |m(x,t) - m(x-vt,0)| = {shift:.1e}")
