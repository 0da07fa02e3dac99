# %% [markdown]
# # How often does the constraint iteration converge?
#
# Random poles (Re a in [-5, 5], Im a in [0.5, 2], separated) and random
# axes, N = 2..5.  The fixed-point iteration is linear in the spin scalars on
# the line, so it converges exactly when the spectral radius of its linear
# part is below one; that becomes rare as N grows.

# %%
import numpy as np

from halfwave.initial import convergence_statistics

recs = convergence_statistics(count=200, seed=0)
for N in (2, 3, 4, 5):
    sub = [r for r in recs if r["N"] == N]
    ok = [r for r in sub if r["converged"]]
    its = [r["iterations"] for r in ok]
    print(f"N = {N}: {len(ok):3d}/{len(sub)} converged, median iterations {np.median(its) if its else np.nan}")
print(f"overall: {np.mean([r['converged'] for r in recs]):.0%}")
