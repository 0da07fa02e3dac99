"""Exact pole-ansatz solutions of the half-wave maps equation.

The field ``m(x, t)`` is a constant vacuum plus simple poles with null spin
residues; the poles and spins move as a spin Calogero-Moser system.
"""

from .constraints import (ConstraintReport, b_vector, b_vectors, constraint_residuals,
                          initial_velocities, pole_velocities)
from .cvec import NullDecomposition, basis_expand, cross, dot, null_decompose, parallel_project
from .dynamics import (EvolveOptions, Order, Trajectory, backlund_crosscheck, evolve,
                       rhs_first_order, rhs_second_order)
from .errors import *  # noqa: F401,F403
from .field import (Mode, SpinPoleData, as_general, energy_density, eval_hilbert_mx, eval_m,
                    norm_residual, total_energy)
from .initial import (CATALOG_IDS, IterationOptions, SolitonSpec, SolveResult, blaschke,
                      blaschke_residues, catalog_audit, convergence_statistics, exact_catalog,
                      iterate_constraints, one_soliton, random_scenario, solve_iterative,
                      traveling_wave)
from .kernels import Kernel, alpha, v_pot, v_pot_prime
from .oracle import GridField, compare_fields, discrete_hilbert, evolve_pde, hwm_rhs

__version__ = "0.1.0"
