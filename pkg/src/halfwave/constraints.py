"""Admissibility constraints on spin-pole data and the initial pole velocities.

For every pole ``p_j`` (both families, sign ``r_j``) define

    b_j = i m0 - sum_{k != j} r_k s_k alpha(p_j - p_k).

The ansatz has ``m.m = rho2`` for all ``x`` iff ``s_j.s_j = 0`` and
``s_j.b_j = 0`` for every ``j`` and ``m0.m0 + kappa^2 (sum_k r_k s_k)^2 = rho2``.
"""

from dataclasses import dataclass

import numpy as np

from .cvec import cross, dot
from .errors import DegenerateSpin, NotAdmissible
from .kernels import alpha, pair_matrix

TOL_ADMISSIBLE = 1e-8
EPS_SPIN = 1e-24


@dataclass
class ConstraintReport:
    """Residual magnitudes of all constraints, upper family first."""

    null_residuals: np.ndarray
    orthogonality_residuals: np.ndarray
    scalar_residual: float
    N: int

    @property
    def max_residual(self):
        vals = [self.scalar_residual]
        if self.null_residuals.size:
            vals.append(self.null_residuals.max())
            vals.append(self.orthogonality_residuals.max())
        return float(max(vals))

    def admissible(self, tol=TOL_ADMISSIBLE):
        return self.max_residual <= tol

    def to_dict(self):
        n = self.N
        return {
            "null_residuals": {
                "upper": self.null_residuals[:n].tolist(),
                "lower": self.null_residuals[n:].tolist(),
            },
            "orthogonality_residuals": {
                "upper": self.orthogonality_residuals[:n].tolist(),
                "lower": self.orthogonality_residuals[n:].tolist(),
            },
            "scalar_residual": self.scalar_residual,
            "max_residual": self.max_residual,
        }


def b_vectors(data, kind):
    """All ``b_j`` as an array of shape ``(N + M, 3)``."""
    poles, spins, r = data.signed()
    if poles.size == 0:
        return np.zeros((0, 3), dtype=complex)
    A = pair_matrix(kind, poles, alpha)
    return 1j * data.m0 - A @ (r[:, None] * spins)


def b_vector(data, kind, index):
    """``b_j`` for one pole; indices ``0..N-1`` are upper, ``N..N+M-1`` lower."""
    return b_vectors(data, kind)[index]


def constraint_residuals(data, kind):
    """Evaluate every constraint and collect the magnitudes."""
    poles, spins, r = data.signed()
    b = b_vectors(data, kind)
    total = np.sum(r[:, None] * spins, axis=0)
    scalar = dot(data.m0, data.m0) + kind.kappa**2 * dot(total, total) - data.rho2
    return ConstraintReport(
        null_residuals=np.abs(dot(spins, spins)),
        orthogonality_residuals=np.abs(dot(spins, b)),
        scalar_residual=float(abs(scalar)),
        N=data.N,
    )


def pole_velocities(data, kind, b=None):
    """Velocities of all poles, ``r_j (s_j ^ s_j*) . b_j / (s_j . s_j*)``.

    No admissibility check; used directly by the first-order dynamics.
    """
    poles, spins, r = data.signed()
    if b is None:
        b = b_vectors(data, kind)
    herm = np.real(dot(spins, spins.conj()))
    if np.any(herm < EPS_SPIN):
        raise DegenerateSpin("spin with vanishing norm")
    return r * dot(cross(spins, spins.conj()), b) / herm


def initial_velocities(data, kind, tol=TOL_ADMISSIBLE):
    """Initial pole velocities ``(adot, bdot)`` of admissible data.

    Raises:
        NotAdmissible: if any constraint residual exceeds ``tol``.
        DegenerateSpin: if a spin vanishes.
    """
    report = constraint_residuals(data, kind)
    if report.max_residual > tol:
        raise NotAdmissible(
            f"max constraint residual {report.max_residual:.3g} exceeds {tol:.1g}", report)
    v = pole_velocities(data, kind)
    return v[: data.N], v[data.N:]


def vector_equation_residual(data, kind):
    """``|adot_j s_j + r_j s_j ^ b_j|`` per pole, for the scalar velocity."""
    poles, spins, r = data.signed()
    b = b_vectors(data, kind)
    v = pole_velocities(data, kind, b)
    res = v[:, None] * spins + r[:, None] * cross(spins, b)
    return np.linalg.norm(res, axis=-1)
