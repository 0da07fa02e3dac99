"""Spin-pole data and evaluation of the pole ansatz.

The field is

    m(x) = m0 + i sum_j s_j alpha(x - a_j) - i sum_k t_k alpha(x - b_k)

with poles ``a_j`` in the upper and ``b_k`` in the lower half-plane.  In the
real-reduced mode the lower family is the complex conjugate of the upper one
and ``m`` is real on the real axis.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .cvec import dot
from .errors import NonRealEnergy
from .kernels import alpha, v_pot


class Mode(str, Enum):
    REAL = "real_reduced"
    GENERAL = "general_complex"


def _as_poles(p):
    return np.atleast_1d(np.asarray(p, dtype=complex)).reshape(-1)


def _as_spins(s, n):
    s = np.asarray(s, dtype=complex)
    if n == 0:
        return np.zeros((0, 3), dtype=complex)
    return s.reshape(n, 3)


@dataclass
class SpinPoleData:
    """Parameters of the pole ansatz.

    Build instances with :meth:`real` or :meth:`general`.  For real-reduced
    data the lower family is always derived from the upper one, so the
    conjugation symmetry holds by construction.
    """

    m0: np.ndarray
    upper_poles: np.ndarray
    upper_spins: np.ndarray
    lower_poles: np.ndarray
    lower_spins: np.ndarray
    mode: Mode = Mode.REAL
    rho2: complex = 1.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.mode = Mode(self.mode)
        self.m0 = np.asarray(self.m0, dtype=complex).reshape(3)
        self.upper_poles = _as_poles(self.upper_poles)
        self.upper_spins = _as_spins(self.upper_spins, self.upper_poles.size)
        if self.mode is Mode.REAL:
            if np.any(np.abs(self.m0.imag) > 1e-14 * max(1.0, np.abs(self.m0).max())):
                raise ValueError("real-reduced data needs a real vacuum")
            self.m0 = self.m0.real.astype(complex)
            self.lower_poles = self.upper_poles.conj()
            self.lower_spins = self.upper_spins.conj()
            self.rho2 = 1.0 + 0j
        else:
            self.lower_poles = _as_poles(self.lower_poles)
            self.lower_spins = _as_spins(self.lower_spins, self.lower_poles.size)
            self.rho2 = complex(self.rho2)
        if np.any(self.upper_poles.imag <= 0):
            raise ValueError("upper poles must lie strictly in the upper half-plane")
        if np.any(self.lower_poles.imag >= 0):
            raise ValueError("lower poles must lie strictly in the lower half-plane")

    @classmethod
    def real(cls, m0, poles, spins, meta=None):
        poles = _as_poles(poles)
        return cls(m0, poles, _as_spins(spins, poles.size), None, None,
                   Mode.REAL, 1.0, dict(meta or {}))

    @classmethod
    def general(cls, m0, upper_poles, upper_spins, lower_poles, lower_spins,
                rho2, meta=None):
        return cls(m0, upper_poles, upper_spins, lower_poles, lower_spins,
                   Mode.GENERAL, rho2, dict(meta or {}))

    @property
    def N(self):
        return self.upper_poles.size

    @property
    def M(self):
        return self.lower_poles.size

    def signed(self):
        """All poles, spins and their half-plane signs ``r`` as flat arrays."""
        poles = np.concatenate([self.upper_poles, self.lower_poles])
        spins = np.concatenate([self.upper_spins, self.lower_spins])
        r = np.concatenate([np.ones(self.N), -np.ones(self.M)])
        return poles, spins, r

    def with_state(self, upper_poles, upper_spins, lower_poles=None, lower_spins=None):
        """Copy with new poles/spins, same vacuum, mode and rho2."""
        if self.mode is Mode.REAL:
            return SpinPoleData.real(self.m0, upper_poles, upper_spins, self.meta)
        return SpinPoleData.general(self.m0, upper_poles, upper_spins,
                                    lower_poles, lower_spins, self.rho2, self.meta)

    def copy(self):
        return self.with_state(self.upper_poles.copy(), self.upper_spins.copy(),
                               self.lower_poles.copy(), self.lower_spins.copy())


def _pole_sum(data, kind, x, fn, weighted):
    x = np.asarray(x, dtype=complex)
    poles, spins, r = data.signed()
    if poles.size == 0:
        return np.zeros(x.shape + (3,), dtype=complex)
    w = fn(kind, x[..., None] - poles)
    coeff = spins * r[:, None] if weighted else spins
    return w @ coeff


def eval_m(data, kind, x):
    """Evaluate ``m(x)``; broadcasts over ``x`` and returns shape ``x.shape + (3,)``."""
    s = _pole_sum(data, kind, x, alpha, weighted=True)
    return data.m0 + 1j * s


def eval_hilbert_mx(data, kind, x):
    """Closed form of ``H m_x = -sum over all poles of s V(x - pole)``."""
    return -_pole_sum(data, kind, x, v_pot, weighted=False)


def norm_residual(data, kind, x):
    """``m(x).m(x) - rho2``."""
    m = eval_m(data, kind, x)
    return dot(m, m) - data.rho2


def energy_density(data, kind, x, check=True):
    """Energy density ``-m . H m_x`` at real ``x``.

    Real-reduced data yields a real array; an imaginary part larger than
    ``1e-8 (1 + |eps|)`` raises :class:`NonRealEnergy` when ``check`` is set.
    """
    x = np.asarray(x, dtype=float)
    eps = -dot(eval_m(data, kind, x), eval_hilbert_mx(data, kind, x))
    if data.mode is not Mode.REAL:
        return eps
    if check and np.any(np.abs(eps.imag) > 1e-8 * (1.0 + np.abs(eps))):
        raise NonRealEnergy(f"max |Im eps| = {np.abs(eps.imag).max():.3g}")
    return eps.real


def total_energy(data, kind, n_quad=4096):
    """Integral of the energy density over the line or one period.

    Rational kernel: exact residue formula
    ``E = -4 pi sum_{upper j, lower k} (s_j . t_k) V(a_j - b_k)``.
    Trigonometric kernel: trapezoid rule over one period, which converges
    geometrically for the analytic periodic integrand.
    """
    if not kind.is_periodic:
        if data.N == 0 or data.M == 0:
            return 0.0 if data.mode is Mode.REAL else 0j
        w = v_pot(kind, data.upper_poles[:, None] - data.lower_poles[None, :])
        e = -4.0 * np.pi * np.sum(w * (data.upper_spins @ data.lower_spins.T))
    else:
        L = kind.L
        x = -L / 2 + L * np.arange(n_quad) / n_quad
        e = np.sum(energy_density(data, kind, x, check=False)) * L / n_quad
    return float(np.real(e)) if data.mode is Mode.REAL else complex(e)


def as_general(data):
    """Re-express data in general-complex mode (lower family stored explicitly)."""
    return SpinPoleData.general(data.m0, data.upper_poles.copy(), data.upper_spins.copy(),
                                data.lower_poles.copy(), data.lower_spins.copy(),
                                data.rho2, data.meta)
