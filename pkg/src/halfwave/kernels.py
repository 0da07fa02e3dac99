"""Rational and trigonometric Calogero-Moser kernels.

``alpha`` is the special function, ``v_pot = -alpha' = alpha^2 + kappa^2`` the
pair potential and ``v_pot_prime = -2 alpha V`` its derivative.  The rational
kernels live on the line (kappa = 0); the trigonometric ones describe the
period-L problem with kappa = pi / L.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import PoleCollision, Singular

EPS_SING = 1e-12


@dataclass(frozen=True)
class Kernel:
    """Kernel family selector.

    Use :meth:`rational` or :meth:`trigonometric` rather than the constructor.
    """

    variant: str
    L: Optional[float] = None

    def __post_init__(self):
        if self.variant not in ("rational", "trigonometric"):
            raise ValueError(f"unknown kernel variant {self.variant!r}")
        if self.variant == "trigonometric":
            if self.L is None or not self.L > 0:
                raise ValueError("trigonometric kernel needs a period L > 0")
        elif self.L is not None:
            raise ValueError("rational kernel takes no period")

    @classmethod
    def rational(cls):
        return cls("rational")

    @classmethod
    def trigonometric(cls, L):
        return cls("trigonometric", float(L))

    @property
    def is_periodic(self):
        return self.variant == "trigonometric"

    @property
    def kappa(self):
        return np.pi / self.L if self.is_periodic else 0.0

    def alpha(self, z, eps=EPS_SING):
        return alpha(self, z, eps)

    def v_pot(self, z, eps=EPS_SING):
        return v_pot(self, z, eps)

    def v_pot_prime(self, z, eps=EPS_SING):
        return v_pot_prime(self, z, eps)

    def to_dict(self):
        if self.is_periodic:
            return {"kind": "trigonometric", "L": self.L}
        return {"kind": "rational"}


def _check(kind, z, eps):
    z = np.asarray(z, dtype=complex)
    if kind.is_periodic:
        d = np.abs(z - kind.L * np.round(z.real / kind.L)) / kind.L
    else:
        d = np.abs(z)
    if np.any(d < eps):
        raise Singular("kernel evaluated at a singular point")
    return z


def _exp2i(w):
    """Return ``q = exp(2i w sign(Im w))`` (so |q| <= 1) and the sign used."""
    sgn = np.where(w.imag >= 0, 1.0, -1.0)
    return np.exp(2j * sgn * w), sgn


def alpha(kind, z, eps=EPS_SING):
    """``1/z`` (rational) or ``kappa cot(kappa z)`` (trigonometric)."""
    z = _check(kind, z, eps)
    if not kind.is_periodic:
        return 1.0 / z
    k = kind.kappa
    q, sgn = _exp2i(k * z)
    # cot w = i (q + 1) / (q - 1) for q = e^{2iw}; for Im w < 0 use e^{-2iw}.
    return k * sgn * 1j * (q + 1.0) / (q - 1.0)


def v_pot(kind, z, eps=EPS_SING):
    """``1/z^2`` (rational) or ``kappa^2 / sin^2(kappa z)`` (trigonometric)."""
    z = _check(kind, z, eps)
    if not kind.is_periodic:
        return 1.0 / z**2
    k = kind.kappa
    q, _ = _exp2i(k * z)
    return -4.0 * k**2 * q / (q - 1.0) ** 2


def v_pot_prime(kind, z, eps=EPS_SING):
    """Derivative of :func:`v_pot`; equals ``-2 alpha V`` for both kinds."""
    z = _check(kind, z, eps)
    if not kind.is_periodic:
        return -2.0 / z**3
    return -2.0 * alpha(kind, z, eps) * v_pot(kind, z, eps)


def pair_matrix(kind, poles, fn, eps=EPS_SING):
    """Matrix ``fn(kind, p_j - p_k)`` over distinct pairs, zero on the diagonal.

    Raises:
        PoleCollision: if two poles coincide within ``eps``.
    """
    poles = np.asarray(poles, dtype=complex)
    n = poles.size
    diff = poles[:, None] - poles[None, :]
    idx = np.diag_indices(n)
    diff[idx] = 1.0 if not kind.is_periodic else 0.5 * kind.L
    try:
        out = fn(kind, diff, eps)
    except Singular as exc:
        raise PoleCollision("two poles coincide") from exc
    out[idx] = 0.0
    return out
