"""Complex three-vectors with the bilinear (unconjugated) dot product.

Vectors are plain numpy arrays with a trailing axis of length 3, so every
function here broadcasts over leading axes.  The null-vector helpers
implement the decomposition ``s = s (n1 + i n2)`` of vectors with ``s.s = 0``
and the expansion of an arbitrary vector in the basis ``s, s*, s* x s``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NotNull, NotOrthogonal, ZeroVector

EPS_NULL = 1e-10

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])


def vec(x1, x2, x3):
    """Build a complex 3-vector."""
    return np.array([x1, x2, x3], dtype=complex)


def dot(u, v):
    """Bilinear dot product sum_a u_a v_a (no complex conjugation)."""
    u = np.asarray(u)
    v = np.asarray(v)
    return np.sum(u * v, axis=-1)


def cross(u, v):
    """Cross product u ^ v, componentwise as for real vectors."""
    return np.cross(np.asarray(u), np.asarray(v))


def _check_null(v, eps):
    v = np.asarray(v, dtype=complex)
    herm = np.real(dot(v, v.conj()))
    if herm == 0.0:
        raise ZeroVector("vector is zero")
    if abs(dot(v, v)) > eps * herm:
        raise NotNull(f"v.v = {dot(v, v):.3g} is not zero (|v|^2 = {herm:.3g})")
    return v, herm


@dataclass(frozen=True)
class NullDecomposition:
    """Canonical representation ``v = s (n1 + i n2)`` of a null vector.

    ``s`` is real and positive; ``n1``, ``n2`` are orthonormal real vectors.
    The rotation axis ``n1 ^ n2`` is invariant under the U(1) freedom
    ``(s, n1, n2) -> (s e^{ia}, n1 cos a + n2 sin a, -n1 sin a + n2 cos a)``.
    """

    s: complex
    n1: np.ndarray
    n2: np.ndarray

    @property
    def axis(self):
        return np.cross(self.n1, self.n2)

    def reconstruct(self):
        return self.s * (self.n1 + 1j * self.n2)

    def rotate(self, angle):
        """Apply the U(1) transformation by ``angle``."""
        c, s = np.cos(angle), np.sin(angle)
        return NullDecomposition(
            self.s * np.exp(1j * angle),
            self.n1 * c + self.n2 * s,
            -self.n1 * s + self.n2 * c,
        )


def null_decompose(v, eps=EPS_NULL):
    """Split a null vector into ``s (n1 + i n2)`` with ``s > 0``.

    Raises:
        ZeroVector: if ``v`` is zero.
        NotNull: if ``|v.v| > eps |v|^2``.
    """
    v, _ = _check_null(v, eps)
    re, im = v.real, v.imag
    s = np.linalg.norm(re)
    n1 = re / s
    # Im v has the same length as Re v up to roundoff; re-orthonormalize so the
    # returned frame is exactly orthonormal.
    n2 = im - np.dot(im, n1) * n1
    n2 = n2 / np.linalg.norm(n2)
    return NullDecomposition(complex(s), n1, n2)


def basis_expand(v, s, eps=EPS_NULL):
    """Coefficients of ``v`` in the basis ``(s, s*, s* ^ s)`` for null ``s``.

    Returns ``(c1, c2, c3)`` with ``v = c1 s + c2 s* + c3 (s* ^ s)``.
    """
    s, herm = _check_null(s, eps)
    v = np.asarray(v, dtype=complex)
    sc = s.conj()
    c1 = dot(sc, v) / herm
    c2 = dot(s, v) / herm
    c3 = dot(cross(s, sc), v) / herm**2
    return c1, c2, c3


def parallel_project(s, v, eps=EPS_NULL):
    """Scalar ``lam`` with ``s ^ v = lam s`` for null ``s`` and ``s.v = 0``.

    Raises:
        NotNull, ZeroVector: if ``s`` is not a non-zero null vector.
        NotOrthogonal: if ``|s.v| > eps |s| |v|``.
    """
    s, herm = _check_null(s, eps)
    v = np.asarray(v, dtype=complex)
    vnorm = np.sqrt(np.real(dot(v, v.conj())))
    if abs(dot(s, v)) > eps * np.sqrt(herm) * max(vnorm, 1.0):
        raise NotOrthogonal(f"s.v = {dot(s, v):.3g} is not zero")
    return dot(cross(s.conj(), s), v) / herm


def project_scalar(s, v):
    """Unchecked, broadcasting version of :func:`parallel_project`."""
    sc = np.conj(s)
    return dot(cross(sc, s), v) / np.real(dot(sc, s))
