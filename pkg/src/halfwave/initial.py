"""Construction of admissible initial data.

Four routes are provided:

* :func:`solve_iterative` solves the constraints for given poles and spin
  rotation axes by fixed-point iteration;
* :func:`traveling_wave` builds the co-moving N-soliton from the partial
  fractions of a Blaschke product;
* :func:`exact_catalog` returns the published rational examples verbatim
  (use :func:`catalog_audit` to see which of them are admissible);
* :func:`random_scenario` draws reproducible random pole/axis sets.
"""

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .constraints import constraint_residuals
from .cvec import E1, E2, E3
from .errors import NoConvergence, PoleCollision, SamplingExhausted, SeparationWarning
from .field import SpinPoleData
from .kernels import Kernel, alpha, pair_matrix


@dataclass
class SolitonSpec:
    """Input of the constraint solver: poles, rotation axes and vacuum direction.

    ``frames`` optionally fixes the orthonormal pairs ``(n_{j,1}, n_{j,2})``;
    they must satisfy ``n_{j,2} . n0 = 0``.  Otherwise they are derived from
    the axes (see :func:`spin_frames`).
    """

    kind: Kernel
    poles: np.ndarray
    axes: np.ndarray
    vacuum_direction: np.ndarray
    frames: Optional[tuple] = None

    def __post_init__(self):
        self.poles = np.atleast_1d(np.asarray(self.poles, dtype=complex))
        self.axes = np.asarray(self.axes, dtype=float).reshape(self.poles.size, 3)
        self.vacuum_direction = np.asarray(self.vacuum_direction, dtype=float).reshape(3)
        if np.any(self.poles.imag <= 0):
            raise ValueError("poles must lie in the upper half-plane")
        if not np.allclose(np.linalg.norm(self.axes, axis=1), 1.0, atol=1e-12):
            raise ValueError("axes must be unit vectors")
        if not abs(np.linalg.norm(self.vacuum_direction) - 1.0) < 1e-12:
            raise ValueError("vacuum direction must be a unit vector")
        if self.frames is not None:
            n1, n2 = (np.asarray(f, dtype=float).reshape(self.poles.size, 3)
                      for f in self.frames)
            self.frames = (n1, n2)
            self.axes = np.cross(n1, n2)

    @property
    def N(self):
        return self.poles.size

    def to_dict(self):
        d = {
            "kernel": self.kind.to_dict(),
            "poles": [[p.real, p.imag] for p in self.poles],
            "axes": self.axes.tolist(),
            "vacuum": self.vacuum_direction.tolist(),
        }
        if self.frames is not None:
            d["frames"] = [self.frames[0].tolist(), self.frames[1].tolist()]
        return d


@dataclass
class IterationOptions:
    tol: float = 1e-10
    max_iter: int = 500
    separation_warning_threshold: float = 1.0

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


@dataclass
class SolveResult:
    data: SpinPoleData
    iterations: int
    converged: bool
    changes: list = field(default_factory=list)
    residual: float = np.nan
    m: float = 1.0

    def iterations_to(self, tol):
        """First iteration whose update fell below ``tol`` (None if never)."""
        for i, c in enumerate(self.changes, start=1):
            if c < tol:
                return i
        return None


def spin_frames(axes, n0):
    """Orthonormal frames with ``n1 ^ n2 = axis`` and ``n2 . n0 = 0``."""
    axes = np.asarray(axes, dtype=float).reshape(-1, 3)
    n1 = np.empty_like(axes)
    n2 = np.empty_like(axes)
    for j, n in enumerate(axes):
        c = np.cross(n0, n)
        nc = np.linalg.norm(c)
        if nc < 1e-12:
            # Axis parallel to the vacuum: any direction orthogonal to n0 works.
            helper = E1 if abs(n0[0]) < 0.9 else E2
            c = np.cross(n0, helper)
            nc = np.linalg.norm(c)
        n2[j] = c / nc
        n1[j] = np.cross(n2[j], n)
    return n1, n2


def separations(poles):
    """Pairwise ``|Re a_j / Im a_j - Re a_k / Im a_k|`` for ``j < k``."""
    q = poles.real / poles.imag
    i, j = np.triu_indices(poles.size, 1)
    return np.abs(q[i] - q[j])


def iterate_constraints(spec, tol=1e-10, max_iter=500):
    """Run the fixed-point iteration without raising on non-convergence."""
    kind, a, n0 = spec.kind, spec.poles, spec.vacuum_direction
    n1, n2 = spec.frames if spec.frames is not None else spin_frames(spec.axes, n0)
    kappa2 = kind.kappa**2
    A_uu = pair_matrix(kind, a, alpha)
    A_ul = alpha(kind, a[:, None] - a.conj()[None, :])
    np.fill_diagonal(A_ul, 0.0)
    denom = 2j * np.diag(alpha(kind, a[:, None] - a.conj()[None, :]))
    plus = n1 + 1j * n2
    minus = n1 - 1j * n2

    s_base = (n1 @ n0) / denom
    if kind.is_periodic:
        bracket = 1.0 - 4.0 * kappa2 * np.real(np.sum(np.outer(s_base, s_base) * (n2 @ n2.T)))
        if not bracket > 0:
            raise NoConvergence("base step has no real vacuum length", iterations=0)
        m = 1.0 / np.sqrt(bracket)
    else:
        m = 1.0
    s = m * s_base

    changes = []
    converged = False
    residual = np.nan
    it = 0
    for it in range(1, max_iter + 1):
        S = s[:, None] * plus
        mj = m * n0 + 1j * (A_uu @ S) - 1j * (A_ul @ S.conj())
        s_new = np.sum(minus * mj.conj(), axis=1) / denom
        if kind.is_periodic:
            im_total = np.sum(S.imag, axis=0)
            m_new = float(np.sqrt(1.0 + 4.0 * kappa2 * np.dot(im_total, im_total)))
        else:
            m_new = 1.0
        change = max(np.max(np.abs(s_new - s)), abs(m_new - m))
        s, m = s_new, m_new
        changes.append(float(change))
        if not np.isfinite(change):
            break
        if change < tol:
            data = SpinPoleData.real(m * n0, a, s[:, None] * plus)
            residual = constraint_residuals(data, kind).max_residual
            if residual <= tol:
                converged = True
                break

    data = SpinPoleData.real(m * n0, a, s[:, None] * plus)
    if not converged and np.all(np.isfinite(s)):
        residual = constraint_residuals(data, kind).max_residual
    data.meta.update({"source": "iterative", "iterations": it, "vacuum_length": m})
    return SolveResult(data, it, converged, changes, residual, m)


def solve_iterative(spec, opts=None):
    """Solve the constraints for ``spec`` by fixed-point iteration.

    The spins are ``s_j (n_{j,1} + i n_{j,2})`` with complex scalars ``s_j``
    and the vacuum is ``m n0``; for the rational kernel ``m = 1``.

    Returns:
        :class:`SolveResult` with real-reduced data and the iteration count.

    Raises:
        PoleCollision: for coincident poles.
        NoConvergence: if ``opts.max_iter`` iterations do not reach ``opts.tol``.
    """
    opts = opts or IterationOptions()
    if spec.N > 1 and np.any(separations(spec.poles) <= opts.separation_warning_threshold):
        warnings.warn("poles are poorly separated; the iteration may not converge",
                      SeparationWarning, stacklevel=2)
    res = iterate_constraints(spec, opts.tol, opts.max_iter)
    if not res.converged:
        last = res.changes[-1] if res.changes else np.nan
        raise NoConvergence(
            f"no convergence after {res.iterations} iterations "
            f"(last change {last:.3g}, residual {res.residual:.3g})",
            last_change=last, iterations=res.iterations)
    return res


def one_soliton(pole, axis, vacuum_direction, kind=None):
    """Admissible single-soliton data with the given pole and rotation axis."""
    spec = SolitonSpec(kind or Kernel.rational(), [pole], [axis], vacuum_direction)
    return solve_iterative(spec, IterationOptions(tol=1e-14, max_iter=50)).data


def blaschke_residues(poles):
    """Residues ``B_k`` of ``B(z) = prod (z - a_j)/(z - conj(a_j))`` at ``conj(a_k)``."""
    a = np.atleast_1d(np.asarray(poles, dtype=complex))
    n = a.size
    if n > 1 and np.min(np.abs(a[:, None] - a[None, :]) + np.eye(n)) < 1e-12:
        raise PoleCollision("two poles coincide")
    ac = a.conj()
    B = np.empty(n, dtype=complex)
    for k in range(n):
        others = np.arange(n) != k
        B[k] = (ac[k] - a[k]) * np.prod((ac[k] - a[others]) / (ac[k] - ac[others]))
    return B


def blaschke(poles, z):
    """Evaluate the Blaschke product at ``z``."""
    a = np.atleast_1d(np.asarray(poles, dtype=complex))
    z = np.asarray(z, dtype=complex)
    return np.prod((z[..., None] - a) / (z[..., None] - a.conj()), axis=-1)


def traveling_wave(poles, theta, chirality=1):
    """Co-moving N-soliton with vacuum ``cos(theta) e1 + sin(theta) e3``.

    ``chirality=+1`` selects spins along ``e1 - i e2`` (velocity ``-sin theta``),
    ``chirality=-1`` spins along ``e1 + i e2`` (velocity ``+sin theta``).
    """
    if chirality not in (1, -1):
        raise ValueError("chirality must be +1 or -1")
    a = np.atleast_1d(np.asarray(poles, dtype=complex))
    B = blaschke_residues(a)
    scal = np.conj(1j * B * np.cos(theta) / 2.0)
    direction = E1 - chirality * 1j * E2
    m0 = np.cos(theta) * E1 + np.sin(theta) * E3
    meta = {"source": "traveling_wave", "theta": float(theta), "chirality": chirality,
            "velocity": float(-chirality * np.sin(theta))}
    return SpinPoleData.real(m0, a, scal[:, None] * direction, meta)


_S3 = np.sqrt(3.0)
_CATALOG = {
    "one_soliton": (
        [-_S3 / 2, 0.0, 0.5],
        [1j],
        [[_S3 / 2, -_S3 * 1j / 2, 0.0]],
    ),
    "two_soliton": (
        [0.0, 0.0, -1.0],
        [1j, 2j],
        [[4j / 3, -4 / 3, 0.0], [-10j / 3, 8 / 3, 2.0]],
    ),
    "three_soliton": (
        [0.0, 0.0, -1.0],
        [1j, np.exp(1j * np.pi / 4), np.exp(3j * np.pi / 4)],
        [
            [-1.0, 1j, 0.0],
            [np.exp(3j * np.pi / 4) / 2, (-1 - 1j) / 2, np.exp(3j * np.pi / 4) / 2],
            [np.exp(5j * np.pi / 4) / 2, (1 - 1j) / 2, np.exp(5j * np.pi / 4) / 2],
        ],
    ),
}

CATALOG_IDS = tuple(_CATALOG)


def exact_catalog(name):
    """Published rational initial data, returned exactly as printed.

    The entries are reference data and are *not* guaranteed to be admissible;
    run :func:`~halfwave.constraints.constraint_residuals` or
    :func:`catalog_audit` before evolving them.
    """
    try:
        m0, a, s = _CATALOG[name]
    except KeyError:
        raise ValueError(f"unknown catalog entry {name!r}; expected one of {CATALOG_IDS}")
    return SpinPoleData.real(m0, a, s, {"source": "catalog", "id": name,
                                        "validated": False})


def catalog_audit(tol=1e-8):
    """Constraint report of every catalog entry, as printed and with negated spins."""
    kind = Kernel.rational()
    out = {}
    for name in CATALOG_IDS:
        data = exact_catalog(name)
        flipped = SpinPoleData.real(data.m0, data.upper_poles, -data.upper_spins)
        rep = constraint_residuals(data, kind)
        rep_f = constraint_residuals(flipped, kind)
        out[name] = {
            "printed": rep.to_dict() | {"admissible": rep.admissible(tol)},
            "negated_spins": rep_f.to_dict() | {"admissible": rep_f.admissible(tol)},
        }
    return out


def _unit_vectors(rng, n):
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_scenario(N, seed, min_separation=1.0, kind=None, max_rejections=10_000):
    """Reproducible random spec: uniform axes and vacuum on the sphere,
    ``Re a`` in [-5, 5], ``Im a`` in [0.5, 2], poles resampled until all
    pairwise separations exceed ``min_separation``.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    rng = np.random.default_rng(seed)
    axes = _unit_vectors(rng, N)
    n0 = _unit_vectors(rng, 1)[0]
    for _ in range(max_rejections):
        poles = rng.uniform(-5, 5, N) + 1j * rng.uniform(0.5, 2.0, N)
        if N == 1 or np.all(separations(poles) > min_separation):
            return SolitonSpec(kind or Kernel.rational(), poles, axes, n0)
    raise SamplingExhausted(f"no admissible pole set after {max_rejections} draws")


def convergence_statistics(count=100, seed=0, n_values=(2, 3, 4, 5), tol=1e-10,
                           max_iter=150, coarse_tol=1e-1, kind=None):
    """Run the iteration on ``count`` random scenarios.

    Scenario ``i`` uses ``N = n_values[i % len(n_values)]`` and seed
    ``seed + i``.  Returns one record per scenario with the iteration count,
    the convergence flag and the first iteration whose update fell below
    ``coarse_tol``.
    """
    records = []
    for i in range(count):
        N = n_values[i % len(n_values)]
        spec = random_scenario(N, seed + i, kind=kind)
        try:
            res = iterate_constraints(spec, tol, max_iter)
            converged, iterations, coarse = res.converged, res.iterations, res.iterations_to(coarse_tol)
        except NoConvergence:
            converged, iterations, coarse = False, 0, None
        records.append({"index": i, "seed": seed + i, "N": N, "converged": converged,
                        "iterations": iterations, "iterations_to_coarse": coarse})
    return records
