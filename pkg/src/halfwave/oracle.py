"""Pseudospectral solver for the periodic half-wave maps equation.

Used as an independent check on pole-ansatz solutions.  The Hilbert transform
acts on the Fourier mode ``exp(2 pi i k x / L)`` as multiplication by
``i sgn(k)``, so ``H d/dx`` is the real multiplier ``-2 pi |k| / L``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatch, Instability

INSTABILITY_THRESHOLD = 0.1


def grid_points(L, n):
    """Grid ``x_k = -L/2 + k L / n``."""
    return -L / 2 + L * np.arange(n) / n


@dataclass
class GridField:
    """Samples of a vector field on the uniform periodic grid.

    ``samples`` has shape ``(n, 3)``; real fields are stored as float64.
    """

    L: float
    samples: np.ndarray

    def __post_init__(self):
        self.L = float(self.L)
        s = np.asarray(self.samples)
        if s.ndim == 1:
            s = s[:, None]
        self.samples = s
        n = s.shape[0]
        if n < 8 or n & (n - 1):
            raise ValueError(f"grid size must be a power of two >= 8, got {n}")
        if self.L <= 0:
            raise ValueError("period must be positive")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")

    @property
    def n(self):
        return self.samples.shape[0]

    @property
    def x(self):
        return grid_points(self.L, self.n)

    @classmethod
    def from_function(cls, L, n, fn):
        """Sample ``fn(x)`` (returning ``(n, 3)``) on the grid."""
        return cls(L, fn(grid_points(L, n)))

    def norm2(self):
        return np.sum(self.samples**2, axis=-1)

    def to_csv(self, path):
        data = np.column_stack([self.x, np.real(self.samples)])
        np.savetxt(path, data, fmt="%.17g", delimiter=",", header="x,m1,m2,m3", comments="")

    @classmethod
    def from_csv(cls, path, L):
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(L, data[:, 1:])

    def to_binary(self, path):
        np.ascontiguousarray(np.real(self.samples), dtype="<f8").tofile(path)

    @classmethod
    def from_binary(cls, path, L):
        return cls(L, np.fromfile(path, dtype="<f8").reshape(-1, 3))


def wavenumbers(n):
    """Integer mode numbers in FFT order with the Nyquist mode set to zero."""
    k = np.fft.fftfreq(n, d=1.0 / n)
    k[n // 2] = 0.0
    return k


def discrete_hilbert(f, axis=0):
    """Periodic Hilbert transform of real samples along ``axis``.

    Multiplies mode ``k`` by ``i sgn(k)``; the mean and the Nyquist mode are
    removed, so ``H H = -Id`` exactly on fields without those components.
    """
    f = np.asarray(f, dtype=float)
    n = f.shape[axis]
    shape = [1] * f.ndim
    shape[axis] = n // 2 + 1
    mult = 1j * np.sign(wavenumbers(n)[: n // 2 + 1]).reshape(shape)
    return np.fft.irfft(np.fft.rfft(f, axis=axis) * mult, n=n, axis=axis)


def hilbert_dx(samples, L, dealias=False):
    """``H d/dx`` applied to each column of real ``(n, 3)`` samples."""
    n = samples.shape[0]
    k = wavenumbers(n)[: n // 2 + 1]
    mult = -2.0 * np.pi * np.abs(k) / L
    if dealias:
        mult = np.where(np.abs(k) <= n / 3, mult, 0.0)
    return np.fft.irfft(np.fft.rfft(samples, axis=0) * mult[:, None], n=n, axis=0)


def hwm_rhs(m, dealias=False):
    """``m ^ H m_x`` on the grid."""
    return GridField(m.L, np.cross(m.samples, hilbert_dx(m.samples, m.L, dealias)))


@dataclass
class PDEResult:
    """Snapshots of a fixed-step run; behaves like a list of :class:`GridField`."""

    times: np.ndarray
    fields: list
    norm_drift: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __len__(self):
        return len(self.fields)

    def __getitem__(self, i):
        return self.fields[i]

    def __iter__(self):
        return iter(self.fields)


def evolve_pde(m0, t_span, dt, sample_times=None, dealias=False):
    """Classical RK4 with a fixed step and no renormalization.

    The number of steps is ``round((t1 - t0) / dt)``; the step is adjusted so
    the run ends exactly at ``t1``.  Snapshots are kept at the steps closest
    to ``sample_times`` (default: start and end only).

    Raises:
        ValueError: if the initial field is not unit length to 1e-8.
        Instability: if ``max | |m|^2 - 1 |`` exceeds 0.1.
    """
    if np.abs(m0.norm2() - 1.0).max() > 1e-8:
        raise ValueError("initial field must have unit length on the grid")
    t0, t1 = map(float, t_span)
    n_steps = max(1, int(round(abs(t1 - t0) / dt))) if t1 != t0 else 0
    h = (t1 - t0) / n_steps if n_steps else 0.0
    if sample_times is None:
        sample_times = [t0, t1]
    keep = {int(round((t - t0) / h)) if h else 0 for t in sample_times}

    L = m0.L
    y = np.array(np.real(m0.samples), dtype=float)

    def f(u):
        return np.cross(u, hilbert_dx(u, L, dealias))

    times, fields, drift = [], [], []
    for step in range(n_steps + 1):
        dev = np.abs(np.sum(y * y, axis=1) - 1.0).max()
        drift.append(dev)
        if dev > INSTABILITY_THRESHOLD or not np.all(np.isfinite(y)):
            raise Instability(f"norm deviation {dev:.3g} at t = {t0 + step * h:.6g}",
                              time=t0 + step * h)
        if step in keep:
            times.append(t0 + step * h)
            fields.append(GridField(L, y.copy()))
        if step == n_steps:
            break
        k1 = f(y)
        k2 = f(y + 0.5 * h * k1)
        k3 = f(y + 0.5 * h * k2)
        k4 = f(y + h * k3)
        y = y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return PDEResult(np.array(times), fields, np.array(drift))


def compare_fields(a, b):
    """Sup-norm and RMS of the pointwise vector difference.

    Raises:
        GridMismatch: if the grids differ.
    """
    if a.n != b.n or not np.isclose(a.L, b.L, rtol=1e-14, atol=0.0):
        raise GridMismatch(f"grids differ: (L={a.L}, n={a.n}) vs (L={b.L}, n={b.n})")
    d = np.linalg.norm(a.samples - b.samples, axis=-1)
    return float(d.max()), float(np.sqrt(np.mean(d**2)))
