"""Time evolution of spin-pole data.

Two routes are available.  The first-order system moves every pole with the
velocity fixed by its spin and ``b`` vector and evolves spins by

    s_j' = -sum_{k != j} (1 + r_j r_k) (s_j ^ s_k) V(p_j - p_k).

The second-order route is the spin Calogero-Moser system

    p_j'' = -sum_{k != j} (1 + r_j r_k) (s_j . s_k) V'(p_j - p_k)

with the same spin equation, seeded with the first-order initial velocities.
In real-reduced mode only the upper family is integrated and the lower one is
obtained by conjugation.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .constraints import EPS_SPIN, TOL_ADMISSIBLE, constraint_residuals, initial_velocities
from .cvec import cross, dot
from .errors import DegenerateSpin, NotAdmissible, PoleCrossing, StepFailure
from .field import Mode, norm_residual, total_energy
from .integrate import DormandPrince
from .kernels import alpha, pair_matrix, v_pot, v_pot_prime


class Order(str, Enum):
    FIRST = "first"
    SECOND = "second"


@dataclass
class EvolveOptions:
    """Integration settings.

    ``t_ref`` is the time at which the initial data is given; it defaults to
    ``t_span[0]``.  Samples on either side of ``t_ref`` are reached by
    integrating forward or backward from it.
    """

    mode: Order = Order.FIRST
    rel_tol: float = 1e-10
    abs_tol: float = 1e-10
    t_span: tuple = (0.0, 1.0)
    sample_count: int = 101
    pole_floor: float = 1e-6
    t_ref: Optional[float] = None
    probe_points: Optional[Sequence[float]] = None
    monitor_energy: bool = True

    def __post_init__(self):
        self.mode = Order(self.mode)
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.sample_count < 1:
            raise ValueError("sample_count must be at least 1")
        if self.pole_floor < 0:
            raise ValueError("pole_floor must be non-negative")
        self.t_span = (float(self.t_span[0]), float(self.t_span[1]))

    def sample_times(self):
        t0, t1 = self.t_span
        if self.sample_count == 1:
            return np.array([t0])
        return np.linspace(t0, t1, self.sample_count)

    def to_dict(self):
        return {
            "mode": self.mode.value,
            "rel_tol": self.rel_tol,
            "abs_tol": self.abs_tol,
            "t_span": list(self.t_span),
            "sample_count": self.sample_count,
            "pole_floor": self.pole_floor,
            "t_ref": self.t_ref,
        }


@dataclass
class Trajectory:
    """Sampled solution of the pole dynamics.

    ``velocities[i]`` holds ``(adot, bdot)`` at ``times[i]``.  ``monitors``
    maps a name to an array over samples:

    - ``min_im_upper``: smallest ``Im a_j``
    - ``max_im_lower``: largest ``Im b_k`` (negative while admissible)
    - ``constraint_residual``: largest constraint residual
    - ``spin_null``: largest ``|s . s|`` over both families
    - ``norm_residual``: largest ``|m.m - rho2|`` at the probe points
    - ``energy``: total energy (when enabled)
    """

    kind: object
    order: Order
    times: np.ndarray
    states: list
    velocities: list
    monitors: dict = field(default_factory=dict)
    complete: bool = True

    def __len__(self):
        return len(self.times)

    @property
    def upper_poles(self):
        return np.array([s.upper_poles for s in self.states])

    @property
    def lower_poles(self):
        return np.array([s.lower_poles for s in self.states])

    @property
    def upper_spins(self):
        return np.array([s.upper_spins for s in self.states])

    @property
    def lower_spins(self):
        return np.array([s.lower_spins for s in self.states])


def _full_arrays(data):
    poles, spins, r = data.signed()
    n_active = data.N if data.mode is Mode.REAL else data.N + data.M
    return poles, spins, r, n_active


def _spin_rhs(kind, poles, spins, r, n_active):
    V = pair_matrix(kind, poles, v_pot)[:n_active]
    w = (1.0 + np.outer(r[:n_active], r)) * V
    return -cross(spins[:n_active], w @ spins)


def _first_order(kind, m0, poles, spins, r, n_active):
    A = pair_matrix(kind, poles, alpha)[:n_active]
    s = spins[:n_active]
    b = 1j * m0 - A @ (r[:, None] * spins)
    herm = np.real(dot(s, s.conj()))
    if np.any(herm < EPS_SPIN):
        raise DegenerateSpin("spin with vanishing norm")
    pdot = r[:n_active] * dot(cross(s, s.conj()), b) / herm
    return pdot, _spin_rhs(kind, poles, spins, r, n_active)


def _second_order(kind, poles, spins, r, n_active):
    Vp = pair_matrix(kind, poles, v_pot_prime)[:n_active]
    w = (1.0 + np.outer(r[:n_active], r)) * Vp * (spins[:n_active] @ spins.T)
    return -w.sum(axis=1), _spin_rhs(kind, poles, spins, r, n_active)


def _split(active, data):
    if data.mode is Mode.REAL:
        return active, active.conj()
    return active[: data.N], active[data.N:]


def rhs_first_order(state, kind):
    """Time derivatives ``(adot, bdot, sdot, tdot)`` of the first-order system."""
    poles, spins, r, n_active = _full_arrays(state)
    pdot, sdot = _first_order(kind, state.m0, poles, spins, r, n_active)
    adot, bdot = _split(pdot, state)
    sd, td = _split(sdot, state)
    return adot, bdot, sd, td


def rhs_second_order(state, kind):
    """Accelerations and spin derivatives ``(addot, bddot, sdot, tdot)``.

    The accelerations depend only on positions and spins, so velocities are
    not needed here.
    """
    poles, spins, r, n_active = _full_arrays(state)
    acc, sdot = _second_order(kind, poles, spins, r, n_active)
    a, b = _split(acc, state)
    sd, td = _split(sdot, state)
    return a, b, sd, td


class _System:
    """Flattening between ``SpinPoleData`` and the integrator state vector."""

    def __init__(self, data, kind, order):
        self.data = data
        self.kind = kind
        self.order = order
        self.real = data.mode is Mode.REAL
        _, _, r, self.n = _full_arrays(data)
        self.r = r
        self.m0 = data.m0

    def _expand(self, p, s):
        if self.real:
            return np.concatenate([p, p.conj()]), np.concatenate([s, s.conj()])
        return p, s

    def pack(self, data, velocities=None):
        poles, spins, _, n = _full_arrays(data)
        parts = [poles[:n]]
        if self.order is Order.SECOND:
            parts.append(np.asarray(velocities, dtype=complex)[:n])
        parts.append(spins[:n].ravel())
        return np.concatenate(parts)

    def unpack(self, y):
        n = self.n
        p = y[:n]
        if self.order is Order.SECOND:
            v = y[n:2 * n]
            s = y[2 * n:].reshape(n, 3)
        else:
            v = None
            s = y[n:].reshape(n, 3)
        return p, v, s

    def __call__(self, t, y):
        p, v, s = self.unpack(y)
        poles, spins = self._expand(p, s)
        if self.order is Order.FIRST:
            pdot, sdot = _first_order(self.kind, self.m0, poles, spins, self.r, self.n)
            return np.concatenate([pdot, sdot.ravel()])
        acc, sdot = _second_order(self.kind, poles, spins, self.r, self.n)
        return np.concatenate([v, acc, sdot.ravel()])

    def to_state(self, y):
        p, v, s = self.unpack(y)
        d = self.data
        if self.real:
            state = d.with_state(p, s)
        else:
            state = d.with_state(p[: d.N], s[: d.N], p[d.N:], s[d.N:])
        if v is None:
            poles, spins = self._expand(p, s)
            v, _ = _first_order(self.kind, self.m0, poles, spins, self.r, self.n)
        return state, _split(v, d)

    def distances(self, y):
        """Distances of the two families from the real axis."""
        p = y[: self.n]
        if self.real:
            up, low = p, np.empty(0)
        else:
            up, low = p[: self.data.N], p[self.data.N:]
        du = up.imag.min() if up.size else np.inf
        dl = (-low.imag).min() if low.size else np.inf
        return min(du, dl)


def _default_probes(kind):
    if kind.is_periodic:
        return -kind.L / 2 + kind.L * np.arange(64) / 64
    return np.linspace(-30.0, 30.0, 64)


def _monitor(state, kind, probes, with_energy):
    report = constraint_residuals(state, kind)
    _, spins, _ = state.signed()
    out = {
        "min_im_upper": state.upper_poles.imag.min() if state.N else np.inf,
        "max_im_lower": state.lower_poles.imag.max() if state.M else -np.inf,
        "constraint_residual": report.max_residual,
        "spin_null": np.abs(dot(spins, spins)).max() if len(spins) else 0.0,
        "norm_residual": np.abs(norm_residual(state, kind, probes)).max(),
    }
    if with_energy:
        e = total_energy(state, kind)
        out["energy"] = float(np.real(e))
    return out


def _run_leg(system, y0, t_ref, times, opts):
    """Integrate from ``t_ref`` through ``times``; always returns what was reached."""
    last = {"t": t_ref, "d": system.distances(y0)}

    def check(t, y):
        d = system.distances(y)
        if d <= opts.pole_floor:
            # Linear extrapolation of the distance to zero.
            slope = (d - last["d"]) / (t - last["t"]) if t != last["t"] else 0.0
            t_cross = t - d / slope if slope != 0 else t
            raise PoleCrossing(
                f"pole within {opts.pole_floor:g} of the real axis at t = {t:.6g}",
                time=float(np.real(t_cross)))
        last["t"], last["d"] = t, d

    solver = DormandPrince(system, rtol=opts.rel_tol, atol=opts.abs_tol, step_check=check)
    error = None
    try:
        solver.run(t_ref, y0, times)
    except (PoleCrossing, StepFailure) as exc:
        error = exc
    return solver.times, solver.values, error


def evolve(data, kind, opts=None):
    """Integrate spin-pole data over ``opts.t_span``.

    Raises:
        NotAdmissible: if the initial data violates the constraints.
        PoleCrossing: if a pole comes within ``pole_floor`` of the real axis;
            ``exc.trajectory`` holds the samples reached and ``exc.time`` an
            estimate of the crossing time.
        StepFailure: if the step size underflows; also carries a partial
            trajectory.
        PoleCollision, DegenerateSpin: from the right-hand side.
    """
    opts = opts or EvolveOptions()
    report = constraint_residuals(data, kind)
    if report.max_residual > TOL_ADMISSIBLE:
        raise NotAdmissible(
            f"max constraint residual {report.max_residual:.3g} exceeds {TOL_ADMISSIBLE:.1g}",
            report)
    system = _System(data, kind, opts.mode)
    velocities = None
    if opts.mode is Order.SECOND:
        adot, bdot = initial_velocities(data, kind)
        velocities = adot if data.mode is Mode.REAL else np.concatenate([adot, bdot])
    y0 = system.pack(data, velocities)

    times = opts.sample_times()
    t_ref = opts.t_span[0] if opts.t_ref is None else float(opts.t_ref)
    direction = 1.0 if opts.t_span[1] >= opts.t_span[0] else -1.0
    ahead = direction * (times - t_ref) >= 0
    t_fwd, val_fwd, err_fwd = _run_leg(system, y0, t_ref, times[ahead], opts)
    t_bwd, val_bwd, err_bwd = [], [], None
    if err_fwd is None and np.any(~ahead):
        t_bwd, val_bwd, err_bwd = _run_leg(system, y0, t_ref, times[~ahead][::-1], opts)
    pairs = sorted(zip(t_bwd + t_fwd, val_bwd + val_fwd), key=lambda p: direction * p[0])

    probes = np.asarray(opts.probe_points if opts.probe_points is not None
                        else _default_probes(kind), dtype=float)
    states, vels, mons = [], [], {}
    for _, y in pairs:
        state, v = system.to_state(y)
        states.append(state)
        vels.append(v)
        for key, val in _monitor(state, kind, probes, opts.monitor_energy).items():
            mons.setdefault(key, []).append(val)
    error = err_fwd or err_bwd
    traj = Trajectory(kind=kind, order=opts.mode,
                      times=np.array([p[0] for p in pairs], dtype=float),
                      states=states, velocities=vels,
                      monitors={k: np.asarray(v, dtype=float) for k, v in mons.items()},
                      complete=error is None)
    if error is not None:
        error.trajectory = traj
        raise error
    return traj


def backlund_crosscheck(data, kind, t_span, tol=1e-10, sample_count=101):
    """Compare first-order and second-order evolutions of the same data.

    Returns:
        ``(pole_deviation, spin_deviation)``: maxima over samples and poles of
        the absolute differences.
    """
    common = dict(rel_tol=tol, abs_tol=tol, t_span=t_span, sample_count=sample_count,
                  monitor_energy=False, probe_points=[0.0])
    one = evolve(data, kind, EvolveOptions(mode=Order.FIRST, **common))
    two = evolve(data, kind, EvolveOptions(mode=Order.SECOND, **common))
    dp = max(np.abs(one.upper_poles - two.upper_poles).max(initial=0.0),
             np.abs(one.lower_poles - two.lower_poles).max(initial=0.0))
    ds = max(np.abs(one.upper_spins - two.upper_spins).max(initial=0.0),
             np.abs(one.lower_spins - two.lower_spins).max(initial=0.0))
    return float(dp), float(ds)
