"""Adaptive Dormand-Prince 5(4) integrator for complex-valued ODE systems.

Step sizes are controlled by a PI controller (Gustafsson) and every requested
output time is hit exactly, so no interpolation error enters the samples.
"""

import numpy as np

from .errors import StepFailure

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array(_A[6] + [0.0])
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])

SAFETY = 0.9
BETA = 0.04
FAC_MIN = 0.2
FAC_MAX = 10.0


class DormandPrince:
    """Integrate ``y' = fun(t, y)`` and record ``y`` at prescribed times.

    ``step_check(t, y)`` is called after every accepted step and may raise to
    abort the run; samples recorded so far stay available in ``self.times``
    and ``self.values``.
    """

    def __init__(self, fun, rtol=1e-10, atol=1e-10, step_check=None, max_steps=2_000_000):
        self.fun = fun
        self.rtol = rtol
        self.atol = atol
        self.step_check = step_check
        self.max_steps = max_steps
        self.times = []
        self.values = []
        self.n_steps = 0
        self.n_rejected = 0

    def _norm(self, err, y, y_new):
        scale = self.atol + self.rtol * np.maximum(np.abs(y), np.abs(y_new))
        return np.sqrt(np.mean(np.abs(err / scale) ** 2))

    def _initial_step(self, t, y, f, direction, span):
        scale = self.atol + self.rtol * np.abs(y)
        d0 = np.sqrt(np.mean(np.abs(y / scale) ** 2))
        d1 = np.sqrt(np.mean(np.abs(f / scale) ** 2))
        h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
        h0 = min(h0, span)
        f1 = self.fun(t + direction * h0, y + direction * h0 * f)
        d2 = np.sqrt(np.mean(np.abs((f1 - f) / scale) ** 2)) / h0
        if max(d1, d2) <= 1e-15:
            h1 = max(1e-6, h0 * 1e-3)
        else:
            h1 = (0.01 / max(d1, d2)) ** (1 / 5)
        return min(100 * h0, h1, span)

    def run(self, t0, y0, t_eval):
        """Integrate from ``t0`` through the monotone sequence ``t_eval``."""
        t_eval = np.asarray(t_eval, dtype=float)
        y = np.array(y0, dtype=complex)
        t = float(t0)
        if t_eval.size == 0:
            return np.zeros((0,) + y.shape, dtype=complex)
        direction = 1.0 if t_eval[-1] >= t else -1.0
        if np.any(direction * np.diff(np.r_[t, t_eval]) < 0):
            raise ValueError("t_eval must be monotone and start at or beyond t0")
        if y.size == 0:
            self.times.extend(float(v) for v in t_eval)
            self.values.extend(y.copy() for _ in t_eval)
            return np.array(self.values)
        f = self.fun(t, y)
        span = abs(t_eval[-1] - t)
        h = self._initial_step(t, y, f, direction, span) if span > 0 else 0.0
        err_prev = 1e-4
        k = np.empty((7,) + y.shape, dtype=complex)

        for target in t_eval:
            while direction * (target - t) > 0:
                if self.n_steps >= self.max_steps:
                    raise StepFailure("maximum number of steps exceeded", time=t)
                h_min = 16 * np.spacing(max(abs(t), 1.0))
                if not h >= h_min:
                    raise StepFailure(f"step size underflow at t = {t:.6g}", time=t)
                last = h >= abs(target - t)
                h_step = abs(target - t) if last else h
                dt = direction * h_step
                k[0] = f
                for i in range(1, 7):
                    yi = y + dt * np.tensordot(_A[i], k[:i], axes=1)
                    k[i] = self.fun(t + _C[i] * dt, yi)
                y_new = y + dt * np.tensordot(_B[:6], k[:6], axes=1)
                err = self._norm(dt * np.tensordot(_E, k, axes=1), y, y_new)
                if not np.isfinite(err):
                    h *= FAC_MIN
                    self.n_rejected += 1
                    continue
                if err <= 1.0:
                    fac = SAFETY * err ** (-(0.2 - 0.75 * BETA)) * err_prev ** BETA if err > 0 else FAC_MAX
                    fac = min(FAC_MAX, max(FAC_MIN, fac))
                    err_prev = max(err, 1e-4)
                    t = target if last else t + dt
                    y = y_new
                    f = k[6]
                    self.n_steps += 1
                    if self.step_check is not None:
                        self.step_check(t, y)
                    # A step shortened to hit an output time says little about
                    # the next one; keep the controller's proposal in that case.
                    if not (last and h_step < h):
                        h = h_step * fac
                    else:
                        h = max(h, h_step * fac) if fac < 1 else h
                else:
                    h = h_step * max(FAC_MIN, SAFETY * err ** -0.2)
                    self.n_rejected += 1
            self.times.append(float(target))
            self.values.append(y.copy())
        return np.array(self.values)
