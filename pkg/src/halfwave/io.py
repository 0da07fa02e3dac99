"""JSON and CSV serialization.

Complex numbers are written as ``[re, im]`` pairs, floats with full
round-trip precision, and JSON keys are sorted so that identical inputs give
byte-identical files.
"""

import json

import numpy as np

from .field import Mode, SpinPoleData
from .kernels import Kernel

CSV_FMT = "%.17g"


def encode(obj):
    """Convert numpy and complex values to plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return encode(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [encode(float(obj.real)), encode(float(obj.imag))]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if np.isfinite(obj) else None
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def decode_complex(v):
    """Inverse of :func:`encode` for complex scalars and nested lists of pairs."""
    a = np.asarray(v, dtype=float)
    if a.shape == () or a.shape[-1] != 2:
        return a.astype(complex)
    return a[..., 0] + 1j * a[..., 1]


def dumps(obj):
    return json.dumps(encode(obj), sort_keys=True, indent=2) + "\n"


def write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def kernel_from_dict(d):
    kind = d.get("kind")
    if kind == "rational":
        return Kernel.rational()
    if kind == "trigonometric":
        return Kernel.trigonometric(float(d["L"]))
    raise ValueError(f"unknown kernel kind {kind!r}")


def data_to_dict(data):
    out = {
        "mode": data.mode.value,
        "m0": data.m0,
        "upper_poles": data.upper_poles,
        "upper_spins": data.upper_spins,
        "meta": data.meta,
    }
    if data.mode is Mode.GENERAL:
        out.update(lower_poles=data.lower_poles, lower_spins=data.lower_spins,
                   rho2=complex(data.rho2))
    return encode(out)


def data_from_dict(d):
    m0 = decode_complex(d["m0"]).reshape(3)
    up = decode_complex(d["upper_poles"]).reshape(-1)
    us = decode_complex(d["upper_spins"]).reshape(-1, 3) if up.size else np.zeros((0, 3))
    if Mode(d.get("mode", Mode.REAL.value)) is Mode.REAL:
        return SpinPoleData.real(m0, up, us, d.get("meta"))
    lp = decode_complex(d["lower_poles"]).reshape(-1)
    ls = decode_complex(d["lower_spins"]).reshape(-1, 3) if lp.size else np.zeros((0, 3))
    rho2 = complex(decode_complex(d.get("rho2", [1.0, 0.0])))
    return SpinPoleData.general(m0, up, us, lp, ls, rho2, d.get("meta"))


def trajectory_to_dict(traj):
    return encode({
        "kernel": traj.kind.to_dict(),
        "order": traj.order,
        "complete": traj.complete,
        "times": traj.times,
        "states": [data_to_dict(s) for s in traj.states],
        "velocities": [{"adot": a, "bdot": b} for a, b in traj.velocities],
        "monitors": traj.monitors,
    })


MONITOR_COLUMNS = ("min_im_upper", "max_im_lower", "constraint_residual", "spin_null",
                   "norm_residual", "energy")


def poles_table(traj):
    """Header and rows ``t, Re a_j, Im a_j, [Re b_k, Im b_k,] monitors``."""
    st = traj.states[0]
    header = ["t"]
    for j in range(st.N):
        header += [f"re_a{j}", f"im_a{j}"]
    general = st.mode is Mode.GENERAL
    if general:
        for k in range(st.M):
            header += [f"re_b{k}", f"im_b{k}"]
    mons = [c for c in MONITOR_COLUMNS if c in traj.monitors]
    header += mons
    rows = []
    for i, s in enumerate(traj.states):
        row = [traj.times[i]]
        for p in s.upper_poles:
            row += [p.real, p.imag]
        if general:
            for p in s.lower_poles:
                row += [p.real, p.imag]
        row += [traj.monitors[c][i] for c in mons]
        rows.append(row)
    return header, np.array(rows, dtype=float)


def write_csv(path, header, rows):
    rows = np.asarray(rows, dtype=float).reshape(-1, len(header))
    np.savetxt(path, rows, fmt=CSV_FMT, delimiter=",", header=",".join(header), comments="")
