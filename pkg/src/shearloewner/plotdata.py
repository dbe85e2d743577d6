"""Column data for plotting, written as CSV with 17 significant digits."""

from __future__ import annotations

import io
import math

import numpy as np

from .loewner import HerglotzField, envelope_bound, flow_trajectory
from .shear import SHARP_CONSTANT, shear_field

KINDS = ("envelope", "defect-slice", "flow-trajectory")


def envelope_table(s: float = 0.0, t_end: float = 10.0, step: float = 0.01):
    if step <= 0 or t_end < s or s < 0:
        raise ValueError(f"invalid envelope range s={s}, t={t_end}, step={step}")
    n = int(math.floor((t_end - s) / step + 1e-9)) + 1
    rows = []
    for k in range(n):
        t = s + k * step
        env = envelope_bound(s, t)
        rows.append((t, env, math.exp(t) * env))
    return ("t", "envelope", "exp_t_envelope"), rows


def defect_slice_table(a: complex = SHARP_CONSTANT, r: float = 0.999, points: int = 201):
    """``-x^2 - y^2 + |a| x y^2`` along ``x^2 + y^2 = r^2`` with ``x, y >= 0``."""
    if not 0 < r < 1 or points < 2:
        raise ValueError(f"need 0 < r < 1 and at least 2 points, got r={r}, points={points}")
    rows = []
    for x in np.linspace(0.0, r, points):
        y = math.sqrt(max(r * r - x * x, 0.0))
        rows.append((x, y, -x * x - y * y + abs(a) * x * y * y))
    return ("x", "y", "defect"), rows


def trajectory_table(G: HerglotzField | None = None, z=(0.4, 0.6), s: float = 0.0, t: float = 5.0,
                     samples: int = 101, tol: float = 1e-10):
    G = G or HerglotzField.constant(shear_field(SHARP_CONSTANT))
    if samples < 2:
        raise ValueError("need at least 2 samples")
    times, w1, w2 = flow_trajectory(G, s, t, z, samples, tol)
    norm = np.sqrt(np.abs(w1) ** 2 + np.abs(w2) ** 2)
    rows = list(zip(times, w1.real, w1.imag, w2.real, w2.imag, norm))
    return ("t", "re_z1", "im_z1", "re_z2", "im_z2", "norm"), rows


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(f"{float(v):.17g}" for v in row) + "\n")
    return buf.getvalue()
