"""Adaptive Dormand-Prince 5(4) integration for complex, vectorized states."""

from __future__ import annotations

import numpy as np


class IntegrationError(RuntimeError):
    pass


# Dormand-Prince tableau
_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
_A = [
    np.zeros(0),
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_A = [np.asarray(row, dtype=float) for row in _A]
_B5 = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_B4 = np.array([5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0


def _segment(rhs, t0, t1, y, rtol, atol, h, max_steps, on_step):
    t = t0
    span = t1 - t0
    # stages never sample the right end, so a right-continuous rhs keeps this
    # segment's piece
    t_last = np.nextafter(t1, t0)
    k1 = rhs(t, y)
    shape = y.shape
    # stage derivatives as rows of a flat matrix so each combination is one matmul
    K = np.empty((7, y.size), dtype=complex)
    steps = 0
    while t < t1:
        if steps >= max_steps:
            raise IntegrationError(f"exceeded {max_steps} steps at t={t}")
        h = min(h, t1 - t)
        if h <= 1e-14 * max(1.0, abs(t)):
            raise IntegrationError(f"step size underflow at t={t}")
        K[0] = np.ravel(k1)
        for i in range(1, 7):
            yi = y + h * (_A[i] @ K[:i]).reshape(shape)
            K[i] = rhs(min(t + _C[i] * h, t_last), yi).ravel()
        y_new = y + h * (_B5 @ K).reshape(shape)
        err = h * (_E @ K)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new)).ravel()
        err_norm = float(np.max(np.abs(err) / scale)) if np.size(err) else 0.0
        steps += 1
        if err_norm <= 1.0:
            t = t0 + span if t + h >= t1 - 1e-15 * max(1.0, abs(t1)) else t + h
            y = y_new
            k1 = K[6].copy()  # first-same-as-last
            if on_step is not None:
                on_step(t, y)
            factor = MAX_FACTOR if err_norm == 0 else min(MAX_FACTOR, SAFETY * err_norm ** -0.2)
        else:
            factor = max(MIN_FACTOR, SAFETY * err_norm ** -0.2)
        h *= factor
    return y, h


def dopri5(
    rhs,
    t0: float,
    t1: float,
    y0,
    rtol: float = 1e-10,
    atol: float = 1e-10,
    h0: float | None = None,
    breakpoints=(),
    max_steps: int = 1_000_000,
    on_step=None,
):
    """Integrate ``y' = rhs(t, y)`` from ``t0`` to ``t1 >= t0``.

    ``y0`` may be any complex array; error control uses the worst component,
    so all entries share one step sequence.  Steps never cross an entry of
    ``breakpoints``.  ``on_step(t, y)`` is called after each accepted step.
    """
    y = np.array(y0, dtype=complex)
    if t1 < t0:
        raise ValueError(f"t1={t1} precedes t0={t0}")
    if t1 == t0:
        return y
    h = (t1 - t0) / 100 if h0 is None else h0
    cuts = [t0] + sorted(b for b in set(breakpoints) if t0 < b < t1) + [t1]
    for a, b in zip(cuts[:-1], cuts[1:]):
        y, h = _segment(rhs, a, b, y, rtol, atol, min(h, b - a), max_steps, on_step)
    return y
