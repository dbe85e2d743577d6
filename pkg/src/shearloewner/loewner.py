"""Loewner ODE flows driven by Herglotz vector fields.

The transition map ``phi_{s,t}`` solves ``d/dt phi = G(phi, t)`` with
``phi_{s,s} = id``; the chain is recovered as ``f_s = lim e^t phi_{s,t}``.
For shear fields ``G = (-z1 + q(t) z2^2, -z2)`` the flow stays a shear and
its ``z2^2`` coefficient ``a(s,t)`` has a closed form.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .mminus import require_normalized
from .ode import IntegrationError, dopri5
from .series import Point2, PowerSeriesMap2
from .shear import SHARP_CONSTANT, shear_field

DEFAULT_TOL = 1e-10
CHAIN_HORIZON = 20.0
STENCIL_RADIUS = 0.3
FLOW_CONSISTENCY = 1e-8


@dataclass(frozen=True)
class QProfile:
    """Right-continuous piecewise-constant ``q(t)``.

    ``starts[i]`` is where ``values[i]`` takes over; times before the first
    start use the first value.
    """

    starts: tuple[float, ...]
    values: tuple[complex, ...]

    def __post_init__(self):
        if not self.starts or len(self.starts) != len(self.values):
            raise ValueError("profile needs matching, nonempty starts and values")
        if any(b <= a for a, b in zip(self.starts, self.starts[1:])):
            raise ValueError("segment starts must be strictly increasing")
        object.__setattr__(self, "starts", tuple(float(s) for s in self.starts))
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))

    @classmethod
    def constant(cls, value: complex) -> "QProfile":
        return cls((0.0,), (value,))

    def __call__(self, t: float) -> complex:
        i = int(np.searchsorted(self.starts, t, side="right")) - 1
        return self.values[max(i, 0)]

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return self.starts[1:]

    @property
    def sup_abs(self) -> float:
        return max(abs(v) for v in self.values)

    def to_list(self) -> list:
        return [{"t_start": s, "value": [v.real, v.imag]} for s, v in zip(self.starts, self.values)]

    @classmethod
    def from_list(cls, data) -> "QProfile":
        try:
            starts = [float(rec["t_start"]) for rec in data]
            values = [complex(float(rec["value"][0]), float(rec["value"][1])) for rec in data]
        except (KeyError, TypeError, IndexError, ValueError) as exc:
            raise ValueError(f"malformed q profile: {exc}") from exc
        return cls(tuple(starts), tuple(values))


@dataclass(frozen=True)
class HerglotzField:
    """Time-dependent vector field ``t -> G(., t)`` normalized by ``dG_0 = -id``."""

    kind: str
    segments: tuple = ()
    func: Callable | None = None
    breakpoints: tuple = ()
    mminus_checked: bool = False

    @classmethod
    def constant(cls, H: PowerSeriesMap2, mminus_checked: bool = False) -> "HerglotzField":
        require_normalized(H)
        return cls("constant", ((0.0, H),), mminus_checked=mminus_checked)

    @classmethod
    def piecewise(cls, starts, fields, mminus_checked: bool = False) -> "HerglotzField":
        starts = tuple(float(s) for s in starts)
        if not starts or len(starts) != len(fields):
            raise ValueError("need matching, nonempty starts and fields")
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ValueError("segment starts must be strictly increasing")
        for H in fields:
            require_normalized(H)
        return cls("piecewise-constant", tuple(zip(starts, fields)), breakpoints=starts[1:],
                   mminus_checked=mminus_checked)

    @classmethod
    def from_callable(cls, fn: Callable[[float], PowerSeriesMap2], breakpoints=()) -> "HerglotzField":
        return cls("callable", func=fn, breakpoints=tuple(sorted(breakpoints)))

    @classmethod
    def from_profile(cls, q: QProfile, trunc_degree: int = 2) -> "HerglotzField":
        """Shear field ``(-z1 + q(t) z2^2, -z2)``; in M_- whenever ``|q| <= 3*sqrt(3)/2``."""
        fields = [shear_field(v, trunc_degree) for v in q.values]
        checked = q.sup_abs <= SHARP_CONSTANT
        return cls.piecewise(q.starts, fields, mminus_checked=checked)

    def value(self, t: float) -> PowerSeriesMap2:
        if self.kind == "callable":
            H = self.func(t)
            require_normalized(H)
            return H
        i = 0
        for k, (start, _) in enumerate(self.segments):
            if t >= start:
                i = k
        return self.segments[i][1]

    @property
    def trunc_degree(self) -> int:
        return self.value(0.0).trunc_degree


@dataclass
class TransitionMap:
    """``phi_{s,t}``, evaluated by integrating the Loewner ODE on demand."""

    field: HerglotzField
    s: float
    t: float
    tol: float = DEFAULT_TOL
    recovered_series: PowerSeriesMap2 | None = None

    def flow(self, z) -> Point2:
        return integrate_transition(self.field, self.s, self.t, z, self.tol)

    __call__ = flow


@dataclass
class CoefficientFlow:
    s: float
    t: float
    a_st: complex
    q_profile: object
    a_ode: complex = 0j
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        q = self.q_profile.to_list() if isinstance(self.q_profile, QProfile) else repr(self.q_profile)
        return {
            "s": self.s,
            "t": self.t,
            "a_st": [self.a_st.real, self.a_st.imag],
            "a_ode": [self.a_ode.real, self.a_ode.imag],
            "envelope": envelope_bound(self.s, self.t),
            "q_profile": q,
        }


def _check_times(s: float, t: float) -> None:
    if not 0 <= s <= t:
        raise ValueError(f"need 0 <= s <= t, got s={s}, t={t}")


def integrate_transition(G: HerglotzField, s: float, t: float, z, tol: float = DEFAULT_TOL) -> Point2:
    """``phi_{s,t}(z)``; ``z`` may hold scalars or equally shaped arrays."""
    _check_times(s, t)
    if tol <= 0:
        raise ValueError("tol must be positive")
    z1 = np.asarray(z[0], dtype=complex)
    z2 = np.asarray(z[1], dtype=complex)
    if np.any(np.sqrt(np.abs(z1) ** 2 + np.abs(z2) ** 2) >= 1):
        raise ValueError("initial points must lie inside the unit ball")
    shape = np.broadcast(z1, z2).shape
    y0 = np.stack([np.broadcast_to(z1, shape), np.broadcast_to(z2, shape)])

    def rhs(tau, y):
        w1, w2 = G.value(tau).evaluate(y[0], y[1])
        return np.array([w1, w2])

    y = dopri5(rhs, s, t, y0, rtol=tol, atol=tol, breakpoints=G.breakpoints)
    if y[0].ndim == 0:
        return Point2(complex(y[0]), complex(y[1]))
    return Point2(y[0], y[1])


def transition_map(G: HerglotzField, s: float, t: float, tol: float = DEFAULT_TOL) -> TransitionMap:
    _check_times(s, t)
    return TransitionMap(G, s, t, tol)


def flow_trajectory(G: HerglotzField, s: float, t: float, z, samples: int = 101, tol: float = DEFAULT_TOL):
    """``phi_{s,tau}(z)`` on an even grid of ``tau`` in ``[s, t]``."""
    _check_times(s, t)
    times = np.linspace(s, t, samples)
    out = np.empty((samples, 2), dtype=complex)
    out[0] = z
    for k in range(1, samples):
        out[k] = integrate_transition(G, times[k - 1], times[k], tuple(out[k - 1]), tol)
    return times, out[:, 0], out[:, 1]


def stencil_coefficients(values: np.ndarray, radius: float, degree: int) -> np.ndarray:
    """Taylor coefficients from samples on the torus ``|z1| = |z2| = radius``.

    ``values[j, k]`` is the function at ``(radius w^j, radius w^k)`` with
    ``w = exp(2 pi i / n)``; returns an ``(n, n)`` array with entries above
    total degree ``degree`` zeroed.
    """
    n = values.shape[0]
    c = np.fft.fft2(values) / (n * n)
    a = np.arange(n)
    c = c / radius ** (a[:, None] + a[None, :])
    c[(a[:, None] + a[None, :]) > degree] = 0
    return c


def recover_chain_map(
    G: HerglotzField,
    s: float = 0.0,
    T: float | None = None,
    stencil_degree: int | None = None,
    radius: float = STENCIL_RADIUS,
    tol: float = DEFAULT_TOL,
) -> PowerSeriesMap2:
    """Approximate ``f_s = lim_{t -> oo} e^t phi_{s,t}`` by ``e^T phi_{s,T}``.

    Integrates the rescaled flow ``psi = e^t phi`` (so the state does not
    decay to zero) on a tensor stencil of roots of unity and inverts by DFT.
    The truncation error is ``O(e^{-(T - s)})``.
    """
    T = s + CHAIN_HORIZON if T is None else T
    _check_times(s, T)
    D = G.trunc_degree
    stencil_degree = min(4, D) if stencil_degree is None else stencil_degree
    if stencil_degree > D:
        raise ValueError(f"stencil_degree {stencil_degree} exceeds the field's trunc_degree {D}")
    if stencil_degree < 1:
        raise ValueError("stencil_degree must be >= 1")
    n = 2 * stencil_degree + 1
    nodes = radius * np.exp(2j * np.pi * np.arange(n) / n)
    z1, z2 = np.meshgrid(nodes, nodes, indexing="ij")
    y0 = math.exp(s) * np.stack([z1, z2])

    def rhs(tau, psi):
        e = math.exp(tau)
        w1, w2 = G.value(tau).evaluate(psi[0] / e, psi[1] / e)
        return psi + e * np.stack([w1, w2])

    psi = dopri5(rhs, s, T, y0, rtol=tol, atol=tol, breakpoints=G.breakpoints)
    dense = np.zeros((2, D + 1, D + 1), dtype=complex)
    for comp in range(2):
        c = stencil_coefficients(psi[comp], radius, stencil_degree)
        m = min(n, D + 1)
        dense[comp, :m, :m] = c[:m, :m]
    return PowerSeriesMap2.from_dense(dense, D)


def envelope_bound(s: float, t: float) -> float:
    """``(3 sqrt(3) / 2) e^{s-t} (1 - e^{s-t})``: reachable ``|a(s,t)|`` when ``|q| <= 3 sqrt(3)/2``."""
    _check_times(s, t)
    e = math.exp(s - t)
    return SHARP_CONSTANT * e * (1 - e)


def _quad_complex(fn, a, b, points):
    """Adaptive quadrature of a complex integrand, one call per smooth piece."""
    cuts = [a] + sorted(p for p in set(points) if a < p < b) + [b]
    total = 0j
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            # evaluate strictly inside so a right-continuous integrand keeps this piece
            inner = lambda x, lo=lo, hi=hi: fn(min(max(x, lo), np.nextafter(hi, lo)))
            try:
                re = integrate.quad(lambda x: inner(x).real, lo, hi, limit=200, epsabs=1e-14, epsrel=1e-12)[0]
                im = integrate.quad(lambda x: inner(x).imag, lo, hi, limit=200, epsabs=1e-14, epsrel=1e-12)[0]
            except integrate.IntegrationWarning as exc:
                raise IntegrationError(f"quadrature did not converge on [{lo}, {hi}]: {exc}") from exc
            total += complex(re, im)
    return total


def shear_coefficient_flow(q, s: float, t: float, breakpoints=None) -> CoefficientFlow:
    """``a(s,t) = e^{s-t} int_s^t q(tau) e^{s-tau} dtau``, cross-checked by the ODE
    ``da/dt = -a + q(t) e^{2(s-t)}``, ``a(s,s) = 0``.
    """
    _check_times(s, t)
    if breakpoints is None:
        breakpoints = getattr(q, "breakpoints", ())
    if t == s:
        return CoefficientFlow(s, t, 0j, q, 0j)
    integral = _quad_complex(lambda tau: complex(q(tau)) * math.exp(s - tau), s, t, breakpoints)
    a_quad = math.exp(s - t) * integral

    def rhs(tau, a):
        return -a + complex(q(tau)) * math.exp(2 * (s - tau))

    a_ode = complex(dopri5(rhs, s, t, np.array([0j]), rtol=1e-12, atol=1e-12, breakpoints=breakpoints)[0])
    if abs(a_quad - a_ode) > FLOW_CONSISTENCY:
        raise IntegrationError(f"quadrature {a_quad} and ODE {a_ode} disagree for a({s}, {t})")
    return CoefficientFlow(s, t, a_quad, q, a_ode)
