"""Membership in the class M_-, its Fourier-averaged form, and the sharp constant.

M_- is the set of holomorphic ``H`` with ``H(0) = 0``, ``dH_0 = -id`` and
``Re <H(z), z> <= 0`` on the unit ball.  Membership is tested by sampling,
so "accept" only means no violation was found.
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass, field

import numpy as np

from .sampling import SamplingConfig, refine_max, sample_points, scan_max
from .series import Point2, PowerSeriesMap2

__all__ = [
    "SamplingConfig",
    "MembershipReport",
    "NormalizationError",
    "SharpBound",
    "herglotz_defect",
    "check_mminus",
    "fourier_average",
    "averaged_closed_form",
    "golden_section_max",
    "sharp_shear_bound",
    "shear_membership_threshold",
]

NORMALIZATION_TOL = 1e-12
FOURIER_NODES = 512


class NormalizationError(ValueError):
    pass


@dataclass
class MembershipReport:
    verdict: str
    max_defect: float
    witness: Point2
    samples_used: int
    seed: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def accepted(self) -> bool:
        return self.verdict == "accept"

    def to_dict(self) -> dict:
        w1, w2 = complex(self.witness.z1), complex(self.witness.z2)
        return {
            "verdict": self.verdict,
            "max_defect": self.max_defect,
            "witness": [[w1.real, w1.imag], [w2.real, w2.imag]],
            "samples_used": self.samples_used,
            "seed": self.seed,
        }


def _defect(H: PowerSeriesMap2, z1, z2):
    w1, w2 = H.evaluate(z1, z2)
    return (w1 * np.conj(z1) + w2 * np.conj(z2)).real


def herglotz_defect(H: PowerSeriesMap2, z) -> float:
    """``Re <H(z), z>``; the M_- condition at ``z`` is that this is <= 0."""
    z = Point2(complex(z[0]), complex(z[1]))
    if not z.norm < 1:
        raise ValueError(f"point {z} is not inside the unit ball")
    return float(_defect(H, z.z1, z.z2))


def require_normalized(H: PowerSeriesMap2, tol: float = NORMALIZATION_TOL) -> None:
    if max(abs(v) for v in H.constant_term) > tol:
        raise NormalizationError("field does not vanish at 0")
    if np.max(np.abs(H.linear_part + np.eye(2))) > tol:
        raise NormalizationError(f"differential at 0 is not -id: {H.linear_part.tolist()}")


def check_mminus(H: PowerSeriesMap2, cfg: SamplingConfig | None = None) -> MembershipReport:
    """Sample ``Re <H(z), z>`` over the ball and report the largest value found."""
    cfg = cfg or SamplingConfig()
    require_normalized(H)
    z1, z2 = sample_points(cfg)

    def fn(a, b):
        return _defect(H, a, b)

    worst, w1, w2 = scan_max(fn, z1, z2)
    refined, r1, r2 = refine_max(fn, w1, w2)
    if refined > worst:
        worst, w1, w2 = refined, r1, r2
    verdict = "reject" if worst > cfg.defect_tolerance else "accept"
    return MembershipReport(verdict, worst, Point2(w1, w2), len(z1), cfg.rng_seed)


def averaged_closed_form(H: PowerSeriesMap2, x: float, y: float) -> float:
    """``-x^2 - y^2 + |q| x y^2`` with ``q`` the ``z2^2`` coefficient of ``H1``."""
    q = H.coefficient(1, (0, 2))
    return -x * x - y * y + abs(q) * x * y * y


def fourier_average(H: PowerSeriesMap2, x: float, y: float, nodes: int = FOURIER_NODES) -> float:
    """Mean of the defect over ``theta in [0, 4pi]`` along
    ``z1 = x e^{i(theta + eta)}``, ``z2 = y e^{i theta / 2}``, ``eta = arg q``.

    After ``phi = theta/2`` the integrand is a trigonometric polynomial in
    ``phi`` of degree <= 2*trunc_degree + 2, so the trapezoid rule with
    ``nodes`` > twice that is exact.
    """
    if x < 0 or y < 0:
        raise ValueError("x and y must be nonnegative")
    if not x * x + y * y < 1:
        raise ValueError(f"(x, y) = ({x}, {y}) is not inside the unit disc")
    q = H.coefficient(1, (0, 2))
    eta = float(np.angle(q)) if q != 0 else 0.0
    theta = 4 * np.pi * np.arange(nodes) / nodes
    z1 = x * np.exp(1j * (theta + eta))
    z2 = y * np.exp(0.5j * theta)
    return float(np.mean(_defect(H, z1, z2)))


INV_PHI = (math.sqrt(5) - 1) / 2


def golden_section_max(f, a: float, b: float, tol: float = 1e-12):
    """Maximize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


@dataclass(frozen=True)
class SharpBound:
    value: float
    direction: tuple[float, float]
    shells: tuple[tuple[float, float], ...]

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "direction": list(self.direction),
            "shells": [list(s) for s in self.shells],
        }


@lru_cache(maxsize=None)
def sharp_shear_bound(shell_exponents=tuple(range(1, 7))) -> SharpBound:
    """Largest ``|a|`` with ``-x^2 - y^2 + |a| x y^2 <= 0`` on the unit disc quadrant.

    Equivalently the infimum of ``(x^2 + y^2) / (x y^2)``.  On the shell of
    radius ``r`` put ``y^2 = r^2 - x^2`` and maximize ``x (r^2 - x^2)`` by
    golden-section search; the shell minima decrease as ``r -> 1`` and the
    infimum is the value on the limiting shell ``r = 1``.
    """
    shells = []
    radii = [1 - 10.0 ** (-k) for k in shell_exponents] + [1.0]
    for r in radii:
        x, g = golden_section_max(lambda x, r=r: x * (r * r - x * x), 0.0, r)
        shells.append((r, r * r / g, x))
    r, value, x = shells[-1]
    y = math.sqrt(r * r - x * x)
    return SharpBound(value, (x / r, y / r), tuple((s[0], s[1]) for s in shells[:-1]))


def shear_membership_threshold(a: complex) -> str:
    """Whether ``(-z1 + a z2^2, -z2)`` lies in M_-."""
    return "accept" if abs(a) <= sharp_shear_bound().value + 1e-9 else "reject"

