"""Shear maps ``z -> (lam*z1 + A*z2**2, mu*z2)`` and the shearing operator."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .series import DEFAULT_DEGREE, PowerSeriesMap2, SeriesError

#: 3*sqrt(3)/2, the extremal value of the z2**2 coefficient.
SHARP_CONSTANT = 3.0 * math.sqrt(3.0) / 2.0


class NotDiagonalError(SeriesError):
    """Raised when a map is outside H_D (not fixing 0 or non-diagonal/singular at 0)."""


@dataclass(frozen=True)
class ShearMap:
    lam: complex = 1.0
    mu: complex = 1.0
    A: complex = 0.0

    def __post_init__(self):
        for name in ("lam", "mu", "A"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def __call__(self, z):
        z1, z2 = z
        return (self.lam * z1 + self.A * z2**2, self.mu * z2)

    def as_tuple(self) -> tuple[complex, complex, complex]:
        return (self.lam, self.mu, self.A)

    def to_dict(self) -> dict:
        return {
            "lambda": [self.lam.real, self.lam.imag],
            "mu": [self.mu.real, self.mu.imag],
            "A": [self.A.real, self.A.imag],
        }

    @classmethod
    def from_dict(cls, data) -> "ShearMap":
        try:
            return cls(*(complex(*map(float, data[k])) for k in ("lambda", "mu", "A")))
        except (KeyError, TypeError, ValueError) as exc:
            raise SeriesError(f"malformed shear record: {exc}") from exc


def check_hd(h: PowerSeriesMap2, tol: float = 0.0) -> None:
    """Raise :class:`NotDiagonalError` unless ``h`` lies in H_D.

    ``tol`` bounds the off-diagonal linear coefficients and the constant
    term; use 0 for constructed maps and ~1e-12 for numerically recovered ones.
    """
    c = h.dense
    if abs(c[0, 0, 0]) > tol or abs(c[1, 0, 0]) > tol:
        raise NotDiagonalError("h(0) != 0")
    if abs(c[0, 0, 1]) > tol or abs(c[1, 1, 0]) > tol:
        raise NotDiagonalError(
            f"linear part is not diagonal (dz2 coefficient {c[0, 0, 1]}, dz1 coefficient {c[1, 1, 0]})"
        )
    if c[0, 1, 0] == 0 or c[1, 0, 1] == 0:
        raise NotDiagonalError("linear part is singular")


def shear_of(h: PowerSeriesMap2, tol: float = 0.0) -> ShearMap:
    """The shearing of ``h``: keep ``lam*z1``, ``mu*z2`` and the ``z2**2`` term of ``h1``."""
    check_hd(h, tol)
    if h.trunc_degree < 2:
        raise SeriesError("shearing needs trunc_degree >= 2")
    return ShearMap(h.coefficient(1, (1, 0)), h.coefficient(2, (0, 1)), h.coefficient(1, (0, 2)))


def shear_to_series(s: ShearMap, trunc_degree: int = DEFAULT_DEGREE) -> PowerSeriesMap2:
    if trunc_degree < 2:
        raise SeriesError("a shear needs trunc_degree >= 2 to hold A*z2**2")
    return PowerSeriesMap2({(1, 0): s.lam, (0, 2): s.A}, {(0, 1): s.mu}, trunc_degree)


def shear_compose(s: ShearMap, r: ShearMap) -> ShearMap:
    """Exact composition ``s o r``."""
    return ShearMap(s.lam * r.lam, s.mu * r.mu, s.lam * r.A + s.A * r.mu**2)


def shear_inverse(s: ShearMap) -> ShearMap:
    if s.lam == 0 or s.mu == 0:
        raise NotDiagonalError("singular shear has no inverse")
    return ShearMap(1 / s.lam, 1 / s.mu, -s.A / (s.lam * s.mu**2))


def phi_map(a: complex = SHARP_CONSTANT, trunc_degree: int = DEFAULT_DEGREE) -> PowerSeriesMap2:
    """The shear ``(z1 + a*z2**2, z2)``; the default ``a`` gives the extremal map."""
    return shear_to_series(ShearMap(1, 1, a), trunc_degree)


def shear_field(a: complex = SHARP_CONSTANT, trunc_degree: int = DEFAULT_DEGREE) -> PowerSeriesMap2:
    """The vector field ``(-z1 + a*z2**2, -z2)``."""
    return shear_to_series(ShearMap(-1, -1, a), trunc_degree)
