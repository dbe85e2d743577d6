"""Truncated bivariate complex power series.

A :class:`PowerSeriesMap2` is a holomorphic map ``C^2 -> C^2`` given by two
truncated Taylor expansions at the origin.  Coefficients are kept in a dense
``(2, D+1, D+1)`` array indexed ``[component, a1, a2]``; entries with
``a1 + a2 > D`` are always zero.  The public view of the coefficients
(iteration, serialization) is in graded-lex order.
"""

from __future__ import annotations

import json
from functools import lru_cache
from typing import Iterator, Mapping, NamedTuple

import numpy as np

DEFAULT_DEGREE = 8


class MultiIndex(NamedTuple):
    a1: int
    a2: int

    @property
    def degree(self) -> int:
        return self.a1 + self.a2


def graded_lex_key(alpha) -> tuple[int, int]:
    """Sort key: total degree first, then higher power of z1 first."""
    return (alpha[0] + alpha[1], -alpha[0])


def multi_indices(degree: int) -> list[MultiIndex]:
    """All multi-indices with ``|alpha| <= degree`` in graded-lex order."""
    out = [MultiIndex(a1, d - a1) for d in range(degree + 1) for a1 in range(d, -1, -1)]
    return out


class Point2(NamedTuple):
    """A point of C^2.  The fields may also hold equally shaped arrays."""

    z1: complex
    z2: complex

    @property
    def norm(self):
        return np.sqrt(np.abs(self.z1) ** 2 + np.abs(self.z2) ** 2)

    def inside_ball(self) -> bool:
        return bool(self.norm < 1.0)


class SeriesError(ValueError):
    pass


@lru_cache(maxsize=None)
def _mul_plan(degree: int):
    # (flat index into p, flat index into q, flat target) for every product
    # whose total degree survives truncation
    n = degree + 1
    idx = [(i, j) for i in range(n) for j in range(n) if i + j <= degree]
    src_p, src_q, dst = [], [], []
    for i1, j1 in idx:
        for i2, j2 in idx:
            if i1 + j1 + i2 + j2 <= degree:
                src_p.append(i1 * n + j1)
                src_q.append(i2 * n + j2)
                dst.append((i1 + i2) * n + (j1 + j2))
    return np.array(src_p), np.array(src_q), np.array(dst)


def _mul(p: np.ndarray, q: np.ndarray, degree: int) -> np.ndarray:
    """Truncated product of two dense bivariate polynomials."""
    n = degree + 1
    sp, sq, dst = _mul_plan(degree)
    prod = p.ravel()[sp] * q.ravel()[sq]
    out = np.bincount(dst, weights=prod.real, minlength=n * n) + 1j * np.bincount(
        dst, weights=prod.imag, minlength=n * n
    )
    return out.reshape(n, n)


def _powers(z: np.ndarray, n: int) -> np.ndarray:
    """Stack ``z**0 .. z**n`` by repeated multiplication."""
    p = np.empty((n + 1,) + z.shape, dtype=complex)
    p[0] = 1
    for k in range(1, n + 1):
        p[k] = p[k - 1] * z
    return p


def _eval_scalar(terms, z1: complex, z2: complex):
    p1, p2 = [1.0 + 0j], [1.0 + 0j]
    w1 = w2 = 0j
    for a1, a2, c1, c2 in terms:
        while len(p1) <= a1:
            p1.append(p1[-1] * z1)
        while len(p2) <= a2:
            p2.append(p2[-1] * z2)
        m = p1[a1] * p2[a2]
        w1 += c1 * m
        w2 += c2 * m
    return w1, w2


def _degree_mask(degree: int) -> np.ndarray:
    a = np.arange(degree + 1)
    return (a[:, None] + a[None, :]) <= degree


class PowerSeriesMap2:
    """Holomorphic map ``z -> (f1(z), f2(z))`` truncated at total degree D.

    Instances are immutable.  Construct from two coefficient mappings
    ``{(a1, a2): c}``, or with :meth:`from_dense`.
    """

    __slots__ = ("trunc_degree", "_c", "_sparse")

    def __init__(
        self,
        component1: Mapping = (),
        component2: Mapping = (),
        trunc_degree: int = DEFAULT_DEGREE,
    ):
        if int(trunc_degree) < 1:
            raise SeriesError(f"trunc_degree must be >= 1, got {trunc_degree}")
        D = int(trunc_degree)
        c = np.zeros((2, D + 1, D + 1), dtype=complex)
        for comp, terms in enumerate((component1, component2)):
            for (a1, a2), value in dict(terms).items():
                if a1 < 0 or a2 < 0:
                    raise SeriesError(f"negative exponent in {(a1, a2)}")
                if a1 + a2 <= D:
                    c[comp, a1, a2] += complex(value)
        self._set(c, D)

    def _set(self, c: np.ndarray, D: int) -> None:
        c.flags.writeable = False
        object.__setattr__(self, "trunc_degree", D)
        object.__setattr__(self, "_c", c)
        object.__setattr__(self, "_sparse", None)

    def _terms(self):
        # (a1, a2, coef[2, k]) over exponents where either component is nonzero
        if self._sparse is None:
            a1, a2 = np.nonzero(np.any(self._c != 0, axis=0))
            coef = self._c[:, a1, a2]
            py = tuple(zip(a1.tolist(), a2.tolist(), coef[0].tolist(), coef[1].tolist()))
            object.__setattr__(self, "_sparse", (a1, a2, coef, py))
        return self._sparse

    def __setattr__(self, name, value):
        raise AttributeError("PowerSeriesMap2 is immutable")

    @classmethod
    def from_dense(cls, coeffs, trunc_degree: int | None = None) -> "PowerSeriesMap2":
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.ndim != 3 or coeffs.shape[0] != 2 or coeffs.shape[1] != coeffs.shape[2]:
            raise SeriesError(f"dense coefficients must have shape (2, n, n), got {coeffs.shape}")
        D = coeffs.shape[1] - 1 if trunc_degree is None else int(trunc_degree)
        if D < 1:
            raise SeriesError(f"trunc_degree must be >= 1, got {D}")
        c = np.zeros((2, D + 1, D + 1), dtype=complex)
        m = min(D, coeffs.shape[1] - 1) + 1
        c[:, :m, :m] = coeffs[:, :m, :m]
        c[:, ~_degree_mask(D)] = 0
        obj = cls.__new__(cls)
        obj._set(c, D)
        return obj

    @classmethod
    def identity(cls, trunc_degree: int = DEFAULT_DEGREE) -> "PowerSeriesMap2":
        return cls({(1, 0): 1}, {(0, 1): 1}, trunc_degree)

    @property
    def dense(self) -> np.ndarray:
        """Read-only ``(2, D+1, D+1)`` coefficient array."""
        return self._c

    # -- coefficient access -------------------------------------------------

    def coefficient(self, component: int, alpha) -> complex:
        if component not in (1, 2):
            raise SeriesError(f"component must be 1 or 2, got {component}")
        a1, a2 = alpha
        if a1 < 0 or a2 < 0 or a1 + a2 > self.trunc_degree:
            return 0j
        return complex(self._c[component - 1, a1, a2])

    def terms(self, component: int) -> Iterator[tuple[MultiIndex, complex]]:
        """Nonzero coefficients of one component, graded-lex order."""
        for alpha in multi_indices(self.trunc_degree):
            value = self._c[component - 1, alpha.a1, alpha.a2]
            if value != 0:
                yield alpha, complex(value)

    @property
    def constant_term(self) -> tuple[complex, complex]:
        return complex(self._c[0, 0, 0]), complex(self._c[1, 0, 0])

    @property
    def linear_part(self) -> np.ndarray:
        """The differential at 0 as a 2x2 matrix."""
        c = self._c
        return np.array([[c[0, 1, 0], c[0, 0, 1]], [c[1, 1, 0], c[1, 0, 1]]])

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, z1, z2):
        """Evaluate at scalars or equally shaped arrays; returns ``(w1, w2)``."""
        z1 = np.asarray(z1, dtype=complex)
        z2 = np.asarray(z2, dtype=complex)
        a1, a2, coef, py = self._terms()
        if z1.ndim == 0 and z2.ndim == 0:
            return _eval_scalar(py, complex(z1), complex(z2))
        shape = np.broadcast(z1, z2).shape
        z1, z2 = np.broadcast_to(z1, shape), np.broadcast_to(z2, shape)
        # only nonzero terms are visited, so sparse fields (shears) stay cheap
        p1 = _powers(z1, int(a1.max(initial=0)))
        p2 = _powers(z2, int(a2.max(initial=0)))
        if z1.size <= 256:
            terms = (p1[a1] * p2[a2]).reshape(len(a1), z1.size)
            w = (coef @ terms).reshape((2,) + shape)
        else:
            w = np.zeros((2,) + shape, dtype=complex)
            for k in range(len(a1)):
                m = p1[a1[k]] * p2[a2[k]]
                w[0] += coef[0, k] * m
                w[1] += coef[1, k] * m
        return w[0], w[1]

    def __call__(self, z) -> Point2:
        return Point2(*self.evaluate(z[0], z[1]))

    def derivative(self, variable: int) -> "PowerSeriesMap2":
        """Term-wise partial derivative in ``z_variable`` (1 or 2)."""
        D = self.trunc_degree
        c = np.zeros_like(self._c)
        k = np.arange(1, D + 1)
        if variable == 1:
            c[:, :-1, :] = self._c[:, 1:, :] * k[None, :, None]
        elif variable == 2:
            c[:, :, :-1] = self._c[:, :, 1:] * k[None, None, :]
        else:
            raise SeriesError(f"variable must be 1 or 2, got {variable}")
        return PowerSeriesMap2.from_dense(c, D)

    def jacobian_arrays(self, z1, z2):
        """Entries ``(d11, d12, d21, d22)`` of the Jacobian, vectorized."""
        w11, w21 = self.derivative(1).evaluate(z1, z2)
        w12, w22 = self.derivative(2).evaluate(z1, z2)
        return w11, w12, w21, w22

    def jacobian_at(self, z) -> np.ndarray:
        d11, d12, d21, d22 = self.jacobian_arrays(z[0], z[1])
        return np.array([[d11, d12], [d21, d22]], dtype=complex)

    # -- algebra ------------------------------------------------------------

    def compose(self, g: "PowerSeriesMap2") -> "PowerSeriesMap2":
        """Taylor coefficients of ``self o g`` truncated to the smaller degree."""
        if any(v != 0 for v in self.constant_term) or any(v != 0 for v in g.constant_term):
            raise SeriesError("compose requires zero constant terms")
        D = min(self.trunc_degree, g.trunc_degree)
        n = D + 1
        g1 = g._c[0, :n, :n] * _degree_mask(D)
        g2 = g._c[1, :n, :n] * _degree_mask(D)
        pow2 = [np.zeros((n, n), dtype=complex)]
        pow2[0][0, 0] = 1
        for _ in range(D):
            pow2.append(_mul(pow2[-1], g2, D))
        out = np.zeros((2, n, n), dtype=complex)
        for comp in range(2):
            h = self._c[comp]
            acc = np.zeros((n, n), dtype=complex)
            for a1 in range(D, -1, -1):
                inner = sum((h[a1, a2] * pow2[a2] for a2 in range(D - a1 + 1) if h[a1, a2] != 0),
                            np.zeros((n, n), dtype=complex))
                acc = _mul(acc, g1, D) + inner if a1 < D else inner
            out[comp] = acc
        return PowerSeriesMap2.from_dense(out, D)

    def _binary(self, other, op):
        if not isinstance(other, PowerSeriesMap2):
            return NotImplemented
        D = min(self.trunc_degree, other.trunc_degree)
        n = D + 1
        return PowerSeriesMap2.from_dense(op(self._c[:, :n, :n], other._c[:, :n, :n]), D)

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, scalar):
        if isinstance(scalar, PowerSeriesMap2):
            return NotImplemented
        return PowerSeriesMap2.from_dense(self._c * complex(scalar), self.trunc_degree)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __eq__(self, other):
        if not isinstance(other, PowerSeriesMap2):
            return NotImplemented
        return self.trunc_degree == other.trunc_degree and np.array_equal(self._c, other._c)

    def __hash__(self):
        return hash((self.trunc_degree, self._c.tobytes()))

    def max_abs_diff(self, other: "PowerSeriesMap2") -> float:
        """Largest coefficient discrepancy, padding the lower degree with zeros."""
        D = max(self.trunc_degree, other.trunc_degree)
        a = np.zeros((2, D + 1, D + 1), dtype=complex)
        b = np.zeros_like(a)
        a[:, : self.trunc_degree + 1, : self.trunc_degree + 1] = self._c
        b[:, : other.trunc_degree + 1, : other.trunc_degree + 1] = other._c
        return float(np.max(np.abs(a - b)))

    def with_degree(self, trunc_degree: int) -> "PowerSeriesMap2":
        return PowerSeriesMap2.from_dense(self._c, trunc_degree)

    def __repr__(self):
        parts = []
        for comp in (1, 2):
            body = " + ".join(f"({v:.6g})*z^{tuple(a)}" for a, v in self.terms(comp)) or "0"
            parts.append(body)
        return f"PowerSeriesMap2(deg={self.trunc_degree}; [{parts[0]}], [{parts[1]}])"

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        out = {"trunc_degree": self.trunc_degree}
        for comp in (1, 2):
            out[f"component{comp}"] = [
                {"a1": a.a1, "a2": a.a2, "re": v.real, "im": v.imag} for a, v in self.terms(comp)
            ]
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "PowerSeriesMap2":
        try:
            D = data["trunc_degree"]
            if not isinstance(D, int) or isinstance(D, bool):
                raise SeriesError(f"trunc_degree must be an integer, got {D!r}")
            comps = []
            for key in ("component1", "component2"):
                terms = {}
                for rec in data[key]:
                    a1, a2 = rec["a1"], rec["a2"]
                    if not all(isinstance(v, int) and not isinstance(v, bool) for v in (a1, a2)):
                        raise SeriesError(f"exponents must be integers: {rec!r}")
                    if a1 + a2 > D:
                        continue
                    terms[(a1, a2)] = terms.get((a1, a2), 0) + complex(float(rec["re"]), float(rec["im"]))
                comps.append(terms)
        except (KeyError, TypeError) as exc:
            raise SeriesError(f"malformed series record: {exc}") from exc
        return cls(comps[0], comps[1], D)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "PowerSeriesMap2":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SeriesError(f"invalid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise SeriesError("series file must contain a JSON object")
        return cls.from_dict(data)


def eval_map(f: PowerSeriesMap2, z) -> Point2:
    return f(z)


def compose(h: PowerSeriesMap2, g: PowerSeriesMap2) -> PowerSeriesMap2:
    return h.compose(g)


def jacobian_at(f: PowerSeriesMap2, z) -> np.ndarray:
    return f.jacobian_at(z)


def coefficient(f: PowerSeriesMap2, component: int, alpha) -> complex:
    return f.coefficient(component, alpha)
