"""Point sets in the unit ball of C^2 and deterministic sampled extrema.

Used to falsify "for all z in B^2" inequalities: a grid over shells and
angles, seeded uniform random points, and a coordinate-ascent polish of
the worst sample.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

#: samples stay at distance >= this from the unit sphere
BOUNDARY_MARGIN = 1e-6
CHUNK = 1 << 16


@dataclass(frozen=True)
class SamplingConfig:
    grid_radii: int = 40
    grid_angles: int = 24
    random_samples: int = 100_000
    rng_seed: int = 0
    defect_tolerance: float = 1e-12

    def __post_init__(self):
        if self.grid_radii < 1 or self.grid_angles < 1 or self.random_samples < 0:
            raise ValueError(f"sample counts must be positive: {self}")
        if self.grid_radii * self.grid_angles + self.random_samples <= 0:
            raise ValueError("empty sample set")
        if self.defect_tolerance < 0:
            raise ValueError("defect_tolerance must be >= 0")

    def to_dict(self) -> dict:
        return asdict(self)


def worker_count() -> int:
    """Worker cap from ``LOEWNER_THREADS`` (0 or unset = one per CPU)."""
    try:
        n = int(os.environ.get("LOEWNER_THREADS", "0"))
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def grid_points(cfg: SamplingConfig):
    """Product grid over shells ``r`` and angles ``(psi, theta1, theta2)``.

    ``z1 = r cos(psi) e^{i theta1}``, ``z2 = r sin(psi) e^{i theta2}`` with
    the outermost shell at ``1 - BOUNDARY_MARGIN``.
    """
    R, n = cfg.grid_radii, cfg.grid_angles
    r = np.arange(1, R + 1) / R * (1 - BOUNDARY_MARGIN)
    psi = np.linspace(0.0, np.pi / 2, n) if n > 1 else np.array([np.pi / 4])
    theta = 2 * np.pi * np.arange(n) / n
    rr, pp, t1, t2 = np.meshgrid(r, psi, theta, theta, indexing="ij")
    z1 = rr * np.cos(pp) * np.exp(1j * t1)
    z2 = rr * np.sin(pp) * np.exp(1j * t2)
    return z1.ravel(), z2.ravel()


def random_points(count: int, seed: int):
    """Seeded points uniform in the ball of C^2 = R^4."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((count, 4))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    g *= (rng.random(count) ** 0.25 * (1 - BOUNDARY_MARGIN))[:, None]
    return g[:, 0] + 1j * g[:, 1], g[:, 2] + 1j * g[:, 3]


def sample_points(cfg: SamplingConfig, exclude_origin: bool = False):
    z1g, z2g = grid_points(cfg)
    z1r, z2r = random_points(cfg.random_samples, cfg.rng_seed)
    z1 = np.concatenate([z1g, z1r])
    z2 = np.concatenate([z2g, z2r])
    if exclude_origin:
        keep = (z1 != 0) | (z2 != 0)
        z1, z2 = z1[keep], z2[keep]
    return z1, z2


def _point_key(z1, z2):
    return (z1.real, z1.imag, z2.real, z2.imag)


def scan_max(fn, z1, z2):
    """Maximum of a vectorized ``fn(z1, z2)`` and a point attaining it.

    Chunk boundaries are fixed, so the result does not depend on the number
    of workers; ties are broken towards the lexicographically smaller point.
    """
    starts = range(0, len(z1), CHUNK)

    def work(i):
        v = np.asarray(fn(z1[i : i + CHUNK], z2[i : i + CHUNK]), dtype=float)
        k = int(np.argmax(v))
        return float(v[k]), complex(z1[i + k]), complex(z2[i + k])

    workers = min(worker_count(), len(starts))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            partial = list(pool.map(work, starts))
    else:
        partial = [work(i) for i in starts]
    best = partial[0]
    for cand in partial[1:]:
        if cand[0] > best[0] or (
            cand[0] == best[0] and _point_key(cand[1], cand[2]) < _point_key(best[1], best[2])
        ):
            best = cand
    return best


def refine_max(fn, z1: complex, z2: complex, steps: int = 50, step0: float = 0.01):
    """Coordinate ascent on (Re z1, Im z1, Re z2, Im z2), halving the step on stalls."""
    x = np.array([z1.real, z1.imag, z2.real, z2.imag])
    best = float(fn(np.array([z1]), np.array([z2]))[0])
    h = step0
    moves = np.vstack([np.eye(4), -np.eye(4)])
    for _ in range(steps):
        cand = x[None, :] + h * moves
        inside = np.linalg.norm(cand, axis=1) <= 1 - BOUNDARY_MARGIN
        cand = cand[inside]
        if len(cand):
            vals = np.asarray(fn(cand[:, 0] + 1j * cand[:, 1], cand[:, 2] + 1j * cand[:, 3]), dtype=float)
            k = int(np.argmax(vals))
            if vals[k] > best:
                best, x = float(vals[k]), cand[k]
                continue
        h /= 2
    return best, complex(x[0], x[1]), complex(x[2], x[3])
