import numpy as np
import pytest

from shearloewner.sampling import SamplingConfig
from shearloewner.series import PowerSeriesMap2, multi_indices

_criteria = []


def random_complex(rng, size=None, scale=1.0):
    return scale * (rng.uniform(-1, 1, size) + 1j * rng.uniform(-1, 1, size))


def random_series(rng, degree, *, hd=True, linear=None, scale=1.0, trunc_degree=None):
    """Random polynomial map of total degree ``degree`` with zero constant term.

    ``hd`` makes the linear part diagonal and invertible; ``linear`` fixes it
    to a given 2x2 matrix instead.
    """
    D = degree if trunc_degree is None else trunc_degree
    comps = [{}, {}]
    for alpha in multi_indices(degree):
        if alpha.degree < 2:
            continue
        for c in comps:
            c[tuple(alpha)] = complex(random_complex(rng, scale=scale))
    if linear is not None:
        L = np.asarray(linear, dtype=complex)
    elif hd:
        L = np.diag(np.exp(rng.uniform(-0.5, 0.5, 2) + 1j * rng.uniform(0, 2 * np.pi, 2)))
    else:
        L = random_complex(rng, (2, 2))
    comps[0][(1, 0)], comps[0][(0, 1)] = L[0, 0], L[0, 1]
    comps[1][(1, 0)], comps[1][(0, 1)] = L[1, 0], L[1, 1]
    return PowerSeriesMap2(comps[0], comps[1], D)


def random_mminus_field(rng, degree, budget=1.0):
    """``-z + N(z)`` with the absolute coefficient sum of ``N`` equal to ``budget``.

    For ``budget <= 1`` this is provably in M_-: ``|Re<N(z), z>| <= |z|^3``.
    """
    H = random_series(rng, degree, linear=-np.eye(2))
    N = H + PowerSeriesMap2.identity(degree)
    total = np.abs(N.dense).sum()
    return N * (budget / total) - PowerSeriesMap2.identity(degree)


def random_ball_points(rng, n, radius=1.0):
    g = rng.standard_normal((n, 4))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    g *= (rng.random(n) ** 0.25 * radius)[:, None]
    return g[:, 0] + 1j * g[:, 1], g[:, 2] + 1j * g[:, 3]


@pytest.fixture
def rng():
    return np.random.default_rng(20131207)


@pytest.fixture
def small_cfg():
    return SamplingConfig(grid_radii=12, grid_angles=10, random_samples=4000)


@pytest.fixture
def criterion():
    """Record one acceptance line; printed in the terminal summary."""

    def record(number, title, passed, detail=""):
        _criteria.append((number, title, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_criteria, key=lambda c: c[0]):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number:>2}. {title}: {detail}")
