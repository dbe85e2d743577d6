import math

import numpy as np
import pytest

from shearloewner.analysis import (
    SingularJacobianError,
    check_starlike,
    functional_L102,
    growth_check,
    reproduce_theorems,
    starlike_defect,
)
from shearloewner.mminus import SamplingConfig, shear_membership_threshold, sharp_shear_bound
from shearloewner.series import PowerSeriesMap2
from shearloewner.shear import SHARP_CONSTANT, phi_map

from conftest import random_complex, random_series

C = SHARP_CONSTANT
ID = PowerSeriesMap2.identity()


class TestFunctional:
    def test_phi(self):
        assert functional_L102(phi_map()) == C

    def test_identity(self):
        assert functional_L102(ID) == 0

    def test_shear(self):
        assert functional_L102(phi_map(1.5 - 2j)) == 1.5 - 2j

    def test_half_second_derivative(self, rng):
        f = random_series(rng, 5)
        d2 = f.derivative(2).derivative(2)
        assert functional_L102(f) == pytest.approx(0.5 * d2.evaluate(0, 0)[0], abs=1e-15)

    def test_linear(self, rng):
        for _ in range(10):
            f, g = random_series(rng, 4), random_series(rng, 4)
            a, b = random_complex(rng, 2)
            lhs = functional_L102(a * f + b * g)
            assert lhs == pytest.approx(a * functional_L102(f) + b * functional_L102(g), abs=1e-15)

    def test_phase_equivariance(self, rng):
        for _ in range(10):
            f = random_series(rng, 5)
            psi = rng.uniform(0, 2 * np.pi)
            # (e^{-2i psi} f1(e^{2i psi} z1, e^{i psi} z2), e^{-i psi} f2(...)) rotates a^1_{0,2} by a phase
            c = f.dense
            a = np.arange(6)
            scale = np.exp(1j * psi * (2 * a[:, None] + a[None, :]))
            rotated = PowerSeriesMap2.from_dense(
                np.stack([c[0] * scale * np.exp(-2j * psi), c[1] * scale * np.exp(-1j * psi)]), 5)
            z = (0.2 + 0.1j, -0.3 + 0.2j)
            expected = f((z[0] * np.exp(2j * psi), z[1] * np.exp(1j * psi)))
            assert rotated(z)[0] == pytest.approx(expected[0] * np.exp(-2j * psi), abs=1e-14)
            assert abs(functional_L102(rotated)) == pytest.approx(abs(functional_L102(f)), abs=1e-15)


class TestStarlikeDefect:
    def test_identity(self):
        z = (0.3 + 0.2j, -0.1 + 0.4j)
        assert starlike_defect(ID, z) == pytest.approx(0.3, abs=1e-15)

    @pytest.mark.parametrize("x,y", [(0.1, 0.2), (0.5, 0.7), (1 / math.sqrt(3) * 0.99, math.sqrt(2 / 3) * 0.99)])
    def test_phi_real(self, x, y):
        d = starlike_defect(phi_map(), (x, y))
        assert d == pytest.approx(x * x + y * y - C * x * y * y, abs=1e-15)
        r = math.hypot(x, y)
        assert d >= r * r * (1 - r) - 1e-15

    def test_phi_3_negative(self):
        d = starlike_defect(phi_map(3.0), (0.55, 0.778))
        assert d == pytest.approx(-0.0909346, abs=1e-12)

    def test_singular_jacobian(self):
        f = PowerSeriesMap2({(1, 0): 1, (2, 0): 1}, {(0, 1): 1})
        with pytest.raises(SingularJacobianError) as info:
            starlike_defect(f, (-0.5, 0.1))
        assert info.value.point.z1 == -0.5

    def test_rejects_origin(self):
        with pytest.raises(ValueError):
            starlike_defect(ID, (0, 0))


class TestCheckStarlike:
    def test_phi(self):
        rep = check_starlike(phi_map())
        assert rep.accepted and rep.min_margin >= -1e-12

    def test_identity_margin_is_smallest_norm_squared(self, small_cfg):
        from shearloewner.sampling import sample_points

        rep = check_starlike(ID, small_cfg)
        z1, z2 = sample_points(small_cfg, exclude_origin=True)
        assert rep.accepted
        assert rep.min_margin == pytest.approx(np.min(np.abs(z1) ** 2 + np.abs(z2) ** 2), rel=1e-12)

    def test_phi_3_rejected(self):
        rep = check_starlike(phi_map(3.0))
        assert rep.verdict == "reject" and rep.witness.norm < 1
        assert starlike_defect(phi_map(3.0), rep.witness) == pytest.approx(rep.min_margin, abs=1e-15)

    @pytest.mark.parametrize("a", [0, 1, 2.59, 2.61, 3])
    def test_agrees_with_membership_threshold(self, a):
        assert check_starlike(phi_map(a)).verdict == shear_membership_threshold(a)

    def test_singular_linear_part(self, small_cfg):
        with pytest.raises(ValueError):
            check_starlike(PowerSeriesMap2({(1, 0): 1}, {(0, 2): 1}), small_cfg)


class TestGrowth:
    def test_identity(self, small_cfg):
        assert growth_check(ID, small_cfg).accepted

    def test_phi(self):
        rep = growth_check(phi_map())
        assert rep.accepted and rep.max_defect < 0

    def test_large_shear_rejected(self):
        a = 2 * math.sqrt(15)
        rep = growth_check(phi_map(a))
        assert rep.verdict == "reject"
        z = rep.witness
        w = phi_map(a)(z)
        r = z.norm
        assert math.hypot(abs(w[0]), abs(w[1])) > r / (1 - r) ** 2

    def test_requires_normalization(self, small_cfg):
        with pytest.raises(ValueError):
            growth_check(2 * ID, small_cfg)


class TestReproduce:
    def test_default(self):
        rep = reproduce_theorems()
        assert rep.all_passed, rep.render_text()
        assert abs(rep.computed_bound - 2.598076211) < 1e-9
        assert rep.functional_at_Phi == pytest.approx(2.598076211, abs=1e-9)
        assert rep.chain_recovery_error <= 1e-7

    def test_few_samples(self):
        rep = reproduce_theorems(SamplingConfig(grid_radii=1, grid_angles=1, random_samples=9))
        assert rep.computed_bound == sharp_shear_bound().value
        assert rep.mminus.samples_used == 10

    def test_non_extremal_map_flagged(self):
        rep = reproduce_theorems(SamplingConfig(grid_radii=10, grid_angles=8, random_samples=1000), a=2.7)
        assert not rep.all_passed
        assert not rep.checks["functional attains bound"]["passed"]
        assert "FAIL" in rep.render_text()

    def test_json(self):
        d = reproduce_theorems(SamplingConfig(grid_radii=4, grid_angles=4, random_samples=100)).to_dict()
        assert {"computed_bound", "functional_at_Phi", "mminus", "starlike", "chain_recovery_error",
                "checks", "all_passed"} <= set(d)
