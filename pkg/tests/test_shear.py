import math

import numpy as np
import pytest

from shearloewner.series import PowerSeriesMap2, SeriesError, compose
from shearloewner.shear import (
    SHARP_CONSTANT,
    NotDiagonalError,
    ShearMap,
    phi_map,
    shear_compose,
    shear_inverse,
    shear_of,
    shear_to_series,
)

from conftest import random_complex, random_series

C = SHARP_CONSTANT


def test_constant():
    assert C == pytest.approx(2.598076211353316, abs=1e-15)


class TestShearOf:
    def test_phi_is_its_own_shearing(self):
        assert shear_of(phi_map()).as_tuple() == (1, 1, C)

    def test_no_quadratic_term(self):
        h = PowerSeriesMap2({(1, 0): 1, (2, 0): 1, (1, 1): 1, (0, 3): 1}, {(0, 1): 1, (2, 0): 1})
        assert shear_of(h).as_tuple() == (1, 1, 0)

    def test_reads_three_coefficients(self):
        h = PowerSeriesMap2({(1, 0): -1, (0, 2): 5j, (1, 1): 9}, {(0, 1): -1, (0, 2): 1})
        assert shear_of(h).as_tuple() == (-1, -1, 5j)

    @pytest.mark.parametrize(
        "h",
        [
            PowerSeriesMap2({(1, 0): 1, (0, 1): 0.5}, {(0, 1): 1}),
            PowerSeriesMap2({(1, 0): 1}, {(1, 0): 1e-13, (0, 1): 1}),
            PowerSeriesMap2({(1, 0): 0}, {(0, 1): 1}),
            PowerSeriesMap2({(1, 0): 1}, {(0, 1): 0, (0, 2): 1}),
            PowerSeriesMap2({(0, 0): 1, (1, 0): 1}, {(0, 1): 1}),
        ],
    )
    def test_rejects_outside_hd(self, h):
        with pytest.raises(NotDiagonalError):
            shear_of(h)

    def test_tolerance_for_recovered_maps(self):
        h = PowerSeriesMap2({(1, 0): 1, (0, 1): 3e-13}, {(0, 1): 1})
        with pytest.raises(NotDiagonalError):
            shear_of(h)
        assert shear_of(h, tol=1e-12).as_tuple() == (1, 1, 0)

    def test_idempotent(self, rng):
        for _ in range(10):
            s = shear_of(random_series(rng, 5))
            assert shear_of(shear_to_series(s)) == s


class TestToSeries:
    def test_identity(self):
        assert shear_to_series(ShearMap(1, 1, 0)) == PowerSeriesMap2.identity()

    def test_phi(self):
        assert shear_to_series(ShearMap(1, 1, C)) == phi_map()

    def test_chain_slice(self):
        t = 0.7
        e = math.exp(t)
        f = shear_to_series(ShearMap(e, e, e * C))
        assert f.max_abs_diff(e * phi_map()) < 1e-15

    def test_round_trip_bit_exact(self, rng):
        for _ in range(20):
            s = ShearMap(*random_complex(rng, 3))
            assert shear_of(shear_to_series(s, 2)) == s

    def test_rejects_low_degree(self):
        with pytest.raises(SeriesError):
            shear_to_series(ShearMap(), 1)

    def test_exactly_three_coefficients(self):
        f = shear_to_series(ShearMap(2, 3j, 1 - 1j))
        assert len(list(f.terms(1))) + len(list(f.terms(2))) == 3

    def test_map_evaluation_agrees(self):
        s = ShearMap(2 - 1j, 0.5j, 3)
        z = (0.3 + 0.1j, -0.2 + 0.6j)
        w = shear_to_series(s)(z)
        assert np.allclose(w, s(z), atol=1e-15)


class TestCompose:
    def test_unipotent_add(self):
        assert shear_compose(ShearMap(1, 1, 2.5), ShearMap(1, 1, -0.75j)).as_tuple() == (1, 1, 2.5 - 0.75j)

    def test_identity_right(self):
        assert shear_compose(ShearMap(2, 3, 1), ShearMap(1, 1, 0)).as_tuple() == (2, 3, 1)

    def test_hand_expansion(self):
        # s(r(z)) = (1*(3 z1 + 4 z2^2) + 1*(1*z2)^2, 2 z2) = (3 z1 + 5 z2^2, 2 z2)
        assert shear_compose(ShearMap(1, 2, 1), ShearMap(3, 1, 4)).as_tuple() == (3, 2, 5)

    def test_matches_series_composition(self, rng):
        for _ in range(20):
            s, r = ShearMap(*random_complex(rng, 3)), ShearMap(*random_complex(rng, 3))
            series = compose(shear_to_series(s), shear_to_series(r))
            assert series.max_abs_diff(shear_to_series(shear_compose(s, r))) < 1e-14

    @pytest.mark.parametrize("degree", range(2, 9))
    def test_shearing_commutes_with_composition(self, rng, degree):
        for _ in range(10):
            h, g = random_series(rng, degree), random_series(rng, degree)
            lhs = shear_of(compose(h, g))
            rhs = shear_compose(shear_of(h), shear_of(g))
            assert max(abs(a - b) for a, b in zip(lhs.as_tuple(), rhs.as_tuple())) <= 1e-12

    def test_holds_pointwise_on_c2(self, rng):
        h, g = random_series(rng, 6), random_series(rng, 6)
        lhs = shear_to_series(shear_of(compose(h, g)))
        z = (3.0 - 2j, 1.5 + 4j)  # far outside the ball
        rhs = shear_of(h)(shear_of(g)(z))
        assert np.allclose(lhs(z), rhs, rtol=1e-12)


class TestInverse:
    def test_unipotent(self):
        assert shear_inverse(ShearMap(1, 1, 2 - 1j)).as_tuple() == (1, 1, -2 + 1j)

    def test_chain_scaling(self):
        e = math.e
        inv = shear_inverse(ShearMap(e, e, e * C))
        assert inv.lam == pytest.approx(1 / e) and inv.mu == pytest.approx(1 / e)
        assert inv.A == pytest.approx(-C / e**2, rel=1e-15)

    def test_identity(self):
        assert shear_inverse(ShearMap()).as_tuple() == (1, 1, 0)

    def test_two_sided(self, rng):
        for _ in range(50):
            s = ShearMap(*random_complex(rng, 3))
            for prod in (shear_compose(s, shear_inverse(s)), shear_compose(shear_inverse(s), s)):
                assert max(abs(a - b) for a, b in zip(prod.as_tuple(), (1, 1, 0))) <= 1e-14 * max(1, abs(s.A) / abs(s.lam * s.mu**2))

    def test_singular(self):
        with pytest.raises(NotDiagonalError):
            shear_inverse(ShearMap(0, 1, 1))


def test_json_record():
    s = ShearMap(1, 2j, C)
    assert s.to_dict() == {"lambda": [1.0, 0.0], "mu": [0.0, 2.0], "A": [C, 0.0]}
    assert ShearMap.from_dict(s.to_dict()) == s
    with pytest.raises(SeriesError):
        ShearMap.from_dict({"lambda": [1, 0]})
