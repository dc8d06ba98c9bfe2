import math
import random
from fractions import Fraction

import numpy as np
import pytest

from stochtaylor.coefficients import (
    WeightProfile,
    bar_coefficient,
    build_tensor,
    exact_norm,
    get_tensor,
    parseval_defect,
    scaled_coefficient,
    squared_sum,
)
from stochtaylor.legendre import legendre_poly


def quadrature_bar(exponents, j):
    """Independent oracle: nested Gauss-Legendre over the ordered simplex.

    Integrates prod_m P_{j_m}(x_m) (1+x_m)^{l_m} over
    -1 <= x_1 <= ... <= x_k <= 1 (innermost first), exactly for polynomials
    since the node count exceeds every degree involved.
    """
    nodes, weights = np.polynomial.legendre.leggauss(40)

    def rec(m, upper):
        # integral over x_m in [-1, upper] of factor * rec(m-1, x_m)
        x = 0.5 * (upper + 1.0) * nodes + 0.5 * (upper - 1.0)
        w = 0.5 * (upper + 1.0) * weights
        pj = legendre_poly(j[m])
        fac = np.array([pj(float(xi)) for xi in x]) * (1.0 + x) ** exponents[m]
        if m == 0:
            return float((w * fac).sum())
        inner = np.array([rec(m - 1, float(xi)) for xi in x])
        return float((w * fac * inner).sum())

    sign = (-1) ** sum(exponents)
    return sign * rec(len(j) - 1, 1.0)


class TestBarCoefficient:
    def test_ordered_simplex_volume(self):
        assert bar_coefficient((0, 0, 0), (0, 0, 0)) == Fraction(4, 3)
        assert bar_coefficient((0, 0), (0, 0)) == Fraction(2)
        assert bar_coefficient((0,) * 5, (0,) * 5) == Fraction(4, 15)

    def test_weighted_examples(self):
        assert bar_coefficient((1, 0), (0, 0)) == Fraction(-4, 3)
        assert bar_coefficient((0, 1), (0, 0)) == Fraction(-8, 3)

    def test_antisymmetry_of_pair_offdiagonal(self):
        # C_{01} + C_{10} = 0 when exactly one degree is zero
        assert bar_coefficient((0, 0), (0, 1)) + bar_coefficient((0, 0), (1, 0)) == 0

    @pytest.mark.parametrize("exponents,j", [
        ((0, 0), (2, 3)),
        ((0, 1), (1, 2)),
        ((1, 0), (3, 1)),
        ((0, 0, 0), (1, 2, 0)),
        ((0, 0, 1), (2, 0, 1)),
        ((0, 1, 0), (0, 2, 2)),
        ((1, 0, 0), (1, 1, 3)),
        ((0, 0, 0, 0), (1, 0, 2, 1)),
        ((0, 0, 0, 0, 0), (0, 1, 0, 1, 0)),
    ])
    def test_against_quadrature_oracle(self, exponents, j):
        got = float(bar_coefficient(exponents, j))
        expect = quadrature_bar(exponents, j)
        assert got == pytest.approx(expect, abs=1e-13)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            bar_coefficient((0, 0), (0,))
        with pytest.raises(ValueError):
            bar_coefficient((0, 0), (0, -1))
        with pytest.raises(ValueError):
            WeightProfile(())
        with pytest.raises(ValueError):
            WeightProfile((0,) * 7)
        with pytest.raises(ValueError):
            WeightProfile((-1,))


class TestScaling:
    def test_triple_leading(self):
        assert scaled_coefficient((0, 0, 0), (0, 0, 0), 1.0) == pytest.approx(1 / 6)

    def test_pair_leading(self):
        assert scaled_coefficient((0, 0), (0, 0), 1.0) == pytest.approx(0.5)

    def test_single(self):
        assert scaled_coefficient((0,), (0,), 4.0) == pytest.approx(2.0)

    # the published scaling laws, one per weighted family:
    # prefactor denominators 8, 8, 8, 16, 16, 16, 16, 32 and step powers
    # 3/2, 2, 2, 2, 5/2, 5/2, 5/2, 5/2
    @pytest.mark.parametrize("profile,denom,power", [
        ((0, 0, 0), 8, 1.5),
        ((0, 1), 8, 2.0),
        ((1, 0), 8, 2.0),
        ((0, 0, 0, 0), 16, 2.0),
        ((0, 0, 1), 16, 2.5),
        ((0, 1, 0), 16, 2.5),
        ((1, 0, 0), 16, 2.5),
        ((0, 0, 0, 0, 0), 32, 2.5),
    ])
    def test_published_scaling_laws(self, profile, denom, power):
        rng = random.Random(hash(profile) & 0xFFFF)
        k = len(profile)
        h = 0.37
        for _ in range(5):
            j = tuple(rng.randrange(0, 4) for _ in range(k))
            root = math.prod(math.sqrt(2 * jm + 1) for jm in j)
            expect = root / denom * h**power * float(bar_coefficient(profile, j))
            assert scaled_coefficient(profile, j, h) == pytest.approx(expect, rel=1e-14)

    def test_scaling_in_step_length(self):
        rng = random.Random(3)
        for profile in [(0,), (1,), (0, 0), (0, 1), (0, 0, 0), (1, 0, 0)]:
            k, L = len(profile), sum(profile)
            j = tuple(rng.randrange(0, 3) for _ in range(k))
            lam = 0.123
            c1 = scaled_coefficient(profile, j, 1.0)
            assert scaled_coefficient(profile, j, lam) == pytest.approx(
                lam ** (k / 2 + L) * c1, rel=1e-14)

    def test_step_must_be_positive(self):
        with pytest.raises(ValueError):
            scaled_coefficient((0,), (0,), 0.0)


class TestExactNorm:
    @pytest.mark.parametrize("profile,expect", [
        ((0, 0), Fraction(1, 2)),
        ((0, 1), Fraction(1, 4)),
        ((1, 0), Fraction(1, 12)),
        ((0, 0, 0), Fraction(1, 6)),
        ((0, 0, 1), Fraction(1, 10)),
        ((0, 1, 0), Fraction(1, 20)),
        ((1, 0, 0), Fraction(1, 60)),
        ((0, 0, 0, 0), Fraction(1, 24)),
        ((0, 0, 0, 0, 0), Fraction(1, 120)),
        ((0,), Fraction(1)),
        ((1,), Fraction(1, 3)),
        ((2,), Fraction(1, 5)),
    ])
    def test_published_constants(self, profile, expect):
        assert exact_norm(profile).value == expect

    def test_norm_positive_and_exponent(self):
        n = exact_norm((0, 1, 0))
        assert n.value > 0
        assert n.exponent == 5
        assert n.at(2.0) == pytest.approx(float(n.value) * 32.0)


class TestTensor:
    def test_counts(self):
        assert len(build_tensor((0, 0), 0)) == 1
        assert len(build_tensor((0, 0, 0), 1)) == 8
        assert len(build_tensor((0,) * 5, 2)) == 243

    def test_entries(self):
        t = build_tensor((0, 0), 0)
        assert t[(0, 0)] == Fraction(2)
        t = build_tensor((0, 0, 0), 1)
        assert t[(0, 0, 0)] == Fraction(4, 3)
        t = build_tensor((0,) * 5, 0)
        assert t[(0,) * 5] == Fraction(4, 15)

    def test_entry_ceiling(self):
        with pytest.raises(ValueError):
            build_tensor((0, 0, 0), 100, entry_ceiling=10**6)

    def test_scaled_array_matches_scalar_path(self):
        t = get_tensor((0, 1), 3)
        arr = t.scaled_array()
        for j1 in range(4):
            for j2 in range(4):
                assert arr[j1, j2] == pytest.approx(
                    scaled_coefficient((0, 1), (j1, j2), 1.0), rel=1e-14)


class TestParseval:
    def test_pair_defect_closed_form(self):
        # I_2 - sum C^2 = 1/(4(2p+1)) exactly, all-zero-weight pair
        for p in (0, 1, 5, 20, 50):
            assert parseval_defect((0, 0), p) == Fraction(1, 4 * (2 * p + 1))

    def test_s50_value(self):
        assert squared_sum((0, 0), 50) == pytest.approx(0.5 - 1 / 404, rel=1e-15)

    @pytest.mark.parametrize("profile", [(0, 0), (0, 1), (1, 0), (0, 0, 0), (0, 0, 1)])
    def test_monotone_and_bounded(self, profile):
        norm = float(exact_norm(profile).value)
        prev = -1.0
        for p in range(7):
            s = squared_sum(profile, p)
            assert s >= prev - 1e-15
            assert s <= norm + 1e-15
            prev = s

    def test_finite_expansion_k1(self):
        # single integrals terminate: barC_j = 0 for j > l
        for l in (0, 1, 2, 3):
            for j in range(l + 1, l + 8):
                assert bar_coefficient((l,), (j,)) == 0

    def test_published_single_expansions(self):
        # closed forms for the three single integrals
        h = 1.7
        assert scaled_coefficient((0,), (0,), h) == pytest.approx(math.sqrt(h))
        assert scaled_coefficient((1,), (0,), h) == pytest.approx(-h**1.5 / 2)
        assert scaled_coefficient((1,), (1,), h) == pytest.approx(-h**1.5 / (2 * math.sqrt(3)))
        assert scaled_coefficient((2,), (0,), h) == pytest.approx(h**2.5 / 3)
        assert scaled_coefficient((2,), (1,), h) == pytest.approx(h**2.5 * math.sqrt(3) / 6)
        assert scaled_coefficient((2,), (2,), h) == pytest.approx(h**2.5 / (6 * math.sqrt(5)))

    def test_variance_identity_weighted_single(self):
        # sum of squared coefficients equals the second moment (T-t)^3/3
        h = 0.83
        total = sum(scaled_coefficient((1,), (j,), h) ** 2 for j in range(2))
        assert total == pytest.approx(h**3 / 3, rel=1e-14)
