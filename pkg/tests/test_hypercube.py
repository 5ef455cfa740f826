import numpy as np
import pytest

from boolbsc import (
    BooleanFunction,
    DomainError,
    FourierSpectrum,
    NoiseParameter,
    RealFunction,
    apply_noise,
    complement_point,
    even_odd_parts,
    inverse_wht,
    wht,
)
from boolbsc.families import dictator, majority, parity

from oracles import convolution_noise_oracle, inverse_wht_oracle, wht_oracle


def rng(seed=0):
    return np.random.Generator(np.random.Philox(key=seed))


class TestNoiseParameter:
    def test_derived_quantities(self):
        p = NoiseParameter(0.2)
        assert p.rho == pytest.approx(0.6)
        assert p.lam == pytest.approx(0.36)
        assert p.lam == p.rho**2

    @pytest.mark.parametrize("eps", [-0.1, 0.6, 1.0])
    def test_rejects_out_of_range(self, eps):
        with pytest.raises(DomainError):
            NoiseParameter(eps)

    def test_from_lambda_roundtrip(self):
        p = NoiseParameter.from_lambda(0.36)
        assert p.lam == pytest.approx(0.36, abs=1e-15)
        assert 0.0 <= p.eps <= 0.5


class TestBooleanFunction:
    def test_majority_literal(self):
        f = BooleanFunction.from_string("3:E8")
        assert list(f.values()) == [0, 0, 0, 1, 0, 1, 1, 1]
        assert f.to_string() == "3:E8"

    def test_real_roundtrip_is_identity(self):
        r = rng(1)
        for _ in range(50):
            n = int(r.integers(1, 9))
            f = BooleanFunction.from_values(n, r.integers(0, 2, size=1 << n))
            assert f.as_real().to_boolean() == f

    def test_table_width_enforced(self):
        with pytest.raises(DomainError):
            BooleanFunction(2, 1 << 4)
        with pytest.raises(DomainError):
            BooleanFunction(0, 0)
        with pytest.raises(DomainError):
            BooleanFunction(25, 0)

    def test_literal_errors_carry_position(self):
        with pytest.raises(DomainError, match="position"):
            BooleanFunction.from_string("3:E")  # wrong digit count
        with pytest.raises(DomainError, match="position"):
            BooleanFunction.from_string("3:GG")
        with pytest.raises(DomainError):
            BooleanFunction.from_string("E8")

    def test_mean(self):
        assert BooleanFunction.from_string("3:E8").mean() == 0.5
        assert BooleanFunction(2, 0b0001).mean() == 0.25


class TestWht:
    def test_two_point_dictator(self):
        s = wht(RealFunction(1, [0.0, 1.0]))
        assert list(s.coeffs) == [0.5, -0.5]

    def test_constant_one(self):
        s = wht(RealFunction(2, np.ones(4)))
        assert list(s.coeffs) == [1.0, 0.0, 0.0, 0.0]

    def test_majority_matches_definitional_oracle(self):
        f = majority(3).as_real()
        expected = wht_oracle(f.values)
        got = wht(f).coeffs
        assert got == pytest.approx(expected, abs=1e-15)
        assert got[0] == pytest.approx(0.5)
        for k in (1, 2, 4):  # singleton masks
            assert got[k] == pytest.approx(-0.25)

    def test_random_matches_oracle(self):
        r = rng(2)
        for n in range(1, 7):
            v = RealFunction(n, r.normal(size=1 << n))
            assert wht(v).coeffs == pytest.approx(wht_oracle(v.values), abs=1e-12)

    def test_round_trip_corpus(self):
        r = rng(3)
        worst = 0.0
        for i in range(1000):
            n = 1 + i % 10
            v = r.normal(size=1 << n)
            back = inverse_wht(wht(RealFunction(n, v))).values
            worst = max(worst, float(np.max(np.abs(back - v))))
        assert worst <= 1e-13

    def test_parseval_corpus(self):
        r = rng(4)
        for i in range(1000):
            n = 1 + i % 10
            v = RealFunction(n, r.normal(size=1 << n))
            power = np.sum(wht(v).coeffs ** 2)
            second = np.mean(v.values**2)
            assert abs(power - second) <= 1e-12 * max(1.0, abs(second))

    def test_mean_is_empty_set_coefficient(self):
        r = rng(5)
        for n in (1, 4, 8):
            v = RealFunction(n, r.normal(size=1 << n))
            assert abs(v.mean() - wht(v).coeffs[0]) <= 1e-13


class TestInverseWht:
    def test_dictator_inverse(self):
        v = inverse_wht(FourierSpectrum(1, [0.5, -0.5]))
        assert list(v.values) == [0.0, 1.0]

    def test_zero_spectrum(self):
        v = inverse_wht(FourierSpectrum(3, np.zeros(8)))
        assert not np.any(v.values)

    def test_random_spectrum_matches_definitional_sum(self):
        coeffs = rng(6).normal(size=64)
        got = inverse_wht(FourierSpectrum(6, coeffs)).values
        assert got == pytest.approx(inverse_wht_oracle(coeffs), abs=1e-12)


class TestApplyNoise:
    def test_dictator_single_coordinate(self):
        f = dictator(3, 1).as_real()
        for eps in (0.1, 0.25, 0.4):
            noisy = apply_noise(f, NoiseParameter(eps))
            for y in range(8):
                expected = eps if y & 1 == 0 else 1.0 - eps
                assert noisy.values[y] == pytest.approx(expected, abs=1e-15)

    def test_half_noise_flattens_everything(self):
        v = RealFunction(4, rng(7).normal(size=16))
        noisy = apply_noise(v, NoiseParameter(0.5))
        assert noisy.values == pytest.approx(np.full(16, v.mean()), abs=1e-14)

    def test_majority_matches_convolution_oracle(self):
        f = majority(3).as_real()
        got = apply_noise(f, NoiseParameter(0.1)).values
        assert got == pytest.approx(convolution_noise_oracle(f.values, 0.1), abs=1e-12)

    def test_spectral_agrees_with_convolution_up_to_n8(self):
        r = rng(8)
        for n in range(1, 9):
            v = RealFunction(n, r.random(1 << n))
            eps = float(r.uniform(0.0, 0.5))
            got = apply_noise(v, NoiseParameter(eps)).values
            assert got == pytest.approx(
                convolution_noise_oracle(v.values, eps), abs=1e-12
            )

    def test_semigroup(self):
        r = rng(9)
        for n in (2, 5, 8):
            v = RealFunction(n, r.normal(size=1 << n))
            e1, e2 = 0.1, 0.3
            rho3 = (1 - 2 * e1) * (1 - 2 * e2)
            e3 = (1.0 - rho3) / 2.0
            twice = apply_noise(apply_noise(v, NoiseParameter(e1)), NoiseParameter(e2))
            once = apply_noise(v, NoiseParameter(e3))
            assert twice.values == pytest.approx(once.values, abs=1e-12)

    def test_mean_preserved_exactly(self):
        v = RealFunction(6, rng(10).random(64))
        noisy = apply_noise(v, NoiseParameter(0.17))
        assert abs(noisy.mean() - v.mean()) <= 1e-14


class TestEvenOddParts:
    def test_dictator(self):
        g0, g1 = even_odd_parts(dictator(3, 1).as_real())
        assert g0.values == pytest.approx(np.full(8, 0.5))
        expected_odd = np.array([(j & 1) - 0.5 for j in range(8)])
        assert g1.values == pytest.approx(expected_odd)

    def test_parity_of_even_set_is_its_own_even_part(self):
        g = parity(2, [1, 2]).as_real()
        g0, g1 = even_odd_parts(g)
        assert np.array_equal(g0.values, g.values)
        assert not np.any(g1.values)

    def test_symmetry_and_reconstruction(self):
        v = rng(11).random(32)
        g = RealFunction(5, v)
        g0, g1 = even_odd_parts(g)
        assert np.array_equal(g0.values, g0.values[::-1])
        assert g1.values == pytest.approx(-g1.values[::-1], abs=1e-15)
        # g1 = g - g0 by construction, so the reconstruction is bitwise
        assert np.array_equal(g0.values + g1.values, v)
        assert np.all(np.abs(g1.values) <= g0.values + 1e-15)

    def test_spectrum_support(self):
        g = RealFunction(5, rng(12).random(32))
        g0, g1 = even_odd_parts(g)
        from boolbsc.hypercube import popcounts

        levels = popcounts(5)
        even_coeffs = wht(g0).coeffs
        odd_coeffs = wht(g1).coeffs
        assert np.max(np.abs(even_coeffs[levels % 2 == 1])) <= 1e-15
        assert np.max(np.abs(odd_coeffs[levels % 2 == 0])) <= 1e-15


class TestComplementPoint:
    def test_examples(self):
        assert complement_point(0, 3) == 7
        assert complement_point(5, 3) == 2

    def test_involution_exhaustive(self):
        for n in range(1, 11):
            for j in range(1 << n):
                assert complement_point(complement_point(j, n), n) == j

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            complement_point(8, 3)
        with pytest.raises(DomainError):
            complement_point(-1, 3)
