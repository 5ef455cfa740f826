import math

import numpy as np
import pytest

from boolbsc import (
    BooleanFunction,
    DomainError,
    NoiseParameter,
    RealFunction,
    apply_noise,
    binary_entropy,
    first_level_deficit,
    fourth_moment_report,
    lemma13_slope_check,
    lemma13_terms,
    lemma41_check,
    nearest_subcube,
    pointwise_log_identity,
    quartic_bound_check,
    variance_identity_check,
)
from boolbsc.families import constant, dictator, majority, parity, subcube_indicator
from boolbsc.suites import _random_normalized_nonnegative, run_check_suite

from oracles import hamming_distance_oracle, wht_oracle

LN2 = math.log(2.0)


def rng(seed=0):
    return np.random.Generator(np.random.Philox(key=seed))


class TestLemma41:
    def test_constant_one(self):
        lhs, rhs = lemma41_check(RealFunction(3, np.ones(8)))
        assert lhs == 0.0
        assert rhs == 0.0

    def test_noisy_scaled_dictator(self):
        eps = 0.1
        g = apply_noise(RealFunction(2, 2.0 * dictator(2, 1).values()), NoiseParameter(eps))
        lhs, rhs = lemma41_check(g)
        assert lhs == pytest.approx(1.0 - binary_entropy(eps), abs=1e-12)
        assert rhs == pytest.approx(1.0 - binary_entropy(eps), abs=1e-12)

    def test_random_corpus_with_zero_patches(self):
        r = rng(30)
        worst = 0.0
        for i in range(500):
            g = _random_normalized_nonnegative(r, 1 + i % 8)
            lhs, rhs = lemma41_check(g)
            worst = max(worst, abs(lhs - rhs))
        assert worst <= 1e-11

    def test_degenerate_pair_contributes_zero(self):
        # g vanishes on a complement-symmetric pair; the decomposition must
        # take the explicit zero branch rather than divide
        v = np.array([0.0, 2.0, 2.0, 0.0])
        g = RealFunction(2, v / np.mean(v))
        lhs, rhs = lemma41_check(g)
        assert abs(lhs - rhs) <= 1e-12

    def test_preconditions(self):
        with pytest.raises(DomainError):
            lemma41_check(RealFunction(2, [2.0, 1.0, 1.0, 1.0]))  # mean != 1
        with pytest.raises(DomainError):
            lemma41_check(RealFunction(2, [2.0, -1.0, 2.0, 1.0]))


class TestPointwiseLogIdentity:
    def test_trivial_points(self):
        assert pointwise_log_identity(1.0, 0.0) == (0.0, 0.0)
        lhs, rhs = pointwise_log_identity(1.0, 1.0)
        assert lhs == pytest.approx(1.0, abs=1e-15)
        assert rhs == pytest.approx(1.0, abs=1e-15)
        assert pointwise_log_identity(0.0, 0.0) == (0.0, 0.0)

    def test_dense_grid(self):
        a = np.repeat(np.linspace(0.004, 4.0, 1000), 1000)
        b = a * np.tile(np.linspace(0.0, 1.0, 1000), 1000)
        lhs, rhs = pointwise_log_identity(a, b)
        assert np.max(np.abs(lhs - rhs) / np.maximum(1.0, a)) <= 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            pointwise_log_identity(1.0, 2.0)
        with pytest.raises(DomainError):
            pointwise_log_identity(1.0, -0.1)


class TestQuarticBound:
    def test_endpoints_equal(self):
        assert quartic_bound_check(0.0) == (0.0, 0.0)
        lhs, rhs = quartic_bound_check(1.0)
        assert lhs == pytest.approx(1.0, abs=1e-15)
        assert rhs == pytest.approx(1.0, abs=1e-15)

    def test_grid_no_violations(self):
        x = np.linspace(0.0, 1.0, 100_000)
        lhs, rhs = quartic_bound_check(x)
        assert np.all(lhs <= rhs + 1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            quartic_bound_check(1.5)


class TestLemma13Terms:
    def test_dictator(self):
        p = NoiseParameter(0.2)
        terms = lemma13_terms(dictator(3, 1), p)
        assert terms.first_level_weight == pytest.approx(0.25, abs=1e-15)
        assert terms.mean == 0.5
        assert terms.term1 == pytest.approx(p.lam / (4.0 * LN2), abs=1e-14)

    def test_parity_has_no_first_level_weight(self):
        terms = lemma13_terms(parity(2, [1, 2]), NoiseParameter(0.3))
        assert terms.first_level_weight == 0.0
        assert terms.term1 == 0.0

    def test_majority_first_level(self):
        terms = lemma13_terms(majority(3), NoiseParameter(0.3))
        expected = sum(wht_oracle(majority(3).values())[m] ** 2 for m in (1, 2, 4))
        assert terms.first_level_weight == pytest.approx(3.0 / 16.0, abs=1e-15)
        assert terms.first_level_weight == pytest.approx(expected, abs=1e-14)

    def test_rejects_zero_function(self):
        with pytest.raises(DomainError):
            lemma13_terms(constant(3, 0), NoiseParameter(0.2))


class TestSlopeCheck:
    def test_dictator_leading_term(self):
        lam = 1e-4
        result = lemma13_slope_check(dictator(3, 1), lam)
        assert result.applicable
        assert result.predicted == pytest.approx(1.0 / (4.0 * LN2), abs=1e-12)
        assert abs(result.measured / result.predicted - 1.0) <= 1e-3

    def test_full_parity_quadratic_rate(self):
        lam = 1e-4
        result = lemma13_slope_check(parity(3, [1, 2, 3]), lam)
        assert result.applicable
        assert result.predicted == pytest.approx(lam**2 * 0.25 / (2.0 * LN2 * 0.5), rel=1e-12)
        assert abs(result.measured / result.predicted - 1.0) <= 1e-2

    def test_constant_not_applicable(self):
        result = lemma13_slope_check(constant(3, 1), 1e-4)
        assert not result.applicable
        assert result.passed

    def test_random_corpus(self):
        r = rng(31)
        lam = 1e-4
        done = 0
        while done < 100:
            n = 2 + done % 5
            f = BooleanFunction.from_values(n, r.integers(0, 2, size=1 << n))
            if f.mean() == 0.0:
                continue
            result = lemma13_slope_check(f, lam)
            if not result.applicable:
                continue
            assert result.passed
            done += 1

    def test_lambda_range_enforced(self):
        with pytest.raises(DomainError):
            lemma13_slope_check(dictator(2, 1), 0.01)


class TestFirstLevelDeficit:
    def test_dictator_zero(self):
        assert first_level_deficit(dictator(4, 3)) == 0.0

    def test_parity_full_weight(self):
        assert first_level_deficit(parity(2, [1, 2])) == pytest.approx(0.25, abs=1e-15)

    def test_majority(self):
        assert first_level_deficit(majority(3)) == pytest.approx(1.0 / 16.0, abs=1e-15)


class TestVarianceIdentity:
    def test_dictator_both_zero(self):
        direct, spectral = variance_identity_check(dictator(3, 1), NoiseParameter(0.2))
        assert direct == pytest.approx(0.0, abs=1e-15)
        assert spectral == 0.0

    def test_parity_pair(self):
        direct, spectral = variance_identity_check(parity(2, [1, 2]), NoiseParameter(0.2))
        assert direct == pytest.approx(0.36**2 / 4.0, abs=1e-14)
        assert spectral == pytest.approx(0.36**2 / 4.0, abs=1e-15)

    def test_random_agreement(self):
        r = rng(32)
        for _ in range(30):
            f = BooleanFunction.from_values(6, r.integers(0, 2, size=64))
            direct, spectral = variance_identity_check(f, NoiseParameter(0.3))
            assert abs(direct - spectral) <= 1e-12


class TestFourthMoment:
    def test_dictator_two_valued_ratio_one(self):
        report = fourth_moment_report(dictator(3, 1), NoiseParameter(0.25))
        assert report.ratio == pytest.approx(1.0, abs=1e-12)

    def test_constant_not_applicable(self):
        report = fourth_moment_report(constant(3, 0), NoiseParameter(0.25))
        assert report.ratio is None
        assert report.fourth == 0.0

    def test_exhaustive_n3_sweep_records_max(self):
        p = NoiseParameter(0.25)
        ratios = [
            fourth_moment_report(BooleanFunction(3, t), p).ratio
            for t in range(256)
        ]
        finite = [x for x in ratios if x is not None]
        assert finite
        assert max(finite) >= 1.0


class TestNearestSubcube:
    def test_exact_subcube(self):
        fit = nearest_subcube(subcube_indicator(4, 1, 0))
        assert (fit.kind, fit.coordinate, fit.polarity, fit.distance) == ("coordinate", 1, 0, 0.0)

    def test_flipped_dictator_bit(self):
        f = dictator(4, 1)
        fit = nearest_subcube(BooleanFunction(4, f.table ^ 1))
        assert fit.kind == "coordinate"
        assert fit.distance == pytest.approx(1.0 / 16.0)

    def test_majority_tie_break(self):
        fit = nearest_subcube(majority(3))
        assert fit.coordinate == 1
        assert fit.distance == pytest.approx(0.25)

    def test_distance_never_beyond_half(self):
        r = rng(33)
        for _ in range(100):
            f = BooleanFunction.from_values(4, r.integers(0, 2, size=16))
            assert nearest_subcube(f).distance <= 0.5

    def test_matches_distance_oracle(self):
        r = rng(34)
        for _ in range(20):
            f = BooleanFunction.from_values(3, r.integers(0, 2, size=8))
            fit = nearest_subcube(f)
            if fit.kind == "coordinate":
                cand = subcube_indicator(3, fit.coordinate, fit.polarity)
            else:
                cand = constant(3, int(fit.kind == "constant-1"))
            assert fit.distance == pytest.approx(
                hamming_distance_oracle(f.table, cand.table, 8)
            )

    def test_theorem_hypothesis_flags(self):
        fit = nearest_subcube(dictator(4, 2), delta=0.1)
        assert fit.meets_mean_condition
        assert fit.meets_first_level_condition
        fit = nearest_subcube(parity(4, [1, 2, 3, 4]), delta=0.1)
        assert fit.meets_mean_condition
        assert not fit.meets_first_level_condition


class TestFknEmpiricalLaw:
    def test_n4_deficit_zero_implies_subcube(self):
        # level-<=1 boolean functions are exactly constants and the 2n
        # coordinate indicators
        zero_deficit = []
        for table in range(1 << 16):
            f = BooleanFunction(4, table)
            if first_level_deficit(f) == 0.0:
                zero_deficit.append(f)
        assert len(zero_deficit) == 2 + 8
        for f in zero_deficit:
            assert nearest_subcube(f).distance == 0.0

    def test_n4_distance_bounded_by_deficit(self):
        r = rng(35)
        ratios = []
        for _ in range(500):
            f = BooleanFunction.from_values(4, r.integers(0, 2, size=16))
            deficit = first_level_deficit(f)
            dist = nearest_subcube(f).distance
            if deficit > 0:
                ratios.append(dist / deficit)
            else:
                assert dist == 0.0
        assert max(ratios) < 50.0  # empirical constant, recorded not derived


class TestCheckSuites:
    @pytest.mark.parametrize(
        "suite", ["lemma41", "pointwise", "quartic", "parseval", "series", "variance", "slope"]
    )
    def test_each_suite_passes(self, suite):
        records = run_check_suite(suite, cases=None if suite != "pointwise" else 10_000, seed=1)
        assert records
        for record in records:
            assert record["pass"], record

    def test_record_schema(self):
        (record,) = run_check_suite("quartic", cases=1000, seed=0)
        assert set(record) == {"check_name", "params", "lhs", "rhs", "tolerance", "pass"}

    def test_unknown_suite_rejected(self):
        with pytest.raises(ValueError):
            run_check_suite("nope")

    def test_zero_cases_rejected(self):
        with pytest.raises(ValueError):
            run_check_suite("lemma41", cases=0)
