import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from truedisc import (
    SimConfig,
    UStatAccumulator,
    ValidationError,
    e_to_p,
    generate_study,
    relative_variance,
    u2_identity,
    u_statistic,
    validate_evalues,
)
from conftest import close_rel, esp_bruteforce, u_stat_bruteforce

finite_evalues = st.lists(
    st.floats(min_value=0.0, max_value=1e6, allow_nan=False, allow_infinity=False),
    min_size=1,
    max_size=8,
)


class TestUStatistic:
    def test_pairwise_example(self):
        assert u_statistic((1, 2, 3), 2) == pytest.approx(11 / 3, rel=1e-12)

    @pytest.mark.parametrize("c", [0.0, 0.5, 1.0, 7.25])
    def test_mean_of_equal_values(self, c):
        assert u_statistic((c,) * 5, 1) == pytest.approx(c, rel=1e-12, abs=0)

    def test_order_degrades_to_full_product(self):
        assert u_statistic((1, 2), 3) == 2.0
        assert u_statistic((8,), 2) == 8.0

    def test_single_nonzero_entry(self):
        assert u_statistic((5, 0, 0, 0, 0), 2) == 0.0

    @given(finite_evalues, st.integers(min_value=1, max_value=5))
    @settings(max_examples=300)
    def test_matches_bruteforce(self, values, n):
        assert close_rel(u_statistic(values, n), u_stat_bruteforce(tuple(values), n))

    @given(finite_evalues, st.integers(min_value=1, max_value=4), st.randoms())
    @settings(max_examples=200)
    def test_permutation_invariance(self, values, n, rnd):
        shuffled = list(values)
        rnd.shuffle(shuffled)
        assert close_rel(u_statistic(shuffled, n), u_statistic(values, n))

    @given(
        finite_evalues,
        st.integers(min_value=1, max_value=4),
        st.data(),
    )
    @settings(max_examples=200)
    def test_monotone_in_each_coordinate(self, values, n, data):
        i = data.draw(st.integers(min_value=0, max_value=len(values) - 1))
        bump = data.draw(st.floats(min_value=0.0, max_value=1e6, allow_nan=False))
        bumped = list(values)
        bumped[i] += bump
        base = u_statistic(values, n)
        assert u_statistic(bumped, n) >= base - 1e-12 * max(1.0, base)

    @pytest.mark.parametrize("k", [1, 2, 5, 17, 30])
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_all_ones_is_exactly_one(self, k, n):
        assert u_statistic((1.0,) * k, n) == 1.0

    def test_infinity_propagates(self):
        assert u_statistic((math.inf, 2.0), 1) == math.inf
        assert u_statistic((math.inf, 2.0, 3.0), 2) == math.inf

    def test_zero_annihilates_infinity(self):
        # the only 2-subset pairs inf with 0, and 0 * inf is 0 by convention
        assert u_statistic((math.inf, 0.0), 2) == 0.0
        assert u_statistic((math.inf, 0.0, 2.0), 2) == math.inf

    def test_rejects_bad_input(self):
        with pytest.raises(ValidationError):
            u_statistic((), 1)
        with pytest.raises(ValidationError):
            u_statistic((1.0, math.nan), 1)
        with pytest.raises(ValidationError):
            u_statistic((1.0, -0.5), 1)
        with pytest.raises(ValidationError):
            u_statistic((1.0,), 0)


class TestU2Identity:
    def test_example(self):
        assert u2_identity((1, 2, 3)) == pytest.approx(11 / 3, rel=1e-12)

    def test_zero_variance(self):
        assert u2_identity((2, 2, 2, 2)) == pytest.approx(4.0, rel=1e-12)

    def test_needs_two_values(self):
        with pytest.raises(ValidationError):
            u2_identity((7.0,))

    def test_matches_direct_on_random_vectors(self):
        rng = random.Random(20240)
        for _ in range(100):
            k = rng.randint(2, 50)
            values = [rng.uniform(0, 100) for _ in range(k)]
            direct = u_statistic(values, 2)
            assert abs(u2_identity(values) - direct) <= 1e-9 * max(1.0, direct)

    def test_infinity_falls_back_to_direct(self):
        assert u2_identity((math.inf, 2.0)) == math.inf
        assert u2_identity((math.inf, 0.0)) == 0.0

    def test_huge_values_saturate(self):
        assert u2_identity((1e308, 1e308)) == math.inf


class TestAccumulator:
    def test_fresh_state(self):
        acc = UStatAccumulator(2)
        assert acc.count == 0 and acc.esp == [1.0, 0.0, 0.0]
        assert len(UStatAccumulator(5).esp) == 6

    def test_esp_example(self):
        acc = UStatAccumulator(2)
        for v in (1, 2, 3):
            acc.insert(v)
        assert acc.esp == [1.0, 6.0, 11.0]
        assert acc.u_value() == pytest.approx(11 / 3, rel=1e-12)

    def test_single_insert(self):
        acc = UStatAccumulator(3)
        acc.insert(4.5)
        assert acc.esp == [1.0, 4.5, 0.0, 0.0]

    def test_order_degradation(self):
        acc = UStatAccumulator(2)
        acc.insert(8)
        assert acc.u_value() == 8.0
        acc3 = UStatAccumulator(3)
        acc3.insert(1)
        acc3.insert(2)
        assert acc3.u_value() == 2.0

    def test_empty_value_rejected(self):
        with pytest.raises(ValidationError):
            UStatAccumulator(2).u_value()

    def test_insert_rejects_bad_values(self):
        acc = UStatAccumulator(2)
        with pytest.raises(ValidationError):
            acc.insert(math.nan)
        with pytest.raises(ValidationError):
            acc.insert(-1.0)

    def test_zero_times_infinity_inside_recurrence(self):
        acc = UStatAccumulator(2)
        acc.insert(math.inf)
        acc.insert(0.0)
        assert acc.esp == [1.0, math.inf, 0.0]
        assert acc.u_value() == 0.0

    def test_random_sequences_match_bruteforce(self):
        rng = random.Random(555)
        for _ in range(1000):
            m = rng.randint(1, 12)
            n = rng.randint(1, 4)
            values = [rng.choice([0.0, rng.uniform(0, 10), rng.uniform(0, 1e4)]) for _ in range(m)]
            acc = UStatAccumulator(n)
            for v in values:
                acc.insert(v)
            for i in range(n + 1):
                assert close_rel(acc.esp[i], esp_bruteforce(values, i))
            assert close_rel(acc.u_value(), u_stat_bruteforce(tuple(values), n))

    def test_clone_is_independent(self):
        acc = UStatAccumulator(2)
        acc.insert(1.0)
        other = acc.clone()
        other.insert(5.0)
        assert acc.count == 1 and other.count == 2
        assert acc.esp == [1.0, 1.0, 0.0]


class TestRelativeVariance:
    def test_single_nonzero_is_one(self):
        assert relative_variance((5, 0, 0, 0, 0)) == pytest.approx(1.0, abs=1e-12)

    def test_equal_values_are_zero(self):
        assert relative_variance((3.5, 3.5, 3.5)) == 0.0

    def test_example(self):
        assert relative_variance((1, 2, 3)) == pytest.approx(1 / 12, rel=1e-12)

    def test_zero_vector_is_zero(self):
        assert relative_variance((0.0, 0.0, 0.0)) == 0.0

    def test_needs_two_finite_values(self):
        with pytest.raises(ValidationError):
            relative_variance((1.0,))
        with pytest.raises(ValidationError):
            relative_variance((1.0, math.inf))

    @given(st.lists(st.floats(min_value=0.0, max_value=1e6, allow_nan=False),
                    min_size=2, max_size=10))
    @settings(max_examples=300)
    def test_bounded(self, values):
        assert 0.0 <= relative_variance(values) <= 1.0


class TestSquaringRelation:
    @given(st.lists(st.floats(min_value=1e-6, max_value=1e6, allow_nan=False),
                    min_size=2, max_size=10))
    @settings(max_examples=300)
    def test_order2_equals_mean_squared_discounted(self, values):
        m1 = u_statistic(values, 1)
        u2 = u_statistic(values, 2)
        assert close_rel(u2, m1 * m1 * (1.0 - relative_variance(values)), tol=1e-8)
        assert u2 <= m1 * m1 * (1.0 + 1e-12)

    @given(st.lists(st.floats(min_value=0.0, max_value=1e6, allow_nan=False),
                    min_size=2, max_size=10))
    @settings(max_examples=300)
    def test_variance_bound(self, values):
        k = len(values)
        m1 = sum(values) / k
        var = sum((v - m1) ** 2 for v in values) / k
        assert var <= (k - 1) * m1 * m1 * (1.0 + 1e-9) + 1e-12


class TestEToP:
    def test_examples(self):
        assert e_to_p(20.0) == 0.05
        assert e_to_p(0.5) == 1.0
        assert e_to_p(math.inf) == 0.0
        assert e_to_p(0.0) == 1.0

    @given(st.floats(min_value=0.0, allow_nan=False))
    def test_range(self, e):
        assert 0.0 <= e_to_p(e) <= 1.0

    def test_rejects_bad_values(self):
        with pytest.raises(ValidationError):
            e_to_p(-1.0)
        with pytest.raises(ValidationError):
            e_to_p(math.nan)


class TestValidateEValues:
    def test_roundtrip(self):
        assert validate_evalues([1, 2.5, math.inf]) == (1.0, 2.5, math.inf)

    def test_rejects(self):
        for bad in ([], [math.nan], [-0.1]):
            with pytest.raises(ValidationError):
                validate_evalues(bad)


def test_merged_null_evalues_keep_mean_below_one():
    """Monte Carlo: merged likelihood ratios under the null stay e-values,
    so their empirical mean cannot exceed 1 beyond noise (3 SE)."""
    reps = 10_000
    k = 10
    study = generate_study(SimConfig(K=reps * k, n_false=0, seed=424242))
    for n in (1, 2, 3):
        vals = [u_statistic(study.e[i * k:(i + 1) * k], n) for i in range(reps)]
        mean = sum(vals) / reps
        var = sum((v - mean) ** 2 for v in vals) / (reps - 1)
        se = math.sqrt(var / reps)
        assert mean <= 1.0 + 3.0 * se
