from fractions import Fraction

import pytest

from oracle import naive_is_prime, oracle_terms
from trifix.analysis import (
    check_conjecture_3_1,
    check_conjecture_3_2,
    check_conjecture_5_1,
    check_conjecture_6_1,
    classification_matrix,
    classify,
    filter_false_negatives,
    percent,
    sweep,
)
from trifix.engine import SequenceSpec, generate


@pytest.fixture(scope="module")
def a3_run():
    return generate(SequenceSpec.standard(3, 201))


@pytest.fixture(scope="module")
def a3_report(a3_run):
    return classify(a3_run, 200)


class TestPercent:
    def test_table_value(self):
        assert percent(Fraction(1160, 1227)) == "94.54%"

    def test_round_half_up(self):
        assert percent(Fraction(1, 800)) == "0.13%"  # 0.125% rounds up, not to even
        assert percent(Fraction(1, 1)) == "100.00%"
        assert percent(0.0) == "0.00%"


class TestClassify:
    def test_a3_counts(self, a3_report):
        r = a3_report
        assert r.excluded_primes == (2, 3)
        assert r.detected == 42
        assert r.near_matches == 2
        assert r.total_eligible_primes == 44
        assert r.missed_primes == (17, 193)
        assert r.false_negatives == 10
        assert r.total_nonprimes == 154
        assert r.false_negative_values == (55, 77, 95, 99, 115, 119, 121, 125, 143, 155)

    def test_matches_oracle_pipeline(self):
        # classification recomputed from scratch: oracle terms + naive primality
        n_limit = 150
        a = oracle_terms("standard", 3, n_limit + 1)
        primes = [n for n in range(2, n_limit + 1) if naive_is_prime(n)]
        eligible = [n for n in primes if n not in (2, 3)]
        expected_detected = sum(1 for n in eligible if a[n - 1] == n)
        expected_near = sum(1 for n in eligible if a[n - 1] != n and a[n] == n)
        expected_fn = [n for n in range(2, n_limit + 1)
                       if not naive_is_prime(n) and a[n - 1] == n]

        report = classify(generate(SequenceSpec.standard(3, n_limit + 1)), n_limit)
        assert report.detected == expected_detected
        assert report.near_matches == expected_near
        assert report.false_negative_values == tuple(expected_fn)
        assert report.total_eligible_primes == len(eligible)
        assert report.total_nonprimes == n_limit - len(primes)

    def test_counts_are_consistent(self, a3_report):
        r = a3_report
        assert r.detected + len(r.missed_primes) == r.total_eligible_primes
        assert 0 <= r.success_rate <= 1
        assert 0 <= r.false_negative_rate <= 1
        assert r.success_rate == Fraction(r.detected, r.total_eligible_primes)
        assert r.false_negative_rate == Fraction(r.false_negatives, r.total_nonprimes)

    def test_near_match_example(self, a3_run):
        # the earliest miss for p=3: prime 17 appears at a(18)
        assert a3_run.term(17).a != 17
        assert a3_run.term(18).a == 17

    def test_one_is_never_a_false_negative(self, a3_report):
        assert 1 not in a3_report.false_negative_values

    def test_bootstrap_duplicate_not_a_false_negative(self):
        report = classify(generate(SequenceSpec.shifted(101)), 100)
        assert 2 not in report.false_negative_values
        assert report.excluded_primes == (2,)

    def test_requires_one_extra_term(self):
        run = generate(SequenceSpec.standard(3, 100))
        with pytest.raises(ValueError):
            classify(run, 100)
        classify(run, 99)  # fine

    def test_default_n_limit(self, a3_run, a3_report):
        assert classify(a3_run) == a3_report

    def test_excluded_primes_variants(self):
        assert classify(generate(SequenceSpec.standard(2, 51)), 50).excluded_primes == (2,)
        assert classify(generate(SequenceSpec.standard(9, 51)), 50).excluded_primes == (2,)
        assert classify(generate(SequenceSpec.no_zero(51)), 50).excluded_primes == (2,)
        # p beyond the classified range is not excluded
        assert classify(generate(SequenceSpec.standard(199, 51)), 50).excluded_primes == (2,)

    def test_determinism(self, a3_run):
        assert classify(a3_run, 200) == classify(a3_run, 200)


class TestClassificationMatrix:
    def test_columns_sum_to_one(self, a3_report):
        matrix = classification_matrix(a3_report)
        assert matrix[0][0] + matrix[1][0] == 1
        assert matrix[0][1] + matrix[1][1] == 1

    def test_zero_miss_structure(self):
        report = classify(generate(SequenceSpec.standard(2, 101)), 100)
        matrix = classification_matrix(report)
        assert matrix[0][0] == 1 and matrix[1][0] == 0


class TestConjecture31:
    def test_holds_for_a7(self):
        result = check_conjecture_3_1(generate(SequenceSpec.standard(7, 25)))
        assert result.holds and result.counterexamples == ()

    def test_identity_sequence_fails(self):
        result = check_conjecture_3_1(generate(SequenceSpec.standard(2, 100)))
        assert not result.holds
        assert [c.n for c in result.counterexamples[:3]] == [2, 4, 6]

    @pytest.mark.parametrize("p", [3, 5, 7, 11])
    def test_family_at_moderate_depth(self, p):
        assert check_conjecture_3_1(generate(SequenceSpec.standard(p, 500))).holds


class TestConjecture32:
    def test_a3_holds(self, a3_run, a3_report):
        result = check_conjecture_3_2(a3_run, 200)
        assert result.holds
        assert a3_report.detected + a3_report.near_matches == a3_report.total_eligible_primes

    def test_a7_prefix_has_no_near_matches(self):
        run = generate(SequenceSpec.standard(7, 26))
        report = classify(run, 24)
        assert report.near_matches == 0
        assert report.detected == report.total_eligible_primes == 7
        assert check_conjecture_3_2(run, 25).holds

    def test_requires_one_extra_term(self):
        with pytest.raises(ValueError):
            check_conjecture_3_2(generate(SequenceSpec.standard(3, 100)), 100)


class TestConjecture51:
    def test_small(self):
        assert check_conjecture_5_1(7).holds

    def test_vacuous(self):
        assert check_conjecture_5_1(1).holds

    def test_moderate(self):
        result = check_conjecture_5_1(500)
        assert result.holds and result.n_limit == 500


class TestConjecture61:
    def test_large_p_small_range_holds(self):
        assert check_conjecture_6_1((541,), 100).holds

    def test_small_p_fails_at_17(self):
        result = check_conjecture_6_1((3,), 100)
        assert not result.holds
        assert result.counterexamples[0].n == 17


class TestFilterFalseNegatives:
    def test_a3_filter(self, a3_report):
        f = filter_false_negatives(a3_report, [3, 5])
        assert f.remaining == (77, 119, 121, 143)
        assert f.removed == 6
        assert len(f.remaining) < a3_report.false_negatives

    def test_empty_filter_is_identity(self, a3_report):
        f = filter_false_negatives(a3_report, [])
        assert f.remaining == a3_report.false_negative_values
        assert f.removed == 0

    def test_multiples_removed(self):
        report = classify(generate(SequenceSpec.no_zero(101)), 100)
        assert 9 in report.false_negative_values
        f = filter_false_negatives(report, [3])
        assert 9 not in f.remaining
        assert 25 in f.remaining  # not divisible by 3


class TestSweep:
    def test_small_family(self):
        result = sweep([3, 5], 300)
        assert result.p_list == (3, 5)
        assert [r.spec.p for r in result.reports] == [3, 5]
        assert result.report_for(5).spec.p == 5
        assert result.union_missed == (193,)
        assert result.figure2_series == (
            (3, result.reports[0].success_rate),
            (5, result.reports[1].success_rate),
        )

    def test_union_is_subset_of_each(self):
        result = sweep([3, 5, 7], 300)
        for r in result.reports:
            assert set(result.union_missed) <= set(r.missed_primes)

    def test_jobs_do_not_change_results(self):
        assert sweep([3, 5, 7], 200, jobs=3) == sweep([3, 5, 7], 200)

    def test_validation(self):
        with pytest.raises(ValueError):
            sweep([0], 100)
        with pytest.raises(ValueError):
            sweep([3], 1)

    def test_empty_p_list(self):
        result = sweep([], 100)
        assert result.reports == () and result.union_missed == ()
