import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracle import naive_divisors, naive_factorize, naive_is_prime, naive_spf
from trifix.numtheory import (
    MAX_SUPPORTED_VALUE,
    CapacityError,
    Factorization,
    build_spf,
    factorize,
    factorize_q,
    factorize_trial,
    is_prime,
    q_value,
    sorted_divisors,
)


@pytest.fixture(scope="module")
def big_table():
    # large enough to factorize q(1000) = 7*999*1000/2 directly
    return build_spf(3_500_000)


class TestBuildSpf:
    def test_limit_10(self):
        table = build_spf(10)
        expected = {2: 2, 3: 3, 4: 2, 5: 5, 6: 2, 7: 7, 8: 2, 9: 3, 10: 2}
        assert {m: table.spf[m] for m in range(2, 11)} == expected

    def test_smallest_valid_table(self):
        table = build_spf(2)
        assert table.limit == 2
        assert table.spf[2] == 2

    def test_spot_checks_at_10k(self, spf_10k):
        assert spf_10k.spf[9999] == 3
        assert spf_10k.spf[9973] == 9973

    def test_matches_trial_division(self, spf_10k):
        for m in range(2, 2000):
            assert spf_10k.spf[m] == naive_spf(m)

    def test_invariants(self, spf_10k):
        for m in range(2, 3000):
            s = spf_10k.spf[m]
            assert m % s == 0
            assert naive_is_prime(s)
            assert all(m % d for d in range(2, s))

    def test_rejects_limit_below_2(self):
        with pytest.raises(ValueError):
            build_spf(1)

    def test_rejects_limit_over_ceiling(self):
        with pytest.raises(CapacityError):
            build_spf(10**9)
        # an explicit ceiling unlocks larger tables
        assert build_spf(101, ceiling=101).limit == 101

    def test_smallest_factor_range_check(self, spf_10k):
        with pytest.raises(ValueError):
            spf_10k.smallest_factor(1)
        with pytest.raises(ValueError):
            spf_10k.smallest_factor(10_001)

    def test_primes_iterator(self, spf_10k):
        primes = list(spf_10k.primes())
        assert primes[:5] == [2, 3, 5, 7, 11]
        assert len(primes) == 1229


class TestFactorize:
    def test_one_has_empty_factorization(self, spf_10k):
        assert factorize(1, spf_10k).factors == ()

    def test_84(self, spf_10k):
        assert factorize(84, spf_10k).factors == ((2, 2), (3, 1), (7, 1))

    def test_prime(self, spf_10k):
        assert factorize(9973, spf_10k).factors == ((9973, 1),)

    def test_domain_errors(self, spf_10k):
        with pytest.raises(ValueError):
            factorize(0, spf_10k)
        with pytest.raises(ValueError):
            factorize(10_001, spf_10k)

    def test_matches_trial_division_oracle(self, spf_10k):
        for m in range(2, 10_001, 7):
            f = factorize(m, spf_10k)
            assert list(f.factors) == naive_factorize(m)

    def test_product_and_primality_invariants(self, spf_10k):
        for m in range(2, 10_001):
            f = factorize(m, spf_10k)
            product = 1
            for p, e in f.factors:
                assert is_prime(p)
                product *= p**e
            assert product == m

    def test_trial_variant_agrees(self, spf_10k):
        for m in (1, 2, 84, 541, 9409, 9973):
            assert factorize_trial(m) == factorize(m, spf_10k)

    def test_malformed_factorization_rejected(self):
        with pytest.raises(ValueError):
            Factorization(12, ((3, 1), (2, 2)))  # primes out of order
        with pytest.raises(ValueError):
            Factorization(2, ((2, 0),))  # zero exponent


class TestFactorizeQ:
    def test_table_values(self, spf_10k):
        p7 = factorize_trial(7)
        f = factorize_q(p7, 5, spf_10k)
        assert f.value == 70
        assert f.factors == ((2, 1), (5, 1), (7, 1))
        f2 = factorize_q(p7, 2, spf_10k)
        assert f2.value == 7
        assert f2.factors == ((7, 1),)

    def test_sum_of_multiples_of_3(self, spf_10k):
        # 0 + 3 + 6 + ... + 27 = 135 = 3^3 * 5
        assert sum(3 * k for k in range(10)) == 135
        f = factorize_q(factorize_trial(3), 10, spf_10k)
        assert f.value == 135
        assert f.factors == ((3, 3), (5, 1))

    def test_rejects_n_below_2(self, spf_10k):
        with pytest.raises(ValueError):
            factorize_q(factorize_trial(7), 1, spf_10k)

    @pytest.mark.parametrize("p", [1, 2, 3, 7])
    def test_matches_direct_factorization(self, p, spf_10k, big_table):
        p_fact = factorize_trial(p)
        for n in range(2, 1001):
            composed = factorize_q(p_fact, n, spf_10k)
            direct = factorize(q_value(p, n).value, big_table)
            assert composed == direct


class TestSortedDivisors:
    def test_21(self, spf_10k):
        assert sorted_divisors(factorize(21, spf_10k)) == [1, 3, 7, 21]

    def test_identity_case(self, spf_10k):
        assert sorted_divisors(factorize(1, spf_10k)) == [1]

    def test_105(self, spf_10k):
        assert sorted_divisors(factorize(105, spf_10k)) == [1, 3, 5, 7, 15, 21, 35, 105]

    @given(st.integers(min_value=1, max_value=10_000))
    def test_matches_brute_force(self, m):
        f = factorize_trial(m)
        divs = sorted_divisors(f)
        assert divs == naive_divisors(m)
        count = 1
        for _, e in f.factors:
            count *= e + 1
        assert len(divs) == count
        assert divs[0] == 1 and divs[-1] == m


class TestQValue:
    def test_table_row(self):
        assert q_value(7, 11).value == 385

    @pytest.mark.parametrize("p", [1, 2, 7, 541])
    def test_empty_sum(self, p):
        q = q_value(p, 1)
        assert q.value == 0 and q.n == 1

    def test_large_exact(self):
        assert q_value(541, 10_000).value == 541 * 9999 * 10_000 // 2 == 27_047_295_000

    def test_overflow_is_raised_not_wrapped(self):
        with pytest.raises(OverflowError):
            q_value(2**62, 3)
        # the largest representable values still work
        assert q_value(1, 3_000_000_000).value <= MAX_SUPPORTED_VALUE

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            q_value(0, 5)
        with pytest.raises(ValueError):
            q_value(5, 0)

    @given(st.integers(min_value=1, max_value=10_000), st.integers(min_value=2, max_value=10_000))
    def test_telescoping(self, p, n):
        assert q_value(p, n).value - q_value(p, n - 1).value == p * (n - 1)


class TestIsPrime:
    def test_definitional(self):
        assert is_prime(2)
        assert not is_prime(1)
        assert not is_prime(0)

    def test_6529(self):
        assert is_prime(6529)

    def test_6529_is_the_844th_prime(self, spf_10k):
        primes = list(spf_10k.primes())
        assert primes.index(6529) + 1 == 844

    def test_1229_primes_below_10k(self):
        assert sum(1 for m in range(10_001) if is_prime(m)) == 1229

    def test_matches_trial_division(self):
        for m in range(3000):
            assert is_prime(m) == naive_is_prime(m)

    def test_large_values(self):
        assert is_prime(2**61 - 1)  # Mersenne prime
        assert not is_prime(2**61 + 1)  # divisible by 3
        assert is_prime(9_223_372_036_854_775_783)  # largest prime below 2**63
