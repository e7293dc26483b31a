"""Integer utilities: smallest-prime-factor sieve, factorization, divisor
enumeration, primality, and the q(n) = p*(n-1)*n/2 partial-sum formula.

Everything here is a pure function of its inputs; an SpfTable is immutable
after construction and safe to share across workers.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from math import isqrt

# Values (q-values, terms) are guaranteed to fit a signed 64-bit word so that
# exports and cache payloads stay portable.  Python ints never wrap, so the
# ceiling is enforced explicitly: exceeding it is a loud OverflowError.
MAX_SUPPORTED_VALUE = 2**63 - 1

# Sieve entries are 32-bit; the default ceiling keeps a table under ~200 MB.
DEFAULT_SIEVE_CEILING = 50_000_000


class CapacityError(Exception):
    """Requested sieve limit exceeds the configured memory ceiling."""


class SpfTable:
    """Smallest-prime-factor table for the integers 2..limit.

    ``table.spf[m]`` is the smallest prime factor of m (and equals m exactly
    when m is prime).  Entries 0 and 1 are unused and hold 0.
    """

    __slots__ = ("limit", "spf")

    def __init__(self, limit: int, spf: array):
        self.limit = limit
        self.spf = spf

    def smallest_factor(self, m: int) -> int:
        if not 2 <= m <= self.limit:
            raise ValueError(f"m={m} outside table range 2..{self.limit}")
        return self.spf[m]

    def is_prime(self, m: int) -> bool:
        """Sieved primality for 0 <= m <= limit."""
        if m < 2:
            return False
        return self.spf[m] == m

    def primes(self):
        """Yield the primes <= limit in ascending order."""
        spf = self.spf
        for m in range(2, self.limit + 1):
            if spf[m] == m:
                yield m


def build_spf(limit: int, *, ceiling: int = DEFAULT_SIEVE_CEILING) -> SpfTable:
    """Sieve smallest prime factors for 2..limit.

    Raises ValueError for limit < 2 and CapacityError when limit exceeds
    ``ceiling`` (memory guard, ~4 bytes per entry).
    """
    if limit < 2:
        raise ValueError(f"sieve limit must be >= 2, got {limit}")
    if limit > ceiling:
        raise CapacityError(
            f"sieve limit {limit} exceeds ceiling {ceiling}; "
            f"raise the ceiling explicitly if this is intended"
        )
    if limit > 2**31 - 1:
        raise CapacityError(f"sieve limit {limit} exceeds 32-bit entry width")
    # bytes(...) zero-fills; spf[m] == 0 marks "not yet assigned"
    spf = array("i", bytes(4 * (limit + 1)))
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i] = i
            for j in range(i * i, limit + 1, i):
                if spf[j] == 0:
                    spf[j] = i
    return SpfTable(limit, spf)


@dataclass(frozen=True, slots=True)
class Factorization:
    """Prime-power decomposition: value = prod(p**e for p, e in factors).

    ``factors`` is sorted by prime; 1 factors as the empty product.
    """

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prev = 1
        for p, e in self.factors:
            if p <= prev or e < 1:
                raise ValueError(f"malformed factorization of {self.value}: {self.factors}")
            prev = p


def factorize(m: int, table: SpfTable) -> Factorization:
    """Factor m using the sieve. Requires 1 <= m <= table.limit."""
    if m < 1:
        raise ValueError(f"cannot factorize {m}")
    if m > table.limit:
        raise ValueError(f"m={m} exceeds sieve limit {table.limit}")
    value = m
    spf = table.spf
    factors = []
    while m > 1:
        p = spf[m]
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        factors.append((p, e))
    return Factorization(value, tuple(factors))


def factorize_trial(m: int) -> Factorization:
    """Factor m by trial division (no sieve). Intended for the single
    multiplier p of a sequence, which may exceed any term-sized sieve."""
    if m < 1:
        raise ValueError(f"cannot factorize {m}")
    value = m
    factors = []
    for p in range(2, isqrt(m) + 1):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
        if m == 1:
            break
    if m > 1:
        factors.append((m, 1))
    return Factorization(value, tuple(factors))


def _merge_counts(target: dict[int, int], factors: tuple[tuple[int, int], ...]) -> None:
    for p, e in factors:
        target[p] = target.get(p, 0) + e


def factorize_q(p_fact: Factorization, n: int, table: SpfTable) -> Factorization:
    """Factorization of q(n) = p*(n-1)*n/2 composed from the factorizations
    of p, n-1 and n, dropping one factor of 2.

    q(n) itself can be far larger than any sieve; composing keeps the sieve
    sized to the term index n.  Requires n >= 2 (q(1) = 0 has no
    factorization).
    """
    if n < 2:
        raise ValueError(f"q({n}) has no factorization (need n >= 2)")
    counts: dict[int, int] = {}
    _merge_counts(counts, p_fact.factors)
    _merge_counts(counts, factorize(n - 1, table).factors)
    _merge_counts(counts, factorize(n, table).factors)
    counts[2] -= 1  # (n-1)*n is even, so the exponent of 2 is >= 1
    if counts[2] == 0:
        del counts[2]
    value = p_fact.value * (n - 1) * n // 2
    return Factorization(value, tuple(sorted(counts.items())))


def sorted_divisors(f: Factorization) -> list[int]:
    """All divisors of f.value in ascending order."""
    divisors = [1]
    for p, e in f.factors:
        powers = []
        pk = 1
        for _ in range(e):
            pk *= p
            powers.append(pk)
        divisors += [d * pk for pk in powers for d in divisors]
    divisors.sort()
    return divisors


@dataclass(frozen=True, slots=True)
class QValue:
    """q(n) = p*(n-1)*n/2, the n-th partial sum of multiples of p.

    value == 0 exactly when n == 1 (the empty sum).
    """

    p: int
    n: int
    value: int


def q_value(p: int, n: int) -> QValue:
    """Evaluate q(n) = p*(n-1)*n/2 exactly, rejecting values beyond the
    supported 63-bit range instead of growing silently."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    value = p * (n - 1) * n // 2
    if value > MAX_SUPPORTED_VALUE:
        raise OverflowError(
            f"q({n}) = {value} for p={p} exceeds the supported value range "
            f"(2**63 - 1)"
        )
    return QValue(p, n, value)


_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(m: int) -> bool:
    """Deterministic primality test.

    Miller-Rabin with the fixed witness set {2,3,...,37}, which is proven
    exact for all m < 3.3e24 -- far beyond the supported 63-bit value range.
    """
    if m < 2:
        return False
    for p in _MR_WITNESSES:
        if m % p == 0:
            return m == p
    d = m - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, m)
        if x == 1 or x == m - 1:
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True
