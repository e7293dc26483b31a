"""Sequence generator: a(1) = 1 and a(n) is the smallest positive integer
not yet in the sequence that divides q(n).

Three variants share the machinery:

* ``standard`` p: q(n) = p*(n-1)*n/2 (partial sums of multiples of p).
* ``shifted``:    q(n) = (n-1)*n/2, i.e. standard with p = 1.  Its n = 2
  step (q = 1, sole divisor 1 already used) emits a sanctioned duplicate
  a(2) = 1, flagged as the bootstrap.
* ``no-zero``:    q(n) = n*(n+1)/2 (triangular numbers starting at 1).

A term index n with a(n) = n is a fixed point; fixed points of these
sequences are the prime-candidate signal downstream analysis classifies.
"""

from __future__ import annotations

from dataclasses import dataclass

from .numtheory import (
    Factorization,
    SpfTable,
    build_spf,
    factorize_q,
    factorize_trial,
    q_value,
    sorted_divisors,
)

STANDARD = "standard"
NO_ZERO = "no-zero"
SHIFTED = "shifted"
VARIANTS = (STANDARD, NO_ZERO, SHIFTED)


class ExhaustedDivisorsError(Exception):
    """Every divisor of q(n) was already used outside the sanctioned
    bootstrap position -- an internal invariant violation, not a user error."""


@dataclass(frozen=True, slots=True)
class SequenceSpec:
    """Which sequence to generate and how many terms.

    ``p`` is required for the standard variant (p >= 1) and must be omitted
    for the others.  standard p=1 and the shifted variant denote the same
    sequence.
    """

    variant: str
    term_count: int
    p: int | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        if self.term_count < 1:
            raise ValueError(f"term_count must be >= 1, got {self.term_count}")
        if self.variant == STANDARD:
            if self.p is None or self.p < 1:
                raise ValueError(f"standard variant requires p >= 1, got {self.p}")
        elif self.p is not None:
            raise ValueError(f"variant {self.variant!r} does not take p")

    @classmethod
    def standard(cls, p: int, term_count: int) -> "SequenceSpec":
        return cls(STANDARD, term_count, p)

    @classmethod
    def no_zero(cls, term_count: int) -> "SequenceSpec":
        return cls(NO_ZERO, term_count)

    @classmethod
    def shifted(cls, term_count: int) -> "SequenceSpec":
        return cls(SHIFTED, term_count)

    def label(self) -> str:
        if self.variant == STANDARD:
            return f"A({self.p})"
        return self.variant

    @property
    def has_bootstrap(self) -> bool:
        """True when n=2 legitimately re-emits 1 (q(2) = 1, divisor exhausted)."""
        return self.variant == SHIFTED or (self.variant == STANDARD and self.p == 1)


@dataclass(frozen=True, slots=True)
class TermRecord:
    """One emitted term.

    ``is_near_match`` marks a(n) = n - 1, i.e. this term realizes
    "value n-1 appears one position late"; primality of n-1 is judged by
    the analysis layer, not here.
    """

    n: int
    q: int
    a: int
    is_fixed_point: bool
    is_near_match: bool
    is_bootstrap_duplicate: bool


@dataclass(frozen=True, slots=True)
class SequenceRun:
    """A materialized run: terms 1..N plus the used-value set."""

    spec: SequenceSpec
    terms: tuple[TermRecord, ...]
    used: frozenset[int]

    def term(self, n: int) -> TermRecord:
        if not 1 <= n <= len(self.terms):
            raise IndexError(f"term index {n} outside 1..{len(self.terms)}")
        return self.terms[n - 1]

    def a_values(self) -> list[int]:
        return [t.a for t in self.terms]

    def q_values(self) -> list[int]:
        return [t.q for t in self.terms]


class SequenceEngine:
    """Strictly sequential term emitter (each term depends on the full
    used-set history).  Distinct engines are independent."""

    def __init__(self, spec: SequenceSpec):
        self.spec = spec
        # no-zero reads T(n) = q(n+1) at p=1, so its sieve covers term_count+1
        sieve_limit = spec.term_count + (1 if spec.variant == NO_ZERO else 0)
        self.table: SpfTable = build_spf(max(sieve_limit, 2))
        p = spec.p if spec.variant == STANDARD else 1
        self._p = p
        self._p_fact: Factorization = factorize_trial(p)
        self._used: set[int] = set()
        self._terms: list[TermRecord] = []

    @property
    def emitted(self) -> int:
        return len(self._terms)

    def _q(self, n: int) -> int:
        if self.spec.variant == NO_ZERO:
            return q_value(1, n + 1).value
        return q_value(self._p, n).value

    def _q_factorization(self, n: int) -> Factorization:
        if self.spec.variant == NO_ZERO:
            return factorize_q(self._p_fact, n + 1, self.table)
        return factorize_q(self._p_fact, n, self.table)

    def next_term(self) -> TermRecord:
        if len(self._terms) >= self.spec.term_count:
            raise IndexError(f"all {self.spec.term_count} terms already emitted")
        n = len(self._terms) + 1
        q = self._q(n)

        bootstrap = False
        if q == 0:
            # n = 1 for standard/shifted: every integer divides 0; a(1) = 1
            # by definition, so divisors of 0 are never enumerated.
            a = 1
        else:
            a = 0
            for d in sorted_divisors(self._q_factorization(n)):
                if d not in self._used:
                    a = d
                    break
            if a == 0:
                if n == 2 and self.spec.has_bootstrap:
                    a = 1
                    bootstrap = True
                else:
                    raise ExhaustedDivisorsError(
                        f"{self.spec.label()}: all divisors of q({n}) = {q} in use"
                    )

        self._used.add(a)
        record = TermRecord(
            n=n,
            q=q,
            a=a,
            is_fixed_point=(a == n),
            is_near_match=(a == n - 1),
            is_bootstrap_duplicate=bootstrap,
        )
        self._terms.append(record)
        return record

    def run(self) -> SequenceRun:
        while len(self._terms) < self.spec.term_count:
            self.next_term()
        return SequenceRun(self.spec, tuple(self._terms), frozenset(self._used))


def generate(spec: SequenceSpec) -> SequenceRun:
    """Generate the full run for ``spec``.  Deterministic: identical specs
    yield identical runs."""
    return SequenceEngine(spec).run()


def fixed_points(run: SequenceRun) -> list[int]:
    """Indices n with a(n) = n, ascending."""
    return [t.n for t in run.terms if t.is_fixed_point]
