"""trifix: greedy smallest-unused-divisor sequences over multiples of
triangular numbers, with prime detection via fixed points."""

__version__ = "0.1.0"

from .engine import (
    NO_ZERO,
    SHIFTED,
    STANDARD,
    SequenceRun,
    SequenceSpec,
    TermRecord,
    fixed_points,
    generate,
)
from .numtheory import (
    Factorization,
    QValue,
    SpfTable,
    build_spf,
    factorize,
    factorize_q,
    is_prime,
    q_value,
    sorted_divisors,
)

__all__ = [
    "NO_ZERO",
    "SHIFTED",
    "STANDARD",
    "Factorization",
    "QValue",
    "SequenceRun",
    "SequenceSpec",
    "SpfTable",
    "TermRecord",
    "build_spf",
    "factorize",
    "factorize_q",
    "fixed_points",
    "generate",
    "is_prime",
    "q_value",
    "sorted_divisors",
]
