"""Exact rational scalars and small dense vector/matrix helpers.

The rational type ``Rat`` is ``gmpy2.mpq`` when gmpy2 is importable and
``fractions.Fraction`` otherwise.  Both keep numerator/denominator in lowest
terms with a positive denominator, compare exactly, and hash consistently
with each other, so the choice never changes results -- only speed.

Vectors are plain tuples, matrices are lists of lists.  Everything here is
deterministic and allocation-light; it is the arithmetic bedrock for the
exact simplex and the lattice geometry built on top of it.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Union

try:  # pragma: no cover - exercised implicitly by every test run
    from gmpy2 import mpq as _mpq

    Rat = _mpq
except ImportError:  # pragma: no cover
    from fractions import Fraction as Rat  # type: ignore[assignment]

RatLike = Union[int, str, "Rat"]

ZERO = Rat(0)
ONE = Rat(1)


def rat(num: RatLike, den: int | None = None) -> "Rat":
    """Build an exact rational from an int, a ``p/q`` string, or a pair."""
    if den is None:
        return Rat(num)
    return Rat(num, den)


def parse_rat(text: str) -> "Rat":
    """Parse ``p`` or ``p/q`` (ASCII, optional sign).  Raises ValueError."""
    text = text.strip()
    if "/" in text:
        num_s, den_s = text.split("/", 1)
        num, den = int(num_s), int(den_s)
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Rat(num, den)
    return Rat(int(text))


def format_rat(value) -> str:
    """Canonical text form: ``p`` when integral, else ``p/q`` in lowest terms."""
    value = Rat(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def is_integral(value) -> bool:
    return Rat(value).denominator == 1


def as_int(value) -> int:
    """Exact conversion to int; raises InputError-grade ValueError if not integral."""
    value = Rat(value)
    if value.denominator != 1:
        raise ValueError(f"{format_rat(value)} is not an integer")
    return int(value.numerator)


def rat_floor(value) -> int:
    value = Rat(value)
    return value.numerator // value.denominator


def rat_ceil(value) -> int:
    value = Rat(value)
    return -((-value.numerator) // value.denominator)


def ratvec(values: Iterable[RatLike]) -> tuple:
    return tuple(Rat(v) for v in values)


def dot(a: Sequence, b: Sequence):
    """Exact inner product.  Lengths must match."""
    if len(a) != len(b):
        raise ValueError(f"dot: length mismatch {len(a)} vs {len(b)}")
    total = ZERO
    for x, y in zip(a, b):
        total += x * y
    return total


def vec_add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)


def int_dot(a: Sequence[int], b: Sequence[int]) -> int:
    """Inner product on machine/big ints (fast path for integer data)."""
    return sum(x * y for x, y in zip(a, b))
