"""Exact rationals, truth intervals and decimal digit streams.

Truth values are :class:`fractions.Fraction` throughout. A real number in
(0, 1) is represented by a :class:`DigitStream`, a total map from the decimal
place ``i >= 1`` to its digit. The truncation helpers give the two rational
sequences that approach such a number strictly from below and from above.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]

ZERO = Fraction(0)
ONE = Fraction(1)


class DigitStreamError(ValueError):
    """Raised for malformed digit sources or queries a stream cannot answer."""


def as_rational(value: RationalLike) -> Fraction:
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a Fraction, int or string")
    return Fraction(value)


def unit_rational(value: RationalLike) -> Fraction:
    """Coerce ``value`` to a Fraction and check it lies in [0, 1]."""
    q = as_rational(value)
    if not ZERO <= q <= ONE:
        raise ValueError(f"truth value {q} is outside [0, 1]")
    return q


def pow10(n: int) -> Fraction:
    return Fraction(1, 10**n) if n >= 0 else Fraction(10**-n)


@dataclass(frozen=True)
class TruthInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not ZERO <= self.lo <= self.hi <= ONE:
            raise ValueError(f"invalid truth interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, q: Fraction) -> "TruthInterval":
        return cls(q, q)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, q: Fraction) -> bool:
        return self.lo <= q <= self.hi

    def encloses(self, other: "TruthInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other: "TruthInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


class HintKind(enum.Enum):
    NONE = "none"
    MONOTONE_UP = "up"
    MONOTONE_DOWN = "down"


def _no_width(n: int) -> Fraction:
    return ONE


@dataclass(frozen=True)
class ConvergenceHint:
    """Certified distance between an n-element truncation and the true limit.

    ``width_at(n)`` bounds how far the sup (MONOTONE_UP) or inf
    (MONOTONE_DOWN) over the first ``n`` elements can be from the sup/inf of
    the whole stream. It must be nonincreasing in ``n``.
    """

    kind: HintKind = HintKind.NONE
    width_at: Callable[[int], Fraction] = _no_width

    @classmethod
    def none(cls) -> "ConvergenceHint":
        return cls()

    @classmethod
    def decimal(cls, kind: HintKind, lag: int = 1) -> "ConvergenceHint":
        """Hint with width ``10**-(n - lag)``, capped at 1."""
        return cls(kind, lambda n: min(ONE, pow10(n - lag)))


HINT_NONE = ConvergenceHint()


class DigitStream:
    """A memoized, deterministic decimal expansion ``0.d1 d2 d3 ...``.

    ``digit_at`` is 1-indexed. Digits are produced by ``block`` which, given
    a count ``k``, returns at least the first ``k`` digits as a sequence of
    ints. Results are cached; concurrent readers are safe.
    """

    def __init__(self, name: str, block: Callable[[int], Sequence[int]],
                 irrational: bool = False, length: int | None = None):
        self.name = name
        self.irrational = irrational
        self.length = length
        self._block = block
        self._digits: list[int] = []
        self._lock = threading.Lock()
        # objects built from this stream (e.g. its truncation formula streams)
        self.derived: dict[str, object] = {}

    def __repr__(self):
        return f"DigitStream({self.name!r})"

    def _ensure(self, k: int) -> None:
        if k <= len(self._digits):
            return
        if self.length is not None and k > self.length:
            raise DigitStreamError(
                f"stream {self.name!r} has {self.length} digits; index {k} requested")
        with self._lock:
            if k <= len(self._digits):
                return
            want = max(k, 2 * len(self._digits), 16)
            if self.length is not None:
                want = min(want, self.length)
            got = list(self._block(want))
            for d in got:
                if not (isinstance(d, int) and 0 <= d <= 9):
                    raise DigitStreamError(f"stream {self.name!r} produced non-digit {d!r}")
            if len(got) < k:
                raise DigitStreamError(f"stream {self.name!r} produced too few digits")
            self._digits = got

    def digit_at(self, i: int) -> int:
        if i < 1:
            raise IndexError("digit indices start at 1")
        self._ensure(i)
        return self._digits[i - 1]

    def prefix(self, n: int) -> list[int]:
        if n <= 0:
            return []
        self._ensure(n)
        return self._digits[:n]


def truncate(d: DigitStream, n: int) -> Fraction:
    """``0.d1...dn`` as an exact fraction; 0 when ``n == 0``."""
    if n < 0:
        raise ValueError("truncation length must be nonnegative")
    if n == 0:
        return ZERO
    return Fraction(int("".join(map(str, d.prefix(n)))), 10**n)


def complement(d: DigitStream) -> DigitStream:
    """Digit-wise nines complement; represents ``1 - r`` for non-terminating ``r``."""
    def block(k: int) -> list[int]:
        return [9 - x for x in d.prefix(k)]
    return DigitStream(f"complement({d.name})", block, d.irrational, d.length)


def upper_truncate(d: DigitStream, n: int) -> Fraction:
    """``1 - truncate(complement(d), n)``, which equals ``truncate(d, n) + 10**-n``."""
    if n == 0:
        return ONE
    k = sum((9 - x) * 10 ** (n - i) for i, x in enumerate(d.prefix(n), start=1))
    return ONE - Fraction(k, 10**n)


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def sqrt_stream(radicand: RationalLike, name: str | None = None) -> DigitStream:
    """Decimal digits of ``sqrt(radicand)`` for a non-square rational in (0, 1)."""
    q = as_rational(radicand)
    if not ZERO < q < ONE:
        raise ValueError(f"radicand {q} must lie strictly between 0 and 1")
    if _is_square(q.numerator) and _is_square(q.denominator):
        raise ValueError(f"radicand {q} is the square of a rational")
    a, b = q.numerator, q.denominator

    def block(k: int) -> list[int]:
        scaled = math.isqrt(a * 10 ** (2 * k) // b)
        return [int(c) for c in str(scaled).rjust(k, "0")]

    return DigitStream(name or f"sqrt({q})", block, irrational=True)


class _PeriodicStream(DigitStream):
    # answers arbitrary indices without materializing the prefix
    def __init__(self, pattern: list[int], name: str):
        period = len(pattern)
        super().__init__(name, lambda k: [pattern[i % period] for i in range(k)])
        self.pattern = pattern

    def digit_at(self, i: int) -> int:
        if i < 1:
            raise IndexError("digit indices start at 1")
        return self.pattern[(i - 1) % len(self.pattern)]


def periodic_stream(digits: Iterable[int], name: str | None = None) -> DigitStream:
    pattern = list(digits)
    if not pattern:
        raise ValueError("periodic stream needs at least one digit")
    if any(not (isinstance(x, int) and 0 <= x <= 9) for x in pattern):
        raise ValueError(f"periodic digits must be in 0..9: {pattern}")
    return _PeriodicStream(pattern, name or "periodic(" + "".join(map(str, pattern)) + ")")


def parse_digit_text(text: str, source: str = "<digits>") -> list[int]:
    if text.endswith("\r\n"):
        text = text[:-2]
    elif text.endswith("\n"):
        text = text[:-1]
    for pos, ch in enumerate(text, start=1):
        if ch not in "0123456789":
            raise DigitStreamError(f"{source}: byte {pos} is {ch!r}, expected a decimal digit")
    if not text:
        raise DigitStreamError(f"{source}: no digits")
    return [int(c) for c in text]


def file_stream(path: str | Path, name: str | None = None,
                irrational: bool = False) -> DigitStream:
    """Stream backed by an ASCII digit file (first byte is the first decimal place)."""
    path = Path(path)
    raw = path.read_bytes()
    try:
        text = raw.decode("ascii")
    except UnicodeDecodeError as exc:
        raise DigitStreamError(f"{path}: non-ASCII byte at offset {exc.start}") from None
    digits = parse_digit_text(text, str(path))
    return DigitStream(name or path.stem, lambda k: digits, irrational, len(digits))


def decimal_string(q: Fraction, places: int = 30) -> str:
    """Truncated (not rounded) decimal rendering of a nonnegative fraction."""
    if q < 0:
        raise ValueError("only nonnegative values are rendered")
    scaled = q.numerator * 10**places // q.denominator
    whole, frac = divmod(scaled, 10**places)
    return f"{whole}.{str(frac).rjust(places, '0')}"
