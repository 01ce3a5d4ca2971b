"""Generators for partial-quotient words.

A word here is a finite prefix of an infinite sequence of positive
integers, used as the partial quotients of a continued fraction.  Four
families are provided:

- Fibonacci word on a letter pair (a, b): limit of w1 = a, w2 = ab,
  w_{k+1} = w_k w_{k-1}.
- Characteristic Sturmian word of an irrational slope in (0, 1) given by
  its continued-fraction expansion [0; a1, a2, ...], via the standard
  sequences s1 = a, s2 = a^{a1-1} b, s_{k+1} = s_k^{a_k} s_{k-1} (k >= 2).
- Periodic word: a pattern repeated cyclically.
- Explicit word: a fixed finite list.

Letter convention for Sturmian words: pair.a is the majority letter (the
one with frequency > 1/2).  When a1 = 1 the slope exceeds 1/2 and the
construction is run on the complementary slope [0; a2+1, a3, ...], which
produces the same word with pair.a still the majority letter.  The slope
[0; 1, 1, 1, ...] reproduces the Fibonacci word exactly.  Reports that
consume these words record this convention.

All generators are pure functions; outputs depend only on the arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .errors import DomainError, StreamExhausted

__all__ = [
    "LetterPair",
    "WordSpec",
    "Fibonacci",
    "Sturmian",
    "Periodic",
    "Explicit",
    "fibonacci_word",
    "sturmian_word",
    "periodic_word",
    "explicit_word",
    "word_letters",
    "word_prefix_upto",
]


def _check_positive_letters(values: Sequence[int], what: str) -> tuple[int, ...]:
    out = tuple(int(v) for v in values)
    if not out:
        raise DomainError(f"{what} must be non-empty")
    for v in out:
        if v < 1:
            raise DomainError(f"{what} entries must be positive integers, got {v}")
    return out


@dataclass(frozen=True)
class LetterPair:
    """Two distinct positive integers used as word letters."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a < 1 or self.b < 1:
            raise DomainError(f"letters must be positive, got ({self.a}, {self.b})")
        if self.a == self.b:
            raise DomainError(f"letters must be distinct, got ({self.a}, {self.b})")


class WordSpec:
    """Base marker for word specifications."""

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Fibonacci(WordSpec):
    pair: LetterPair

    def describe(self) -> str:
        return f"fib({self.pair.a},{self.pair.b})"


@dataclass(frozen=True)
class Sturmian(WordSpec):
    """Characteristic Sturmian word of slope [0; slope_terms...].

    slope_terms is a finite prefix of the slope's partial quotients
    (all >= 1).  Generation fails with StreamExhausted if the prefix is
    too short to determine the requested number of letters.
    """

    slope_terms: tuple[int, ...]
    pair: LetterPair

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "slope_terms", _check_positive_letters(self.slope_terms, "slope terms")
        )

    def describe(self) -> str:
        inner = ",".join(str(t) for t in self.slope_terms)
        return f"sturm([0;{inner}],{self.pair.a},{self.pair.b})"


@dataclass(frozen=True)
class Periodic(WordSpec):
    pattern: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pattern", _check_positive_letters(self.pattern, "pattern"))

    def describe(self) -> str:
        return "per(" + ",".join(str(t) for t in self.pattern) + ")"


@dataclass(frozen=True)
class Explicit(WordSpec):
    letters: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", _check_positive_letters(self.letters, "letters"))

    def describe(self) -> str:
        return "expl(" + ",".join(str(t) for t in self.letters) + ")"


def fibonacci_word(pair: LetterPair, n: int) -> list[int]:
    """First n letters of the Fibonacci word on (pair.a, pair.b)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    prev = [pair.a]
    cur = [pair.a, pair.b]
    if n == 1:
        return [pair.a]
    while len(cur) < n:
        cur, prev = cur + prev, cur
    return cur[:n]


def _sturmian_prefix(
    slope_terms: Sequence[int], pair: LetterPair, n: int, partial: bool
) -> list[int]:
    """Standard-sequence construction; returns up to n letters.

    With partial=False, raises StreamExhausted if slope_terms is too
    short to determine n letters.
    """
    t = list(slope_terms)
    if t[0] == 1:
        # Slope > 1/2: run on the complementary slope so pair.a stays the
        # majority letter.  [0; 1, a2, a3, ...] and [0; a2+1, a3, ...] have
        # the same characteristic word up to swapping the roles of the
        # digits, which this rewrite absorbs.
        if len(t) < 2:
            if partial:
                return [pair.a][:n]
            raise StreamExhausted("slope [0;1] needs at least one more partial quotient")
        t = [t[1] + 1] + t[2:]
    prev = [pair.a]
    cur = [pair.a] * (t[0] - 1) + [pair.b]
    i = 1
    while len(cur) < n:
        if i >= len(t):
            if partial:
                break
            raise StreamExhausted(
                f"slope prefix of {len(slope_terms)} terms determines only "
                f"{len(cur)} letters, {n} requested"
            )
        cur, prev = cur * t[i] + prev, cur
        i += 1
    return cur[:n]


def sturmian_word(slope_cf: Sequence[int], pair: LetterPair, n: int) -> list[int]:
    """First n letters of the characteristic Sturmian word of the slope.

    slope_cf lists the partial quotients a1, a2, ... of the slope
    [0; a1, a2, ...]; all must be >= 1.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    terms = _check_positive_letters(slope_cf, "slope terms")
    return _sturmian_prefix(terms, pair, n, partial=False)


def periodic_word(pattern: Sequence[int], n: int) -> list[int]:
    """The pattern repeated cyclically, truncated to n letters."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    pat = _check_positive_letters(pattern, "pattern")
    reps = -(-n // len(pat))
    return (list(pat) * reps)[:n]


def explicit_word(letters: Sequence[int], n: int) -> list[int]:
    """First n letters of a fixed finite word."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    lets = _check_positive_letters(letters, "letters")
    if len(lets) < n:
        raise StreamExhausted(f"explicit word has {len(lets)} letters, {n} requested")
    return list(lets[:n])


def word_letters(spec: WordSpec, n: int) -> list[int]:
    """Dispatch to the generator for spec; exactly n letters or an error."""
    if isinstance(spec, Fibonacci):
        return fibonacci_word(spec.pair, n)
    if isinstance(spec, Sturmian):
        return sturmian_word(spec.slope_terms, spec.pair, n)
    if isinstance(spec, Periodic):
        return periodic_word(spec.pattern, n)
    if isinstance(spec, Explicit):
        return explicit_word(spec.letters, n)
    raise DomainError(f"unknown word spec {spec!r}")


def word_prefix_upto(spec: WordSpec, n: int) -> list[int]:
    """As many of the first n letters as the word spec determines (no error)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if isinstance(spec, Sturmian):
        return _sturmian_prefix(spec.slope_terms, spec.pair, n, partial=True)
    if isinstance(spec, Explicit):
        return list(spec.letters[:n])
    return word_letters(spec, n)
