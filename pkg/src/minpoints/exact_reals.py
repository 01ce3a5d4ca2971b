"""Certified arithmetic on reals defined by continued fractions.

A real number is described by a RealSpec: a continued fraction given by a
stream of partial quotients, the square of another spec, or a polynomial
image of another spec with rational coefficients.  Evaluation produces an
Enclosure: a closed rational interval [lo, hi] guaranteed to contain the
value, tagged with the number of partial quotients consumed.  Refining an
enclosure consumes two more quotients and never widens the interval.

Decisions (integer rounding, comparisons) are made only when the interval
certifies them; otherwise they report Undecided and the caller refines.
The rounding convention is fixed once for the whole package: the nearest
integer of a value v is the unique n with v in (n - 1/2, n + 1/2], i.e.
exact half-integers round down.

Values with purely periodic or finite quotient streams are quadratic or
rational and admit exact arithmetic; exact_value() recovers them as
QuadSurd instances so that downstream code can resolve comparisons that
no finite amount of interval refinement could (exact ties).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import DomainError, StreamExhausted
from .words import Periodic, WordSpec, word_prefix_upto

__all__ = [
    "REFINE_STEP",
    "DEFAULT_MAX_DEPTH",
    "QuotientStream",
    "ExplicitStream",
    "PeriodicStream",
    "WordStream",
    "RealSpec",
    "ContinuedFraction",
    "Square",
    "Expression",
    "Enclosure",
    "Comparison",
    "UNDECIDED",
    "convergents",
    "enclose",
    "refine",
    "nearest_integer",
    "compare",
    "QuadSurd",
    "periodic_cf_value",
    "exact_value",
]

REFINE_STEP = 2
DEFAULT_MAX_DEPTH = 512


# ---------------------------------------------------------------------------
# Partial-quotient streams


def _check_quotients(terms: Sequence[int]) -> tuple[int, ...]:
    out = tuple(int(t) for t in terms)
    for j, t in enumerate(out):
        if j >= 1 and t < 1:
            raise DomainError(f"partial quotient a_{j} must be positive, got {t}")
    return out


class QuotientStream:
    """A source of continued-fraction partial quotients a_0, a_1, ...

    Quotients from index 1 on must be positive; a_0 may be any integer.
    Streams are immutable and safe to share across threads.
    """

    def take_upto(self, n: int) -> tuple[int, ...]:
        """Up to n leading terms (fewer only if the stream is shorter)."""
        raise NotImplementedError

    def take(self, n: int) -> tuple[int, ...]:
        """Exactly n leading terms, or StreamExhausted."""
        out = self.take_upto(n)
        if len(out) < n:
            raise StreamExhausted(f"stream has {len(out)} terms, {n} requested")
        return out

    def length(self) -> Optional[int]:
        """Number of terms if finite, None if unbounded."""
        return None

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class ExplicitStream(QuotientStream):
    terms: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.terms:
            raise DomainError("continued fraction needs at least one partial quotient")
        object.__setattr__(self, "terms", _check_quotients(self.terms))

    def take_upto(self, n: int) -> tuple[int, ...]:
        return self.terms[:n]

    def length(self) -> Optional[int]:
        return len(self.terms)

    def describe(self) -> str:
        head = str(self.terms[0])
        tail = ",".join(str(t) for t in self.terms[1:])
        return f"cf:[{head};{tail}]" if tail else f"cf:[{head}]"


@dataclass(frozen=True)
class PeriodicStream(QuotientStream):
    """Purely periodic quotients: the pattern repeats from index 0 on.

    All entries must be positive so the pattern is valid at every phase.
    """

    pattern: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.pattern:
            raise DomainError("periodic pattern must be non-empty")
        pat = tuple(int(t) for t in self.pattern)
        for t in pat:
            if t < 1:
                raise DomainError(f"periodic pattern entries must be positive, got {t}")
        object.__setattr__(self, "pattern", pat)

    def take_upto(self, n: int) -> tuple[int, ...]:
        reps = -(-n // len(self.pattern))
        return (self.pattern * reps)[:n]

    def describe(self) -> str:
        return "cfper:" + ",".join(str(t) for t in self.pattern)


@dataclass(frozen=True)
class WordStream(QuotientStream):
    """Quotients drawn from a word generator (Fibonacci, Sturmian, ...)."""

    word: WordSpec

    def take_upto(self, n: int) -> tuple[int, ...]:
        return tuple(word_prefix_upto(self.word, n))

    def length(self) -> Optional[int]:
        if hasattr(self.word, "letters"):
            return len(self.word.letters)  # type: ignore[attr-defined]
        return None

    def describe(self) -> str:
        return "word:" + self.word.describe()


# ---------------------------------------------------------------------------
# Real-number specs


class RealSpec:
    """Base marker for real-number specifications."""

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class ContinuedFraction(RealSpec):
    stream: QuotientStream

    def describe(self) -> str:
        return self.stream.describe()


@dataclass(frozen=True)
class Square(RealSpec):
    operand: RealSpec

    def describe(self) -> str:
        return f"sq:{self.operand.describe()}"


@dataclass(frozen=True)
class Expression(RealSpec):
    """Polynomial image coeffs[0] + coeffs[1]*x + ... of the operand."""

    coeffs: tuple[Fraction, ...]
    operand: RealSpec

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise DomainError("polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    def describe(self) -> str:
        cs = ",".join(str(c) for c in self.coeffs)
        return f"poly:{cs}:{self.operand.describe()}"


# ---------------------------------------------------------------------------
# Enclosures


@dataclass(frozen=True)
class Enclosure:
    """Closed rational interval [lo, hi] containing the represented real.

    depth records how many partial quotients of the underlying stream were
    consumed to produce it.  For exactly-known values (finite or periodic
    streams) depth is the number of quotients that pin the value down.
    """

    lo: Fraction
    hi: Fraction
    depth: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise DomainError(f"enclosure bounds out of order: {self.lo} > {self.hi}")
        if self.depth < 0:
            raise DomainError(f"depth must be non-negative, got {self.depth}")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi


class Comparison(Enum):
    LESS = "less"
    GREATER = "greater"
    UNDECIDED = "undecided"
    EQUAL_EXACT = "equal-exact"


class _UndecidedType:
    """Singleton returned by nearest_integer when the interval spans a
    half-integer boundary."""

    _instance: Optional["_UndecidedType"] = None

    def __new__(cls) -> "_UndecidedType":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNDECIDED"


UNDECIDED = _UndecidedType()


# ---------------------------------------------------------------------------
# Core operations


def _convergent_pairs(terms: Sequence[int]) -> list[tuple[int, int]]:
    """(p_j, q_j) for the given quotients via the standard recurrence."""
    pm1, pm2 = 1, 0
    qm1, qm2 = 0, 1
    out = []
    for a in terms:
        p = a * pm1 + pm2
        q = a * qm1 + qm2
        out.append((p, q))
        pm2, pm1 = pm1, p
        qm2, qm1 = qm1, q
    return out


def convergents(cf: QuotientStream, k: int) -> list[Fraction]:
    """First k convergents p_j/q_j of the stream.

    Raises StreamExhausted if the stream has fewer than k terms.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    terms = cf.take(k)
    return [Fraction(p, q) for p, q in _convergent_pairs(terms)]


def _pow_interval(lo: Fraction, hi: Fraction, k: int) -> tuple[Fraction, Fraction]:
    """Exact image of [lo, hi] under x^k."""
    if k == 0:
        return Fraction(1), Fraction(1)
    if lo >= 0:
        return lo**k, hi**k
    if hi <= 0:
        if k % 2 == 0:
            return hi**k, lo**k
        return lo**k, hi**k
    if k % 2 == 0:
        return Fraction(0), max(lo**k, hi**k)
    return lo**k, hi**k


def _poly_interval(
    coeffs: Sequence[Fraction], lo: Fraction, hi: Fraction
) -> tuple[Fraction, Fraction]:
    """Sound (and inclusion-monotone) interval image of a polynomial."""
    acc_lo = Fraction(0)
    acc_hi = Fraction(0)
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        plo, phi = _pow_interval(lo, hi, k)
        if c > 0:
            acc_lo += c * plo
            acc_hi += c * phi
        else:
            acc_lo += c * phi
            acc_hi += c * plo
    return acc_lo, acc_hi


def enclose(spec: RealSpec, depth: int) -> Enclosure:
    """Certified enclosure consuming up to `depth` partial quotients.

    For a ContinuedFraction the interval is spanned by the convergents at
    depth-1 and depth (consecutive convergents straddle the limit), so
    depth >= 2 is required.  If the stream is shorter than depth, the
    value is rational and the enclosure is exact with the consumed depth.
    Square and Expression apply exact interval arithmetic to the operand.
    """
    if isinstance(spec, ContinuedFraction):
        if depth < 2:
            raise DomainError(f"depth must be >= 2 for continued fractions, got {depth}")
        terms = spec.stream.take_upto(depth)
        if not terms:
            raise StreamExhausted("stream produced no terms")
        pairs = _convergent_pairs(terms)
        if len(terms) < depth:
            value = Fraction(*pairs[-1])
            return Enclosure(value, value, len(terms))
        c1 = Fraction(*pairs[-2])
        c2 = Fraction(*pairs[-1])
        return Enclosure(min(c1, c2), max(c1, c2), depth)
    if isinstance(spec, Square):
        inner = enclose(spec.operand, depth)
        lo, hi = _pow_interval(inner.lo, inner.hi, 2)
        return Enclosure(lo, hi, inner.depth)
    if isinstance(spec, Expression):
        inner = enclose(spec.operand, depth)
        lo, hi = _poly_interval(spec.coeffs, inner.lo, inner.hi)
        return Enclosure(lo, hi, inner.depth)
    raise DomainError(f"unknown real spec {spec!r}")


def refine(spec: RealSpec, enc: Enclosure) -> Enclosure:
    """Enclosure at depth + REFINE_STEP; nested inside enc.

    An exact enclosure (fully consumed rational stream) is returned
    unchanged: it cannot be improved and callers must treat it as exact.
    """
    if enc.is_exact:
        return enc
    return enclose(spec, enc.depth + REFINE_STEP)


def _round_half_down(x: Fraction) -> int:
    """The unique n with x in (n - 1/2, n + 1/2], i.e. ceil(x - 1/2)."""
    num, den = x.numerator, x.denominator
    return -((den - 2 * num) // (2 * den))


def nearest_integer(enc: Enclosure) -> Union[int, _UndecidedType]:
    """The integer n with the whole interval inside (n - 1/2, n + 1/2].

    Returns UNDECIDED when the interval spans a half-integer boundary.
    """
    n_lo = _round_half_down(enc.lo)
    n_hi = _round_half_down(enc.hi)
    if n_lo == n_hi:
        return n_lo
    return UNDECIDED


def compare(a: Enclosure, b: Enclosure) -> Comparison:
    """Certified comparison; intervals touching at endpoints stay Undecided."""
    if a.is_exact and b.is_exact and a.lo == b.lo:
        return Comparison.EQUAL_EXACT
    if a.hi < b.lo:
        return Comparison.LESS
    if a.lo > b.hi:
        return Comparison.GREATER
    return Comparison.UNDECIDED


# ---------------------------------------------------------------------------
# Exact quadratic arithmetic

def _sign_int(a: int, b: int, d: int) -> int:
    """Sign of a + b*sqrt(d) for integers a, b and non-square d >= 0."""
    if b == 0 or d == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    lhs = a * a
    rhs = b * b * d
    if a > 0:
        # a > 0 > b: sign of a^2 - b^2 d
        return (lhs > rhs) - (lhs < rhs)
    # b > 0 > a: sign of b^2 d - a^2
    return (rhs > lhs) - (rhs < lhs)


def _floor_surd(a: int, b: int, d: int, r: int) -> int:
    """floor((a + b*sqrt(d)) / r) for integers with r > 0, d non-square."""
    if b == 0 or d == 0:
        return a // r
    s = math.isqrt(b * b * d)
    # b*sqrt(d) lies in [s, s+1) for b > 0 and in (-s-1, -s] for b < 0.
    n = (a + (s if b > 0 else -s)) // r
    while _sign_int(a - r * (n + 1), b, d) >= 0:
        n += 1
    while _sign_int(a - r * n, b, d) < 0:
        n -= 1
    return n


@dataclass(frozen=True)
class QuadSurd:
    """Exact value a + b*sqrt(d) with rational a, b and integer d >= 0.

    Normal form: b == 0 implies d == 0; square factors of d with a prime
    below 10^4, and perfect-square d, are folded out, so values of one
    small quadratic field share a radicand.  With d non-square,
    a + b*sqrt(d) = 0 iff a = b = 0, so signs (hence comparisons and
    rounding) are exactly decidable.  Arithmetic stays inside one
    quadratic field: mixing two different irrational d values is
    rejected.
    """

    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self) -> None:
        a = Fraction(self.a)
        b = Fraction(self.b)
        d = int(self.d)
        if d < 0:
            raise DomainError(f"square root argument must be >= 0, got {d}")
        if b != 0 and d > 0:
            f = 2
            while f <= 10000 and f * f <= d:
                ff = f * f
                while d % ff == 0:
                    d //= ff
                    b *= f
                f += 1 if f == 2 else 2
            root = math.isqrt(d)
            if root * root == d:
                a += b * root
                b = Fraction(0)
                d = 0
        if b == 0:
            d = 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    @classmethod
    def from_rational(cls, value: Union[int, Fraction]) -> "QuadSurd":
        return cls(Fraction(value), Fraction(0), 0)

    def _coerce(self, other: Union["QuadSurd", int, Fraction]) -> "QuadSurd":
        if isinstance(other, QuadSurd):
            return other
        return QuadSurd.from_rational(other)

    def _common_d(self, other: "QuadSurd") -> int:
        if self.d == 0:
            return other.d
        if other.d == 0 or other.d == self.d:
            return self.d
        raise DomainError(f"incompatible radicands {self.d} and {other.d}")

    def __add__(self, other: Union["QuadSurd", int, Fraction]) -> "QuadSurd":
        o = self._coerce(other)
        d = self._common_d(o)
        return QuadSurd(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __neg__(self) -> "QuadSurd":
        return QuadSurd(-self.a, -self.b, self.d)

    def __sub__(self, other: Union["QuadSurd", int, Fraction]) -> "QuadSurd":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Union[int, Fraction]) -> "QuadSurd":
        return self._coerce(other) - self

    def __mul__(self, other: Union["QuadSurd", int, Fraction]) -> "QuadSurd":
        o = self._coerce(other)
        d = self._common_d(o)
        return QuadSurd(
            self.a * o.a + self.b * o.b * d,
            self.a * o.b + self.b * o.a,
            d,
        )

    __rmul__ = __mul__

    def sign(self) -> int:
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        # Clear denominators; positive scaling preserves the sign.
        ai = self.a.numerator * self.b.denominator
        bi = self.b.numerator * self.a.denominator
        return _sign_int(ai, bi, self.d)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __floor__(self) -> int:
        den = self.a.denominator * self.b.denominator
        ai = self.a.numerator * self.b.denominator
        bi = self.b.numerator * self.a.denominator
        return _floor_surd(ai, bi, self.d, den)

    def floor(self) -> int:
        return self.__floor__()

    def round_half_down(self) -> int:
        """The unique n with value in (n - 1/2, n + 1/2]."""
        # ceil(v - 1/2) = -floor(1/2 - v)
        half_minus = QuadSurd(Fraction(1, 2) - self.a, -self.b, self.d)
        return -half_minus.floor()

    def dyadic_enclosure(self, bits: int) -> tuple[Fraction, Fraction]:
        """[floor(v 2^bits), ceil(v 2^bits)] / 2^bits, exact if v is dyadic."""
        scale = 1 << bits
        scaled = self * scale
        f = scaled.floor()
        lo = Fraction(f, scale)
        if (scaled - f).is_zero():
            return lo, lo
        return lo, Fraction(f + 1, scale)

    def to_float(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)


def _poly_surd(coeffs: Sequence[Fraction], x: QuadSurd) -> QuadSurd:
    acc = QuadSurd.from_rational(0)
    for c in reversed(coeffs):
        acc = acc * x + Fraction(c)
    return acc


def periodic_cf_value(pattern: Sequence[int]) -> QuadSurd:
    """Exact value of the purely periodic continued fraction [p1; p2, ...].

    With p, q the convergent numerators/denominators over one period, the
    value x satisfies q_{n-1} x^2 + (q_{n-2} - p_{n-1}) x - p_{n-2} = 0 and
    is its positive root.
    """
    pat = tuple(int(t) for t in pattern)
    if not pat or any(t < 1 for t in pat):
        raise DomainError("periodic pattern must be non-empty positive integers")
    pm1, pm2 = 1, 0
    qm1, qm2 = 0, 1
    for a in pat:
        pm2, pm1 = pm1, a * pm1 + pm2
        qm2, qm1 = qm1, a * qm1 + qm2
    disc = (qm2 - pm1) ** 2 + 4 * qm1 * pm2
    return QuadSurd(Fraction(pm1 - qm2, 2 * qm1), Fraction(1, 2 * qm1), disc)


def exact_value(spec: RealSpec) -> Optional[Union[Fraction, QuadSurd]]:
    """Exact value of a real spec when its streams make it rational/quadratic.

    Returns a Fraction for finite streams, a QuadSurd for purely periodic
    ones (including periodic word streams), and None when the value is not
    exactly representable here (aperiodic words).
    """
    if isinstance(spec, ContinuedFraction):
        st = spec.stream
        if isinstance(st, PeriodicStream):
            return periodic_cf_value(st.pattern)
        if isinstance(st, WordStream) and isinstance(st.word, Periodic):
            return periodic_cf_value(st.word.pattern)
        n = st.length()
        if n is not None:
            pairs = _convergent_pairs(st.take(n))
            return Fraction(*pairs[-1])
        return None
    if isinstance(spec, Square):
        inner = exact_value(spec.operand)
        if inner is None:
            return None
        if isinstance(inner, Fraction):
            return inner * inner
        return inner * inner
    if isinstance(spec, Expression):
        inner = exact_value(spec.operand)
        if inner is None:
            return None
        if isinstance(inner, Fraction):
            acc = Fraction(0)
            for c in reversed(spec.coeffs):
                acc = acc * inner + c
            return acc
        return _poly_surd(spec.coeffs, inner)
    raise DomainError(f"unknown real spec {spec!r}")


def exact_depth(spec: RealSpec) -> int:
    """Quotients consumed to pin down an exactly-known spec's value."""
    if isinstance(spec, ContinuedFraction):
        st = spec.stream
        if isinstance(st, PeriodicStream):
            return len(st.pattern)
        if isinstance(st, WordStream) and isinstance(st.word, Periodic):
            return len(st.word.pattern)
        n = st.length()
        if n is None:
            raise DomainError("spec is not exactly known")
        return n
    if isinstance(spec, (Square, Expression)):
        return exact_depth(spec.operand)
    raise DomainError(f"unknown real spec {spec!r}")
