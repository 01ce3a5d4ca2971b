"""Textual specification grammar for reals, words, and conics.

Real-number specs:
    cf:[a0;a1,a2,...]        explicit finite continued fraction
    word:<word-id>           partial quotients drawn from a word generator
    sq:<spec>                square of another spec
    poly:c0,c1,...:<spec>    polynomial image (ascending rational coeffs)
    xi                       back-reference to the first number of the pair
                             (allowed only where a xi is in scope, e.g. the
                             eta position of a run: `sq:xi`)

Word ids:
    fib(a,b)                 Fibonacci word on letters a, b
    sturm([0;a1,a2,...],a,b) Sturmian word of the given slope
    per(p1,p2,...)           periodic repetition of the pattern
    expl(t1,t2,...)          the literal letters, nothing after them

Conic forms:
    conic:poly:c_xx,c_xy,c_yy,c_x,c_y,c_1
    parabola                 alias for y - x^2

All syntax problems raise ParseError; semantic violations (zero letters,
equal letters, empty patterns) surface as DomainError from the
constructors, which the CLI maps to the same exit code.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .errors import ParseError
from .exact_reals import (
    ContinuedFraction,
    ExplicitStream,
    Expression,
    RealSpec,
    Square,
    WordStream,
)
from .geometry import ConicForm, conic_from_poly, parabola_form
from .words import Explicit, Fibonacci, LetterPair, Periodic, Sturmian, WordSpec

__all__ = [
    "parse_rational",
    "parse_real_spec",
    "parse_word_id",
    "parse_conic",
]


def parse_rational(text: str) -> Fraction:
    """Parse `p/q`, an integer, or a decimal literal into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {text!r}") from exc


def _parse_int(text: str, what: str) -> int:
    try:
        return int(text.strip())
    except ValueError as exc:
        raise ParseError(f"{what} must be an integer, got {text!r}") from exc


def _parse_bracketed_cf(text: str, what: str) -> list[int]:
    """`[a0;a1,a2,...]` -> [a0, a1, a2, ...]; the semicolon is mandatory
    unless the bracket holds a single term."""
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError(f"{what} must be bracketed like [a0;a1,...], got {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        raise ParseError(f"{what} is empty")
    if ";" in inner:
        head, _, tail = inner.partition(";")
        terms = [_parse_int(head, f"{what} a0")]
        tail = tail.strip()
        if tail:
            terms.extend(_parse_int(t, f"{what} term") for t in tail.split(","))
    else:
        terms = [_parse_int(inner, f"{what} a0")]
    return terms


def _split_call(text: str, name: str) -> list[str]:
    """`name(arg1,arg2,...)` -> top-level comma-separated argument list."""
    body = text[len(name) + 1 : -1]
    args: list[str] = []
    depth = 0
    cur = []
    for ch in body:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            args.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    args.append("".join(cur))
    return [a.strip() for a in args]


def parse_word_id(text: str) -> WordSpec:
    """Parse a word-id: fib(a,b), sturm([0;...],a,b), per(...), expl(...)."""
    text = text.strip()
    for name in ("fib", "sturm", "per", "expl"):
        if text.startswith(name + "(") and text.endswith(")"):
            args = _split_call(text, name)
            break
    else:
        raise ParseError(f"unknown word-id: {text!r}")
    if name == "fib":
        if len(args) != 2:
            raise ParseError(f"fib takes two letters, got {len(args)}")
        a = _parse_int(args[0], "letter")
        b = _parse_int(args[1], "letter")
        return Fibonacci(LetterPair(a, b))
    if name == "sturm":
        if len(args) != 3:
            raise ParseError(f"sturm takes a slope and two letters, got {len(args)}")
        terms = _parse_bracketed_cf(args[0], "slope")
        if terms[0] != 0:
            raise ParseError(f"Sturmian slope must start [0;...], got a0={terms[0]}")
        if len(terms) < 2:
            raise ParseError("Sturmian slope needs at least one partial quotient after 0")
        a = _parse_int(args[1], "letter")
        b = _parse_int(args[2], "letter")
        return Sturmian(tuple(terms[1:]), LetterPair(a, b))
    values = tuple(_parse_int(t, "letter") for t in args)
    if name == "per":
        return Periodic(values)
    return Explicit(values)


def parse_real_spec(text: str, xi: Optional[RealSpec] = None) -> RealSpec:
    """Parse a real-number spec; `xi` supplies the back-reference target."""
    text = text.strip()
    if text == "xi":
        if xi is None:
            raise ParseError("`xi` reference is not allowed in this position")
        return xi
    if text.startswith("cf:"):
        terms = _parse_bracketed_cf(text[3:], "continued fraction")
        return ContinuedFraction(ExplicitStream(tuple(terms)))
    if text.startswith("word:"):
        return ContinuedFraction(WordStream(parse_word_id(text[5:])))
    if text.startswith("sq:"):
        return Square(parse_real_spec(text[3:], xi))
    if text.startswith("poly:"):
        rest = text[5:]
        coeff_part, sep, spec_part = rest.partition(":")
        if not sep:
            raise ParseError("poly spec needs a trailing :<spec> after the coefficients")
        coeffs = tuple(parse_rational(c) for c in coeff_part.split(","))
        return Expression(coeffs, parse_real_spec(spec_part, xi))
    raise ParseError(f"unknown real spec: {text!r}")


def parse_conic(text: str) -> ConicForm:
    """Parse `parabola` or `conic:poly:<six lex-ordered coefficients>`."""
    text = text.strip()
    if text == "parabola":
        return parabola_form()
    if text.startswith("conic:poly:"):
        parts = text[len("conic:poly:") :].split(",")
        if len(parts) != 6:
            raise ParseError(f"conic needs exactly 6 coefficients, got {len(parts)}")
        coeffs = tuple(parse_rational(c) for c in parts)
        return conic_from_poly(coeffs)
    raise ParseError(f"unknown conic spec: {text!r}")
