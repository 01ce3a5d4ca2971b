"""Certified minimal-point sequences for a pair (xi, eta).

For x = (x0, x1, x2) in Z^3 with x0 >= 1, let

    delta(x) = max(|x0*xi - x1|, |x0*eta - x2|)

with x1, x2 the nearest integers (half-integers round down).  Sweeping
x0 = 1, 2, ..., X_max and recording every abscissa whose delta is
certified strictly smaller than the running minimum yields the minimal
points x_i, their abscissas X_i (the discontinuities of the step function
Delta(X), together with X_1 = 1), and enclosures of Delta_i = delta(x_i).
Recorded points are automatically primitive: a point with content g > 1
is beaten by its quotient at the earlier abscissa x0/g.

Two backends share this contract:

- Exact backend, used when both xi and eta are exactly known rationals or
  quadratic irrationals over one square root (finite or purely periodic
  quotient streams).  Every rounding and comparison decision is an exact
  integer sign test in Q(sqrt(D)).  Exact delta ties, which do occur for
  such inputs and which no amount of interval refinement could resolve,
  fall to the fixed rule: the earlier abscissa keeps the record.
- Interval backend, used otherwise.  Decisions are made on certified
  rational enclosures, refined two partial quotients at a time up to
  max_depth; an undecidable comparison raises PrecisionExhausted naming
  the offending abscissa rather than guessing.

Determinism: the sweep is split into fixed-size chunks (independent of
the thread count); chunk-local record candidates are merged sequentially
in abscissa order; and exported enclosures are recomputed afterwards on a
canonical refinement schedule that does not depend on how the sweep got
there.  Output bytes are therefore identical for any thread count.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import (
    BadLambda,
    DomainError,
    HorizonExceeded,
    InsufficientData,
    ParseError,
    PrecisionExhausted,
)
from .exact_reals import (
    DEFAULT_MAX_DEPTH,
    REFINE_STEP,
    Enclosure,
    QuadSurd,
    RealSpec,
    _sign_int,
    enclose,
    exact_depth,
    exact_value,
)

__all__ = [
    "CHUNK_SIZE",
    "MinimalPoint",
    "DeltaFunction",
    "best_approx_at",
    "minimal_point_sequence",
    "delta_at",
    "find_i0",
    "format_csv",
    "parse_csv",
    "format_json",
    "parse_json",
]

CHUNK_SIZE = 1 << 16

# Exported enclosures are tightened to relative width <= 2^-REL_BITS.
REL_BITS = 32


@dataclass(frozen=True)
class MinimalPoint:
    """One recorded minimal point: index i, vector, X_i = vec[0], Delta_i."""

    index: int
    vec: tuple[int, int, int]
    X: int
    delta: Enclosure


@dataclass(frozen=True)
class DeltaFunction:
    """The step function Delta(X) on [1, horizon]: Delta(X) = Delta_i for
    X in [X_i, X_{i+1})."""

    points: tuple[MinimalPoint, ...]
    horizon: int

    def __post_init__(self) -> None:
        pts = tuple(self.points)
        if not pts:
            raise DomainError("DeltaFunction needs at least one point")
        if pts[0].X != 1:
            raise DomainError("the first minimal point must have X = 1")
        for prev, cur in zip(pts, pts[1:]):
            if cur.X <= prev.X:
                raise DomainError("abscissas X_i must be strictly increasing")
            if not cur.delta.hi < prev.delta.lo:
                raise DomainError("delta values must be certified strictly decreasing")
        if self.horizon < pts[-1].X:
            raise DomainError("horizon cannot precede the last point")
        object.__setattr__(self, "points", pts)


def _rhd_int(num: int, den: int) -> int:
    """round-half-down of num/den for den > 0: ceil(num/den - 1/2)."""
    return -((den - 2 * num) // (2 * den))


def _abs_interval(lo: int, hi: int) -> tuple[int, int]:
    """Image of [lo, hi] under abs, over a common positive denominator."""
    if lo >= 0:
        return lo, hi
    if hi <= 0:
        return -hi, -lo
    return 0, max(-lo, hi)


def _frac_str(fr: Fraction) -> str:
    return f"{fr.numerator}/{fr.denominator}"


def _parse_frac(text: str) -> Fraction:
    s = text.strip()
    try:
        if "/" in s:
            num, den = s.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# Exact backend


class _ExactEngine:
    """Sweep over values (P + Q*sqrt(D)) / R held as plain integers."""

    def __init__(self, xi: QuadSurd, eta: QuadSurd, depth_label: int):
        if xi.d != 0 and eta.d != 0 and xi.d != eta.d:
            raise DomainError("exact backend needs a single quadratic field")
        self.D = xi.d or eta.d
        self.xi = self._int_form(xi)
        self.eta = self._int_form(eta)
        self.depth_label = depth_label

    @staticmethod
    def _int_form(v: QuadSurd) -> tuple[int, int, int]:
        r = math.lcm(v.a.denominator, v.b.denominator)
        return (
            v.a.numerator * (r // v.a.denominator),
            v.b.numerator * (r // v.b.denominator),
            r,
        )

    def _component(self, x0: int, form: tuple[int, int, int]) -> tuple[int, int, int, int]:
        """Nearest integer n of x0*value and |x0*value - n| as (a, b, r)."""
        p, q, r = form
        a = x0 * p
        b = x0 * q
        # round_half_down((a + b sqrt(D)) / r) = -floor((r - 2a - 2b sqrt(D)) / (2r))
        n = -_floor_surd_int(r - 2 * a, -2 * b, self.D, 2 * r)
        da = a - n * r
        db = b
        if _sign_int(da, db, self.D) < 0:
            da, db = -da, -db
        return n, da, db, r

    def _delta(self, x0: int) -> tuple[int, int, tuple[int, int, int]]:
        n1, a1, b1, r1 = self._component(x0, self.xi)
        n2, a2, b2, r2 = self._component(x0, self.eta)
        # max of (a1 + b1 sqrt(D))/r1 and (a2 + b2 sqrt(D))/r2
        if _sign_int(a1 * r2 - a2 * r1, b1 * r2 - b2 * r1, self.D) >= 0:
            return n1, n2, (a1, b1, r1)
        return n1, n2, (a2, b2, r2)

    @staticmethod
    def _cmp(d1: tuple[int, int, int], d2: tuple[int, int, int], D: int) -> int:
        a1, b1, r1 = d1
        a2, b2, r2 = d2
        return _sign_int(a1 * r2 - a2 * r1, b1 * r2 - b2 * r1, D)

    def sweep_chunk(self, lo: int, hi: int) -> list[tuple]:
        out = []
        rec: Optional[tuple[int, int, int]] = None
        for x0 in range(lo, hi):
            x1, x2, delta = self._delta(x0)
            if rec is None or self._cmp(delta, rec, self.D) < 0:
                out.append((x0, x1, x2, delta))
                rec = delta
                if delta[0] == 0 and delta[1] == 0:
                    break  # delta is exactly 0; nothing can beat it
        return out

    def merge(self, chunk_lists: Sequence[list[tuple]]) -> list[tuple]:
        final = []
        rec: Optional[tuple[int, int, int]] = None
        for chunk in chunk_lists:
            for cand in chunk:
                delta = cand[3]
                if rec is None or self._cmp(delta, rec, self.D) < 0:
                    final.append(cand)
                    rec = delta
                    if delta[0] == 0 and delta[1] == 0:
                        return final
        return final

    def finalize(self, cands: list[tuple]) -> list["MinimalPoint"]:
        surds = [
            QuadSurd(Fraction(a, r), Fraction(b, r), self.D) for (_, _, _, (a, b, r)) in cands
        ]
        bits = 64
        while True:
            encs = [s.dyadic_enclosure(bits) for s in surds]
            ok = True
            for k, (lo, hi) in enumerate(encs):
                if hi != lo and (hi - lo) * (1 << REL_BITS) > hi:
                    ok = False
                    break
                if k > 0 and not (hi < encs[k - 1][0] or (hi == 0 and lo == 0)):
                    ok = False
                    break
            if ok:
                break
            bits += 32
            if bits > 1 << 13:  # unreachable for genuine strict decreases
                raise PrecisionExhausted(
                    "dyadic enclosures failed to separate exact deltas",
                    x0=cands[0][0] if cands else None,
                )
        points = []
        for k, ((x0, x1, x2, _), (lo, hi)) in enumerate(zip(cands, encs)):
            points.append(
                MinimalPoint(
                    index=k + 1,
                    vec=(x0, x1, x2),
                    X=x0,
                    delta=Enclosure(lo, hi, self.depth_label),
                )
            )
        return points


def _floor_surd_int(a: int, b: int, d: int, r: int) -> int:
    """floor((a + b*sqrt(d)) / r) with r > 0 and d >= 0 non-square."""
    if b == 0 or d == 0:
        return a // r
    s = math.isqrt(b * b * d)
    n = (a + (s if b > 0 else -s)) // r
    while _sign_int(a - r * (n + 1), b, d) >= 0:
        n += 1
    while _sign_int(a - r * n, b, d) < 0:
        n -= 1
    return n


# ---------------------------------------------------------------------------
# Interval backend


class _IntervalEngine:
    """Sweep on certified rational enclosures, refined on demand.

    All methods are pure in the engine state (depth is passed explicitly),
    so one engine instance serves all worker threads.
    """

    def __init__(self, xi: RealSpec, eta: RealSpec, max_depth: int):
        self.xi = xi
        self.eta = eta
        self.max_depth = max_depth
        self.base_depth = 8

    def _ints_at(self, spec: RealSpec, depth: int) -> tuple[int, int, int]:
        """Enclosure of spec as integers (U, V, M): [U/M, V/M], M > 0."""
        enc = enclose(spec, depth)
        m = math.lcm(enc.lo.denominator, enc.hi.denominator)
        return enc.lo.numerator * (m // enc.lo.denominator), enc.hi.numerator * (
            m // enc.hi.denominator
        ), m

    def _bump(self, depth: int, x0: int) -> int:
        nxt = min(depth + REFINE_STEP, self.max_depth)
        if nxt == depth:
            raise PrecisionExhausted(
                f"comparison at x0={x0} undecided at max_depth={self.max_depth}",
                x0=x0,
                depth=depth,
            )
        return nxt

    def _delta_interval(
        self, vec: tuple[int, int, int], depth: int
    ) -> tuple[Fraction, Fraction]:
        x0, x1, x2 = vec
        u1, v1, m1 = self._ints_at(self.xi, depth)
        u2, v2, m2 = self._ints_at(self.eta, depth)
        a1, b1 = _abs_interval(x0 * u1 - x1 * m1, x0 * v1 - x1 * m1)
        a2, b2 = _abs_interval(x0 * u2 - x2 * m2, x0 * v2 - x2 * m2)
        return (
            max(Fraction(a1, m1), Fraction(a2, m2)),
            max(Fraction(b1, m1), Fraction(b2, m2)),
        )

    def _decide(
        self, x0: int, rec_vec: Optional[tuple[int, int, int]], depth: int
    ) -> tuple[bool, Optional[tuple[int, int, int]], Fraction, Fraction, int]:
        """Evaluate x0 against the record; refining as needed.

        Returns (recorded, vec, delta_lo, delta_hi, depth).
        """
        while True:
            u1, v1, m1 = self._ints_at(self.xi, depth)
            n1l = _rhd_int(x0 * u1, m1)
            n1h = _rhd_int(x0 * v1, m1)
            if n1l != n1h:
                depth = self._bump(depth, x0)
                continue
            u2, v2, m2 = self._ints_at(self.eta, depth)
            n2l = _rhd_int(x0 * u2, m2)
            n2h = _rhd_int(x0 * v2, m2)
            if n2l != n2h:
                depth = self._bump(depth, x0)
                continue
            x1, x2 = n1l, n2l
            a1, b1 = _abs_interval(x0 * u1 - x1 * m1, x0 * v1 - x1 * m1)
            a2, b2 = _abs_interval(x0 * u2 - x2 * m2, x0 * v2 - x2 * m2)
            dlo = max(Fraction(a1, m1), Fraction(a2, m2))
            dhi = max(Fraction(b1, m1), Fraction(b2, m2))
            if rec_vec is None:
                return True, (x0, x1, x2), dlo, dhi, depth
            rec_lo, rec_hi = self._delta_interval(rec_vec, depth)
            if dhi < rec_lo:
                return True, (x0, x1, x2), dlo, dhi, depth
            if dlo >= rec_hi:
                return False, None, dlo, dhi, depth
            depth = self._bump(depth, x0)

    def sweep_chunk(self, lo: int, hi: int) -> list[tuple]:
        depth = self.base_depth
        u_step, v_step, m = self._ints_at(self.xi, depth)
        u = (lo - 1) * u_step
        v = (lo - 1) * v_step
        rec_vec: Optional[tuple[int, int, int]] = None
        rnum = rden = 0
        out = []
        for x0 in range(lo, hi):
            u += u_step
            v += v_step
            if rec_vec is not None:
                n, f1 = divmod(u, m)
                g = v - n * m
                if g < m:
                    dmin = f1 if f1 < m - g else m - g
                    # delta(x0) >= dist(x0*xi, Z) >= dmin/m; skip if that
                    # certified lower bound already exceeds the record.
                    if dmin * rden > rnum * m:
                        continue
            recorded, vec, _, dhi, new_depth = self._decide(x0, rec_vec, depth)
            if recorded:
                out.append(vec)
                rec_vec = vec
                rnum, rden = dhi.numerator, dhi.denominator
            if new_depth != depth:
                depth = new_depth
                u_step, v_step, m = self._ints_at(self.xi, depth)
                u = x0 * u_step
                v = x0 * v_step
        return out

    def merge(self, chunk_lists: Sequence[list[tuple]]) -> list[tuple]:
        final: list[tuple[int, int, int]] = []
        depth = self.base_depth
        for chunk in chunk_lists:
            for vec in chunk:
                if not final:
                    final.append(vec)
                    continue
                rec = final[-1]
                while True:
                    dlo, dhi = self._delta_interval(vec, depth)
                    rlo, rhi = self._delta_interval(rec, depth)
                    if dhi < rlo:
                        final.append(vec)
                        break
                    if dlo >= rhi:
                        break
                    depth = self._bump(depth, vec[0])
        return final

    def finalize(self, cands: list[tuple]) -> list["MinimalPoint"]:
        depth = self.base_depth
        while True:
            pairs = [self._delta_interval(vec, depth) for vec in cands]
            ok = True
            bad_x0 = None
            for k, (lo, hi) in enumerate(pairs):
                if (hi - lo) * (1 << REL_BITS) > hi:
                    ok = False
                    bad_x0 = cands[k][0]
                    break
                if k > 0 and not hi < pairs[k - 1][0]:
                    ok = False
                    bad_x0 = cands[k][0]
                    break
            if ok:
                break
            nxt = min(depth + REFINE_STEP, self.max_depth)
            if nxt == depth:
                raise PrecisionExhausted(
                    f"enclosure at x0={bad_x0} not separable at max_depth={self.max_depth}",
                    x0=bad_x0,
                    depth=depth,
                )
            depth = nxt
        return [
            MinimalPoint(index=k + 1, vec=vec, X=vec[0], delta=Enclosure(lo, hi, depth))
            for k, (vec, (lo, hi)) in enumerate(zip(cands, pairs))
        ]


# ---------------------------------------------------------------------------
# Public operations


def _make_engine(
    xi: RealSpec, eta: RealSpec, max_depth: int
) -> Union[_ExactEngine, _IntervalEngine]:
    vx = exact_value(xi)
    ve = exact_value(eta)
    if vx is not None and ve is not None:
        sx = vx if isinstance(vx, QuadSurd) else QuadSurd.from_rational(vx)
        se = ve if isinstance(ve, QuadSurd) else QuadSurd.from_rational(ve)
        if sx.d == 0 or se.d == 0 or sx.d == se.d:
            return _ExactEngine(sx, se, max(exact_depth(xi), exact_depth(eta)))
    return _IntervalEngine(xi, eta, max_depth)


def best_approx_at(
    x0: int, xi: RealSpec, eta: RealSpec, max_depth: int = DEFAULT_MAX_DEPTH
) -> tuple[tuple[int, int, int], Enclosure]:
    """The point (x0, x1, x2) with nearest-integer x1, x2 and its delta.

    Refines until both rounding decisions resolve; PrecisionExhausted if
    max_depth is hit first (possible only for exact half-integer products,
    which the exact backend instead resolves by the round-down rule).
    """
    if x0 < 1:
        raise DomainError(f"x0 must be >= 1, got {x0}")
    engine = _make_engine(xi, eta, max_depth)
    if isinstance(engine, _ExactEngine):
        x1, x2, (a, b, r) = engine._delta(x0)
        surd = QuadSurd(Fraction(a, r), Fraction(b, r), engine.D)
        bits = 64
        while True:
            lo, hi = surd.dyadic_enclosure(bits)
            if hi == lo or (hi - lo) * (1 << REL_BITS) <= hi:
                break
            bits += 32
        return (x0, x1, x2), Enclosure(lo, hi, engine.depth_label)
    recorded, vec, dlo, dhi, depth = engine._decide(x0, None, engine.base_depth)
    assert recorded and vec is not None
    return vec, Enclosure(dlo, dhi, depth)


def minimal_point_sequence(
    xi: RealSpec,
    eta: RealSpec,
    x_max: int,
    max_depth: int = DEFAULT_MAX_DEPTH,
    threads: int = 1,
) -> list[MinimalPoint]:
    """All minimal points with abscissa up to x_max, in order.

    The output is identical for every thread count; see the module
    docstring for the determinism argument.
    """
    if x_max < 1:
        raise DomainError(f"x_max must be >= 1, got {x_max}")
    if max_depth < 4:
        raise DomainError(f"max_depth must be >= 4, got {max_depth}")
    if threads < 1:
        raise DomainError(f"threads must be >= 1, got {threads}")
    engine = _make_engine(xi, eta, max_depth)
    bounds = [(lo, min(lo + CHUNK_SIZE, x_max + 1)) for lo in range(1, x_max + 1, CHUNK_SIZE)]
    if threads == 1 or len(bounds) == 1:
        chunk_lists = [engine.sweep_chunk(lo, hi) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunk_lists = list(pool.map(lambda b: engine.sweep_chunk(*b), bounds))
    cands = engine.merge(chunk_lists)
    points = engine.finalize(cands)
    for p in points:
        assert math.gcd(math.gcd(abs(p.vec[0]), abs(p.vec[1])), abs(p.vec[2])) == 1
    return points


def delta_at(df: DeltaFunction, X: Union[int, float, Fraction]) -> Enclosure:
    """Delta(X): the delta of the last minimal point with X_i <= X."""
    xq = Fraction(X)
    if xq < 1 or xq > df.horizon:
        raise HorizonExceeded(f"X={X} outside the computed horizon [1, {df.horizon}]")
    best = df.points[0]
    for p in df.points:
        if p.X <= xq:
            best = p
        else:
            break
    return best.delta


def find_i0(seq: Sequence[MinimalPoint], lam: Fraction) -> Optional[int]:
    """Smallest i0 >= 2 with Delta_i <= X_{i+1}^(-lam) for all verifiable
    i >= i0, i.e. delta_i.hi^q * X_{i+1}^p <= 1 for lam = p/q.

    Returns None when no such index exists on the horizon.
    """
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise BadLambda(f"lambda must lie in (0, 1), got {lam}")
    if len(seq) < 3:
        raise InsufficientData(f"need at least 3 points, got {len(seq)}")
    p, q = lam.numerator, lam.denominator
    last = len(seq) - 1  # last verifiable point index (needs X_{i+1})
    i0: Optional[int] = None
    for i in range(last, 1, -1):
        hi = seq[i - 1].delta.hi
        x_next = seq[i].X
        if hi.numerator**q * x_next**p <= hi.denominator**q:
            i0 = i
        else:
            break
    return i0


# ---------------------------------------------------------------------------
# Serialization (CSV and JSON sequence exports; replay ingestion)

CSV_HEADER = "index,X_i,x0,x1,x2,delta_lo,delta_hi"


def format_csv(points: Sequence[MinimalPoint]) -> str:
    lines = [CSV_HEADER]
    for p in points:
        lines.append(
            f"{p.index},{p.X},{p.vec[0]},{p.vec[1]},{p.vec[2]},"
            f"{_frac_str(p.delta.lo)},{_frac_str(p.delta.hi)}"
        )
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> list[MinimalPoint]:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0].strip() != CSV_HEADER:
        raise ParseError(f"expected header {CSV_HEADER!r}")
    points = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 7:
            raise ParseError(f"expected 7 columns, got {len(parts)}: {ln!r}")
        try:
            index, x_i, x0, x1, x2 = (int(parts[k]) for k in range(5))
        except ValueError as exc:
            raise ParseError(f"bad integer in row {ln!r}") from exc
        lo = _parse_frac(parts[5])
        hi = _parse_frac(parts[6])
        if x_i != x0:
            raise ParseError(f"X_i must equal x0, got {x_i} != {x0}")
        points.append(
            MinimalPoint(index=index, vec=(x0, x1, x2), X=x_i, delta=Enclosure(lo, hi, 0))
        )
    if not points:
        raise ParseError("sequence file contains no points")
    return points


def _point_row(p: MinimalPoint) -> dict:
    return {
        "index": p.index,
        "X_i": p.X,
        "x0": p.vec[0],
        "x1": p.vec[1],
        "x2": p.vec[2],
        "delta_lo": _frac_str(p.delta.lo),
        "delta_hi": _frac_str(p.delta.hi),
    }


def format_json(points: Sequence[MinimalPoint]) -> str:
    return json.dumps({"points": [_point_row(p) for p in points]}, indent=2) + "\n"


def parse_json(text: str) -> list[MinimalPoint]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc}") from exc
    rows = doc.get("points") if isinstance(doc, dict) else doc
    if not isinstance(rows, list) or not rows:
        raise ParseError("expected a non-empty list of points")
    points = []
    for row in rows:
        try:
            points.append(
                MinimalPoint(
                    index=int(row["index"]),
                    vec=(int(row["x0"]), int(row["x1"]), int(row["x2"])),
                    X=int(row["X_i"]),
                    delta=Enclosure(_parse_frac(row["delta_lo"]), _parse_frac(row["delta_hi"]), 0),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad point row {row!r}: {exc}") from exc
    return points
