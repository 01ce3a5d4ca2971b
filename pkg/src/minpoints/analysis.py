"""Exponent estimation and verification of quantitative inequalities.

Covers: the approximation exponent lambda-hat_i = -log(Delta_i)/log(X_{i+1})
with certified error bounds; the basis property of consecutive minimal
points (lemma W); the height inequality X_j <= H(W_i) H(W_j) on the
independence index set I (lemma X); conic non-vanishing and the growth
ratio X_{i+1}^lambda / X_i (lemma f); the eventual height/abscissa growth
along I (lemma main); the subspace-count bound t <= 2^(60 n^2) delta^(-7n)
log(4D) loglog(4D); the admissible-delta choice 6*delta < 2*lambda - 1;
and the measure function w(d) = exp(c log(d) loglog(d)).

Convention: all logarithms in the count bound and the measure are natural
logarithms (the sources leave the base implicit); presentation in base 2
is offered where stated.  Transcendental evaluations run in interval
arithmetic (mpmath.iv) with precision escalated until the result interval
is narrower than the advertised accuracy, so reported digits are certified.
All lemma verdicts rest on exact integer or rational comparisons only.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from mpmath import iv

from .errors import (
    BadLambda,
    DegenerateDelta,
    DomainError,
    InsufficientData,
    ThetaTooSmall,
    ZeroPolynomial,
)
from .geometry import ConicForm, conic_eval, subspace_of, wedge
from .minimal_points import MinimalPoint

__all__ = [
    "LambdaEntry",
    "ExponentEstimate",
    "LemmaReport",
    "MeasureParams",
    "estimate_lambda",
    "default_tail_from",
    "verify_lemma_W",
    "verify_lemma_X",
    "verify_lemma_f",
    "verify_lemma_main",
    "evertse_count_log2",
    "evertse_count_log2_deg",
    "choose_delta",
    "measure_w",
    "measure_w_ab",
    "naive_height_and_degree",
    "build_report",
]

_IV_LOCK = threading.Lock()


def _mpf_to_frac(t: tuple) -> Fraction:
    sign, man, exp, _ = t
    v = Fraction(man) * (Fraction(2) ** exp)
    return -v if sign else v


def _iv_endpoints(x) -> tuple[Fraction, Fraction]:
    lo_t, hi_t = x._mpi_
    return _mpf_to_frac(lo_t), _mpf_to_frac(hi_t)


def _iv_frac(fr: Fraction):
    return iv.mpf(fr.numerator) / iv.mpf(fr.denominator)


def _frac_str(fr: Fraction) -> str:
    return f"{fr.numerator}/{fr.denominator}"


# ---------------------------------------------------------------------------
# Exponent estimation


@dataclass(frozen=True)
class LambdaEntry:
    """Certified bounds for lambda-hat_i; the true value lies in [lo, hi]."""

    i: int
    lo: Fraction
    hi: Fraction

    @property
    def approx(self) -> float:
        return float((self.lo + self.hi) / 2)


@dataclass(frozen=True)
class ExponentEstimate:
    per_index: tuple[LambdaEntry, ...]
    tail_from: int
    tail_min: Fraction  # lower bound of the tail minimum (conservative)
    tail_argmin: int


def _lambda_bounds(
    delta_lo: Fraction, delta_hi: Fraction, x_next: int, tol: Fraction
) -> tuple[Fraction, Fraction]:
    """Certified [lo, hi] for -log(Delta)/log(X) with Delta in the enclosure."""
    prec = 64
    while True:
        with _IV_LOCK:
            iv.prec = prec
            log_x = iv.log(iv.mpf(x_next))
            hi_iv = -iv.log(_iv_frac(delta_lo)) / log_x
            lo_iv = -iv.log(_iv_frac(delta_hi)) / log_x
        lo_lo, lo_hi = _iv_endpoints(lo_iv)
        hi_lo, hi_hi = _iv_endpoints(hi_iv)
        if lo_hi - lo_lo <= tol and hi_hi - hi_lo <= tol:
            return lo_lo, hi_hi
        prec *= 2
        if prec > 1 << 16:  # pragma: no cover - defensive
            raise DomainError("interval log evaluation failed to converge")


def estimate_lambda(seq: Sequence[MinimalPoint], tail_from: int) -> ExponentEstimate:
    """lambda-hat_i for all verifiable i, with the tail minimum from tail_from.

    Certified: each entry's [lo, hi] contains -log(Delta_i)/log(X_{i+1})
    and is at most ~2e-7 wider than the spread forced by the delta
    enclosure itself; the tail minimum takes lower bounds.
    """
    if len(seq) < 2:
        raise InsufficientData("need at least 2 points to estimate an exponent")
    if not 1 <= tail_from < len(seq):
        raise DomainError(f"tail_from must lie in [1, {len(seq) - 1}], got {tail_from}")
    tol = Fraction(1, 10**7)
    entries = []
    for pos in range(len(seq) - 1):
        p = seq[pos]
        if p.delta.lo <= 0:
            raise DegenerateDelta(
                f"delta enclosure at index {p.index} contains 0; exponent undefined"
            )
        x_next = seq[pos + 1].X
        lo, hi = _lambda_bounds(p.delta.lo, p.delta.hi, x_next, tol)
        entries.append(LambdaEntry(i=p.index, lo=lo, hi=hi))
    tail = [e for e in entries if e.i >= tail_from]
    if not tail:
        raise DomainError(f"no verifiable index at or beyond tail_from={tail_from}")
    best = min(tail, key=lambda e: e.lo)
    return ExponentEstimate(
        per_index=tuple(entries),
        tail_from=tail_from,
        tail_min=best.lo,
        tail_argmin=best.i,
    )


def default_tail_from(seq: Sequence[MinimalPoint], x_threshold: int = 1000) -> int:
    """First index i with X_{i+1} >= x_threshold; last verifiable otherwise."""
    for pos in range(len(seq) - 1):
        if seq[pos + 1].X >= x_threshold:
            return seq[pos].index
    return seq[-1].index - 1 if len(seq) > 1 else 1


# ---------------------------------------------------------------------------
# Lemma verifications


@dataclass(frozen=True)
class LemmaReport:
    """Outcome of one lemma check on a computed horizon.

    verdict is one of "holds-on-horizon", "violated", "inconclusive";
    violated verdicts always carry a witness index.  margins list the
    exact per-index slack values the verdict rests on; stats carries
    lemma-specific scalars (counts, cutoffs, the empirical i1, ...).
    """

    lemma_id: str
    verdict: str
    checked_range: tuple[int, int]
    margins: tuple[dict, ...] = ()
    witness: Optional[int] = None
    detail: Optional[str] = None
    stats: dict = field(default_factory=dict)


def verify_lemma_W(seq: Sequence[MinimalPoint]) -> LemmaReport:
    """Each consecutive pair spans a plane and is a basis of its lattice.

    Checks wedge(x_i, x_{i+1}) != 0 and primitivity of the raw wedge (the
    lattice-basis criterion) for every consecutive pair.
    """
    if len(seq) < 2:
        raise InsufficientData(f"need at least 2 points, got {len(seq)}")
    margins = []
    for pos in range(len(seq) - 1):
        i = seq[pos].index
        raw = wedge(seq[pos].vec, seq[pos + 1].vec)
        if raw == (0, 0, 0):
            return LemmaReport(
                lemma_id="W",
                verdict="violated",
                checked_range=(seq[0].index, seq[-1].index),
                margins=tuple(margins),
                witness=i,
                detail=f"x_{i} and x_{i + 1} are linearly dependent",
            )
        g = math.gcd(math.gcd(abs(raw[0]), abs(raw[1])), abs(raw[2]))
        margins.append({"i": i, "wedge_content": g})
        if g != 1:
            return LemmaReport(
                lemma_id="W",
                verdict="violated",
                checked_range=(seq[0].index, seq[-1].index),
                margins=tuple(margins),
                witness=i,
                detail=f"wedge content {g} != 1: pair is not a lattice basis",
            )
    return LemmaReport(
        lemma_id="W",
        verdict="holds-on-horizon",
        checked_range=(seq[0].index, seq[-1].index),
        margins=tuple(margins),
        stats={"pairs_checked": len(seq) - 1},
    )


def _point_by_index(seq: Sequence[MinimalPoint], index: int) -> MinimalPoint:
    pos = index - seq[0].index
    p = seq[pos]
    if p.index != index:
        raise DomainError(f"sequence indices are not contiguous at {index}")
    return p


def verify_lemma_X(seq: Sequence[MinimalPoint], I: Sequence[int]) -> LemmaReport:
    """For consecutive i < j in I: W_i != W_j and X_j^2 <= H^2(W_i) H^2(W_j).

    All comparisons are exact integer arithmetic on squared heights.  The
    size of I on the horizon is reported as evidence for its infinitude
    (never as proof).
    """
    if len(I) < 2:
        raise InsufficientData(f"need at least 2 indices in I, got {len(I)}")
    margins = []
    for i, j in zip(I, I[1:]):
        pi = _point_by_index(seq, i)
        pi1 = _point_by_index(seq, i + 1)
        pj = _point_by_index(seq, j)
        pj1 = _point_by_index(seq, j + 1)
        wi = subspace_of(pi.vec, pi1.vec)
        wj = subspace_of(pj.vec, pj1.vec)
        if wi.wedge == wj.wedge:
            return LemmaReport(
                lemma_id="X",
                verdict="violated",
                checked_range=(I[0], I[-1]),
                margins=tuple(margins),
                witness=j,
                detail=f"W_{i} = W_{j}: equal subspaces for consecutive I-indices",
            )
        slack = wi.height_sq * wj.height_sq - pj.X**2
        margins.append({"i": i, "j": j, "slack": slack})
        if slack < 0:
            return LemmaReport(
                lemma_id="X",
                verdict="violated",
                checked_range=(I[0], I[-1]),
                margins=tuple(margins),
                witness=j,
                detail=f"X_{j}^2 > H^2(W_{i}) H^2(W_{j})",
            )
    return LemmaReport(
        lemma_id="X",
        verdict="holds-on-horizon",
        checked_range=(I[0], I[-1]),
        margins=tuple(margins),
        stats={"I_size": len(I), "I": list(I)},
    )


def verify_lemma_f(
    seq: Sequence[MinimalPoint], form: ConicForm, lam: Fraction
) -> LemmaReport:
    """Conic non-vanishing and growth-ratio evidence.

    (a) phi(x_i) for every recorded point; the cutoff reported is the first
    index beyond every vanishing (1 if phi never vanishes).  (b) the exact
    ratios X_{i+1}^p / X_i^q for lam = p/q, whose maximum is the empirical
    stand-in for the inequality X_{i+1}^lam << X_i (no fixed constant is
    asserted).  The caller is responsible for (xi, eta) lying on the conic.
    """
    if len(seq) < 2:
        raise InsufficientData(f"need at least 2 points, got {len(seq)}")
    lam = Fraction(lam)
    if lam <= 0:
        raise BadLambda(f"lambda must be positive, got {lam}")
    margins = []
    vanish = []
    for p in seq:
        value = conic_eval(form, p.vec)
        margins.append({"i": p.index, "phi": _frac_str(value)})
        if value == 0:
            vanish.append(p.index)
    pnum, qden = lam.numerator, lam.denominator
    max_ratio = Fraction(0)
    max_ratio_at = seq[0].index
    for pos in range(len(seq) - 1):
        ratio = Fraction(seq[pos + 1].X ** pnum, seq[pos].X ** qden)
        margins[pos]["ratio"] = _frac_str(ratio)
        if ratio > max_ratio:
            max_ratio = ratio
            max_ratio_at = seq[pos].index
    cutoff = (vanish[-1] + 1) if vanish else 1
    verdict = "holds-on-horizon"
    detail = f"phi non-vanishing for i >= {cutoff}; max growth ratio at i={max_ratio_at}"
    if vanish and vanish[-1] == seq[-1].index:
        verdict = "inconclusive"
        detail = "phi vanishes at the last recorded point; no non-vanishing tail observed"
    return LemmaReport(
        lemma_id="f",
        verdict=verdict,
        checked_range=(seq[0].index, seq[-1].index),
        margins=tuple(margins),
        detail=detail,
        stats={
            "vanish_indices": vanish,
            "nonvanish_cutoff": cutoff,
            "max_ratio": _frac_str(max_ratio),
            "max_ratio_approx": float(max_ratio),
            "lambda": _frac_str(lam),
        },
    )


def verify_lemma_main(
    seq: Sequence[MinimalPoint],
    I: Sequence[int],
    lam: Fraction,
    theta: Fraction,
) -> LemmaReport:
    """Finds the smallest i1 in I beyond which consecutive I-pairs i < j
    satisfy H(W_i) < H(W_j) and X_{j+1} < X_{i+1}^theta (exact powers).

    Requires theta > (1 - lam) / (2 lam - 1).
    """
    lam = Fraction(lam)
    theta = Fraction(theta)
    if not Fraction(1, 2) < lam < 1:
        raise BadLambda(f"lambda must lie in (1/2, 1), got {lam}")
    critical = (1 - lam) / (2 * lam - 1)
    if theta <= critical:
        raise ThetaTooSmall(f"theta must exceed (1-lambda)/(2*lambda-1) = {critical}")
    if len(I) < 2:
        return LemmaReport(
            lemma_id="main",
            verdict="inconclusive",
            checked_range=(I[0], I[0]) if I else (0, 0),
            detail=f"need at least two I-indices, got {len(I)}",
            stats={"theta": _frac_str(theta), "critical_theta": _frac_str(critical)},
        )
    pt, qt = theta.numerator, theta.denominator
    margins = []
    last_fail = -1
    for k, (i, j) in enumerate(zip(I, I[1:])):
        pi = _point_by_index(seq, i)
        pi1 = _point_by_index(seq, i + 1)
        pj = _point_by_index(seq, j)
        pj1 = _point_by_index(seq, j + 1)
        hi_sq = subspace_of(pi.vec, pi1.vec).height_sq
        hj_sq = subspace_of(pj.vec, pj1.vec).height_sq
        height_ok = hi_sq < hj_sq
        lhs = pj1.X**qt
        rhs = pi1.X**pt
        power_ok = lhs < rhs
        margins.append(
            {
                "i": i,
                "j": j,
                "height_slack": hj_sq - hi_sq,
                "power_slack": str(rhs - lhs),
                "pass": bool(height_ok and power_ok),
            }
        )
        if not (height_ok and power_ok):
            last_fail = k
    start = last_fail + 1
    if start >= len(I) - 1:
        return LemmaReport(
            lemma_id="main",
            verdict="inconclusive",
            checked_range=(I[0], I[-1]),
            margins=tuple(margins),
            detail="no i1 on this horizon: the final consecutive I-pair fails",
            stats={"theta": _frac_str(theta), "critical_theta": _frac_str(critical)},
        )
    i1 = I[start]
    return LemmaReport(
        lemma_id="main",
        verdict="holds-on-horizon",
        checked_range=(I[0], I[-1]),
        margins=tuple(margins),
        detail=f"both inequalities hold for all consecutive I-pairs from i1={i1}",
        stats={
            "i1": i1,
            "theta": _frac_str(theta),
            "critical_theta": _frac_str(critical),
        },
    )


# ---------------------------------------------------------------------------
# Bound calculators


def _certified_float(compute, rel: bool, tol: Fraction) -> float:
    """Evaluate an iv expression at escalating precision to tolerance."""
    prec = 64
    while True:
        with _IV_LOCK:
            iv.prec = prec
            value = compute()
        lo, hi = _iv_endpoints(value)
        width = hi - lo
        bound = abs(hi) * tol if rel else tol
        if width <= bound:
            return float((lo + hi) / 2)
        prec *= 2
        if prec > 1 << 16:  # pragma: no cover - defensive
            raise DomainError("interval evaluation failed to converge")


def evertse_count_log2(n: int, delta: Fraction, D: int) -> float:
    """log2 of the subspace-count bound 2^(60 n^2) delta^(-7n) ln(4D) lnln(4D).

    Natural logarithms inside the bound; the returned log2 value is
    accurate to 1e-9 (certified interval evaluation, 1e-12 internally).
    """
    delta = Fraction(delta)
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    if not 0 < delta <= 1:
        raise DomainError(f"delta must lie in (0, 1], got {delta}")
    if D < 1:
        raise DomainError(f"D must be >= 1 so that lnln(4D) > 0, got {D}")

    def compute():
        ln2 = iv.log(iv.mpf(2))
        term_delta = iv.log(_iv_frac(1 / delta)) / ln2
        ln4d = iv.log(iv.mpf(4 * D))
        return 60 * n * n + 7 * n * term_delta + iv.log(ln4d) / ln2 + iv.log(iv.log(ln4d)) / ln2

    return _certified_float(compute, rel=False, tol=Fraction(1, 10**12))


def evertse_count_log2_deg(delta: Fraction, d: int) -> float:
    """log2 of the degree-d specialization 2^540 delta^(-21) ln(8d) lnln(8d).

    Written out independently of evertse_count_log2; the two agree at
    (n=3, D=2d), which the test suite checks to 1e-9.
    """
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise DomainError(f"delta must lie in (0, 1], got {delta}")
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")

    def compute():
        ln2 = iv.log(iv.mpf(2))
        ln8d = iv.log(iv.mpf(8 * d))
        return (
            540 + 21 * (iv.log(_iv_frac(1 / delta)) / ln2)
            + iv.log(ln8d) / ln2
            + iv.log(iv.log(ln8d)) / ln2
        )

    return _certified_float(compute, rel=False, tol=Fraction(1, 10**12))


def choose_delta(lam: Fraction) -> Fraction:
    """delta = (2*lambda - 1)/7, satisfying 6*delta < 2*lambda - 1 and
    delta < 1/2 for the admissible lambda range."""
    lam = Fraction(lam)
    if not Fraction(1, 2) < lam <= 1:
        raise BadLambda(f"lambda must lie in (1/2, 1], got {lam}")
    return (2 * lam - 1) / 7


@dataclass(frozen=True)
class MeasureParams:
    c: Fraction
    d: int
    H: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", Fraction(self.c))
        if self.c <= 0:
            raise DomainError(f"c must be positive, got {self.c}")
        if self.d < 3:
            raise DomainError(f"d must be >= 3 so that loglog(d) > 0, got {self.d}")
        if self.H < 2:
            raise DomainError(f"H must be >= 2, got {self.H}")


def measure_w(params: MeasureParams) -> tuple[float, float]:
    """w = exp(c ln(d) lnln(d)) and the log of the lower bound H^(-w).

    Returns (w, log_bound) with log_bound = -w * ln(H), both to 1e-9
    relative accuracy.
    """
    c, d, h = params.c, params.d, params.H

    def compute_w():
        return iv.exp(_iv_frac(c) * iv.log(iv.mpf(d)) * iv.log(iv.log(iv.mpf(d))))

    def compute_bound():
        return -compute_w() * iv.log(iv.mpf(h))

    w = _certified_float(compute_w, rel=True, tol=Fraction(1, 10**12))
    log_bound = _certified_float(compute_bound, rel=True, tol=Fraction(1, 10**12))
    return w, log_bound


def measure_w_ab(c: Fraction, d: int) -> float:
    """The prior comparison measure exp(c (ln d)^2 (lnln d)^2)."""
    c = Fraction(c)
    if c <= 0:
        raise DomainError(f"c must be positive, got {c}")
    if d < 3:
        raise DomainError(f"d must be >= 3, got {d}")

    def compute():
        ln_d = iv.log(iv.mpf(d))
        lnln_d = iv.log(ln_d)
        return iv.exp(_iv_frac(c) * ln_d * ln_d * lnln_d * lnln_d)

    return _certified_float(compute, rel=True, tol=Fraction(1, 10**12))


def naive_height_and_degree(coeffs: Sequence[int]) -> tuple[int, int]:
    """(H0, d) of an integer polynomial given by ascending coefficients:
    H0 the largest |coefficient|, d the degree.  Irreducibility is the
    caller's concern; this only measures."""
    cs = [int(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        raise ZeroPolynomial("height and degree of the zero polynomial are undefined")
    return max(abs(c) for c in cs), len(cs) - 1


# ---------------------------------------------------------------------------
# Report assembly


def _lemma_to_json(rep: LemmaReport) -> dict:
    out: dict = {"verdict": rep.verdict}
    if rep.witness is not None:
        out["witness"] = rep.witness
    out["margins"] = list(rep.margins)
    out["checked_range"] = list(rep.checked_range)
    if rep.detail:
        out["detail"] = rep.detail
    for key, value in rep.stats.items():
        out[key] = value
    return out


def _exponent_to_json(est: ExponentEstimate) -> dict:
    return {
        "tail_from": est.tail_from,
        "tail_min": _frac_str(est.tail_min),
        "tail_min_approx": float(est.tail_min),
        "tail_argmin": est.tail_argmin,
        "per_index": [
            {
                "i": e.i,
                "lambda_lo": _frac_str(e.lo),
                "lambda_hi": _frac_str(e.hi),
                "lambda_approx": e.approx,
            }
            for e in est.per_index
        ],
    }


def build_report(
    run: dict,
    exponent: Optional[ExponentEstimate] = None,
    lemmas: Optional[dict[str, LemmaReport]] = None,
    bounds: Optional[dict] = None,
) -> dict:
    """Aggregate verification outputs into one JSON-ready document.

    Field order is fixed (run, exponent, lemmas in W/X/f/main order,
    bounds) so serialized reports are byte-stable.
    """
    if exponent is None and not lemmas and not bounds:
        raise DomainError("nothing to report: no exponent, lemmas, or bounds")
    doc: dict = {"run": dict(run)}
    if exponent is not None:
        doc["exponent"] = _exponent_to_json(exponent)
    if lemmas:
        section: dict = {}
        for lemma_id in ("W", "X", "f", "main"):
            if lemma_id in lemmas:
                section[lemma_id] = _lemma_to_json(lemmas[lemma_id])
        for lemma_id in sorted(lemmas):
            if lemma_id not in section:
                section[lemma_id] = _lemma_to_json(lemmas[lemma_id])
        doc["lemmas"] = section
    if bounds:
        doc["bounds"] = dict(bounds)
    return doc
