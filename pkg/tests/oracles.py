"""Independent reference implementations used to pin expected values.

Everything here deliberately avoids the library's code paths: sweeps run
in 200-digit fixed-point integers on deep convergents, Sturmian words
come from the cutting-sequence definition, the lattice-basis verdict
from actual Smith-form elimination, and the bound values from mpmath at
50 significant digits.  Tests compare the library against these.
"""

from fractions import Fraction
from math import gcd

from mpmath import mp, mpf, log, exp

SCALE = 10**200


def fib_word_oracle(a: int, b: int, n: int) -> list[int]:
    w1, w2 = [a], [a, b]
    while len(w2) < n:
        w1, w2 = w2, w2 + w1
    return w2[:n]


def convergent_pair(terms: list[int]) -> tuple[int, int]:
    pm2, pm1 = 1, terms[0]
    qm2, qm1 = 0, 1
    for t in terms[1:]:
        pm2, pm1 = pm1, t * pm1 + pm2
        qm2, qm1 = qm1, t * qm1 + qm2
    return pm1, qm1


def fixed_point_pair(terms: list[int]) -> tuple[int, int]:
    """(xi, xi^2) as floor(value * SCALE), from the deepest convergent.

    With >= 400 partial quotients the convergent error is far below
    1/SCALE, so the only inaccuracy is the final floor (one ulp).
    """
    p, q = convergent_pair(terms)
    return p * SCALE // q, p * p * SCALE // (q * q)


def rhd_fp(v: int, scale: int = SCALE) -> int:
    """Nearest integer to v/scale with halves rounded down."""
    return -((scale - 2 * v) // (2 * scale))


def oracle_sweep(xi_fp: int, eta_fp: int, x_max: int) -> list[tuple[int, int, int, int]]:
    """Brute-force record minima of delta; ties do not displace a record.

    Returns (x0, x1, x2, delta_scaled) per minimal point.
    """
    pts = []
    rec = None
    for x0 in range(1, x_max + 1):
        v1 = x0 * xi_fp
        v2 = x0 * eta_fp
        x1 = rhd_fp(v1)
        x2 = rhd_fp(v2)
        d = max(abs(v1 - x1 * SCALE), abs(v2 - x2 * SCALE))
        if rec is None or d < rec:
            pts.append((x0, x1, x2, d))
            rec = d
    return pts


def lambda_hat_oracle(delta_scaled: int, x_next: int) -> float:
    """-log(delta)/log(X_{i+1}) from the oracle's scaled delta, dps=60."""
    mp.dps = 60
    return float(-(log(mpf(delta_scaled)) - log(mpf(10)) * 200) / log(mpf(x_next)))


# ---------------------------------------------------------------------------
# Sturmian cutting sequence


def cutting_word_oracle(slope_terms: list[int], a: int, b: int, n: int) -> list[int]:
    """Letters from floor((k+1)theta) - floor(k theta), theta = [0;a1,a2,...].

    The difference is 0 or 1; whichever value has density > 1/2 maps to
    the majority letter a.  Floors are certified by refining the
    convergent enclosure of theta until both endpoints agree.
    """

    def certified_floor(k: int) -> int:
        depth = 8
        while True:
            terms = [0] + list(slope_terms[:depth])
            pm2, pm1, qm2, qm1 = 1, terms[0], 0, 1
            cs = []
            for t in terms[1:]:
                pm2, pm1 = pm1, t * pm1 + pm2
                qm2, qm1 = qm1, t * qm1 + qm2
                cs.append(Fraction(pm1, qm1))
            lo, hi = min(cs[-2:]), max(cs[-2:])
            flo = (k * lo).__floor__()
            fhi = (k * hi).__floor__()
            if flo == fhi:
                return flo
            depth += 4
            if depth > len(slope_terms) + 1:
                raise RuntimeError("slope prefix too short to certify the floor")

    majority_step = 1 if slope_terms[0] == 1 else 0
    out = []
    for k in range(1, n + 1):
        step = certified_floor(k + 1) - certified_floor(k)
        out.append(a if step == majority_step else b)
    return out


# ---------------------------------------------------------------------------
# Smith-form lattice-basis oracle


def smith_is_basis(x: tuple[int, int, int], y: tuple[int, int, int]) -> bool:
    """Run actual Smith elimination on the 2x3 matrix [x; y].

    The rows are a basis of (span intersect Z^3) iff the Smith normal
    form is [[1,0,0],[0,1,0]], i.e. rank 2 with both invariant factors 1.
    """
    m = [list(x), list(y)]

    def nonzero_positions():
        return [(i, j) for i in range(len(m)) for j in range(3) if m[i][j] != 0]

    diag = []
    top = 0  # rows/cols below this are already finished
    while True:
        pts = [(i, j) for (i, j) in nonzero_positions() if i >= top and j >= top]
        if not pts:
            break
        # move the smallest |entry| to the (top, top) pivot slot
        i0, j0 = min(pts, key=lambda ij: abs(m[ij[0]][ij[1]]))
        m[top], m[i0] = m[i0], m[top]
        for row in m:
            row[top], row[j0] = row[j0], row[top]
        pivot = m[top][top]
        dirty = False
        for i in range(len(m)):
            if i != top and m[i][top] != 0:
                f = m[i][top] // pivot
                for j in range(3):
                    m[i][j] -= f * m[top][j]
                dirty = dirty or m[i][top] != 0
        for j in range(3):
            if j != top and m[top][j] != 0:
                f = m[top][j] // pivot
                for i in range(len(m)):
                    m[i][j] -= f * m[i][top]
                dirty = dirty or m[top][j] != 0
        if dirty:
            continue  # remainders became new, smaller pivot candidates
        diag.append(abs(pivot))
        top += 1
        if top == len(m):
            break
    return diag == [1, 1]


# ---------------------------------------------------------------------------
# High-precision bound evaluations


def evertse_log2_oracle(n: int, delta: Fraction, big_d: int) -> float:
    mp.dps = 50
    log2 = lambda v: log(v) / log(mpf(2))
    inv = mpf(delta.denominator) / mpf(delta.numerator)
    value = 60 * n * n + 7 * n * log2(inv) + log2(log(mpf(4 * big_d))) + log2(
        log(log(mpf(4 * big_d)))
    )
    return float(value)


def evertse_log2_deg_oracle(delta: Fraction, d: int) -> float:
    mp.dps = 50
    log2 = lambda v: log(v) / log(mpf(2))
    inv = mpf(delta.denominator) / mpf(delta.numerator)
    value = 540 + 21 * log2(inv) + log2(log(mpf(8 * d))) + log2(log(log(mpf(8 * d))))
    return float(value)


def measure_w_oracle(c: Fraction, d: int, h: int) -> tuple[float, float]:
    mp.dps = 50
    cc = mpf(c.numerator) / mpf(c.denominator)
    w = exp(cc * log(mpf(d)) * log(log(mpf(d))))
    return float(w), float(-w * log(mpf(h)))


def measure_w_ab_oracle(c: Fraction, d: int) -> float:
    mp.dps = 50
    cc = mpf(c.numerator) / mpf(c.denominator)
    return float(exp(cc * log(mpf(d)) ** 2 * log(log(mpf(d))) ** 2))
