"""Integer-lattice geometry: wedge products, subspace heights, Weil heights,
and quadratic-form evaluation on conics.

All arithmetic is exact (integers and Fractions); heights are returned
squared so every value stays rational.  A rank-2 sublattice of Z^3 spanned
by two integer vectors is represented by the wedge (cross) product of the
pair: the pair is a basis of (span intersect Z^3) exactly when the raw
wedge vector is primitive, and the subspace height is the Euclidean norm
of the primitivized wedge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Sequence

from .errors import BadDegree, DependentVectors, ZeroVector

if TYPE_CHECKING:  # pragma: no cover - import for annotations only
    from .minimal_points import MinimalPoint

__all__ = [
    "IntVec3",
    "Subspace",
    "ConicForm",
    "wedge",
    "primitivize",
    "subspace_of",
    "is_lattice_basis",
    "triple_independent",
    "index_set_I",
    "weil_height",
    "conic_from_poly",
    "conic_eval",
    "PARABOLA_COEFFS",
    "parabola_form",
]

IntVec3 = tuple[int, int, int]


def _as_vec3(v: Sequence[int]) -> IntVec3:
    x0, x1, x2 = v
    return (int(x0), int(x1), int(x2))


def wedge(x: Sequence[int], y: Sequence[int]) -> IntVec3:
    """Cross product of two integer 3-vectors (bilinear, antisymmetric)."""
    a = _as_vec3(x)
    b = _as_vec3(y)
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def primitivize(v: Sequence[int]) -> IntVec3:
    """v divided by the gcd of its entries, first non-zero entry positive."""
    w = _as_vec3(v)
    g = math.gcd(math.gcd(abs(w[0]), abs(w[1])), abs(w[2]))
    if g == 0:
        raise ZeroVector("cannot primitivize the zero vector")
    w = (w[0] // g, w[1] // g, w[2] // g)
    for entry in w:
        if entry != 0:
            if entry < 0:
                w = (-w[0], -w[1], -w[2])
            break
    return w


@dataclass(frozen=True)
class Subspace:
    """Rank-2 subspace of Q^3 cut out by two integer vectors.

    wedge is the primitivized, sign-normalized cross product; height_sq is
    its squared Euclidean norm (the squared subspace height); basis_flag
    records whether the generating pair was already a lattice basis of
    (span intersect Z^3), i.e. whether the raw wedge was primitive.
    """

    wedge: IntVec3
    height_sq: int
    span_witness: tuple[IntVec3, IntVec3]
    basis_flag: bool

    def __post_init__(self) -> None:
        w = self.wedge
        assert w != (0, 0, 0)
        assert self.height_sq == w[0] * w[0] + w[1] * w[1] + w[2] * w[2]


def subspace_of(x: Sequence[int], y: Sequence[int]) -> Subspace:
    """The subspace spanned by x and y, with its height.

    Raises DependentVectors when x and y are linearly dependent.
    """
    a = _as_vec3(x)
    b = _as_vec3(y)
    raw = wedge(a, b)
    if raw == (0, 0, 0):
        raise DependentVectors(f"vectors {a} and {b} are linearly dependent")
    g = math.gcd(math.gcd(abs(raw[0]), abs(raw[1])), abs(raw[2]))
    prim = primitivize(raw)
    hsq = prim[0] * prim[0] + prim[1] * prim[1] + prim[2] * prim[2]
    return Subspace(wedge=prim, height_sq=hsq, span_witness=(a, b), basis_flag=(g == 1))


def is_lattice_basis(x: Sequence[int], y: Sequence[int]) -> bool:
    """Whether {x, y} is a basis of (span(x, y) intersect Z^3).

    Equivalent criterion: the raw wedge x ^ y is primitive.
    """
    raw = wedge(x, y)
    if raw == (0, 0, 0):
        raise DependentVectors(f"vectors {tuple(x)} and {tuple(y)} are linearly dependent")
    g = math.gcd(math.gcd(abs(raw[0]), abs(raw[1])), abs(raw[2]))
    return g == 1


def triple_independent(a: Sequence[int], b: Sequence[int], c: Sequence[int]) -> bool:
    """Whether three integer vectors span Q^3 (exact 3x3 determinant)."""
    u = _as_vec3(a)
    v = _as_vec3(b)
    w = _as_vec3(c)
    det = (
        u[0] * (v[1] * w[2] - v[2] * w[1])
        - u[1] * (v[0] * w[2] - v[2] * w[0])
        + u[2] * (v[0] * w[1] - v[1] * w[0])
    )
    return det != 0


def index_set_I(seq: Sequence["MinimalPoint"]) -> list[int]:
    """Indices i (by point index, ascending) with x_{i-1}, x_i, x_{i+1}
    linearly independent.  Needs at least three points."""
    out = []
    for k in range(1, len(seq) - 1):
        if triple_independent(seq[k - 1].vec, seq[k].vec, seq[k + 1].vec):
            out.append(seq[k].index)
    return out


def weil_height(v: Sequence[Fraction], n: int | None = None) -> Fraction:
    """Squared absolute Weil height of a non-zero rational vector.

    Over Q the place-product height reduces to ||w||_2 / content(w) for any
    integer multiple w of v, content being the gcd of the entries.  The
    squared value is returned so the result stays rational.  The height is
    projective: scaling v by a non-zero rational leaves it unchanged.
    n, when given, asserts the expected dimension (must be >= 2).
    """
    fr = [Fraction(c) for c in v]
    if n is not None and len(fr) != n:
        raise ZeroVector(f"expected a vector of dimension {n}, got {len(fr)}")
    if len(fr) < 2:
        raise ZeroVector(f"need a vector of dimension >= 2, got {len(fr)}")
    if all(c == 0 for c in fr):
        raise ZeroVector("Weil height of the zero vector is undefined")
    scale = 1
    for c in fr:
        scale = scale * c.denominator // math.gcd(scale, c.denominator)
    ints = [int(c * scale) for c in fr]
    g = 0
    for c in ints:
        g = math.gcd(g, abs(c))
    norm_sq = sum(c * c for c in ints)
    return Fraction(norm_sq, g * g)


@dataclass(frozen=True)
class ConicForm:
    """Symmetric 3x3 rational quadratic form phi with f(x, y) = phi(1, x, y)."""

    matrix: tuple[tuple[Fraction, Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        m = tuple(tuple(Fraction(e) for e in row) for row in self.matrix)
        assert len(m) == 3 and all(len(row) == 3 for row in m)
        for i in range(3):
            for j in range(3):
                assert m[i][j] == m[j][i], "conic matrix must be symmetric"
        object.__setattr__(self, "matrix", m)


# Coefficients of f(x, y) = y - x^2 in lex order (xx, xy, yy, x, y, 1).
PARABOLA_COEFFS: tuple[Fraction, ...] = (
    Fraction(-1),
    Fraction(0),
    Fraction(0),
    Fraction(0),
    Fraction(1),
    Fraction(0),
)


def conic_from_poly(coeffs: Sequence[Fraction]) -> ConicForm:
    """Homogenize a degree-2 bivariate polynomial into a symmetric form.

    coeffs lists (c_xx, c_xy, c_yy, c_x, c_y, c_1); mixed terms split
    evenly between the two symmetric matrix entries.  The resulting phi
    satisfies phi(1, x, y) = f(x, y) identically.
    """
    cs = [Fraction(c) for c in coeffs]
    if len(cs) != 6:
        raise BadDegree(f"expected 6 coefficients (xx, xy, yy, x, y, 1), got {len(cs)}")
    c_xx, c_xy, c_yy, c_x, c_y, c_1 = cs
    if c_xx == 0 and c_xy == 0 and c_yy == 0:
        raise BadDegree("polynomial must have total degree exactly 2")
    matrix = (
        (c_1, c_x / 2, c_y / 2),
        (c_x / 2, c_xx, c_xy / 2),
        (c_y / 2, c_xy / 2, c_yy),
    )
    return ConicForm(matrix=matrix)


def parabola_form() -> ConicForm:
    """The normal form x0*x2 - x1^2 of the parabola y = x^2."""
    return conic_from_poly(PARABOLA_COEFFS)


def conic_eval(form: ConicForm, v: Sequence[int]) -> Fraction:
    """Exact value v^T M v of the quadratic form at an integer vector."""
    x = [Fraction(c) for c in v]
    m = form.matrix
    total = Fraction(0)
    for i in range(3):
        for j in range(3):
            total += x[i] * m[i][j] * x[j]
    return total
