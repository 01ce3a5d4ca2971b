"""Minimal points of simultaneous rational approximation.

Build real numbers from continued-fraction words, sweep all abscissas up
to a horizon for the record minima of
delta(x) = max(|x0*xi - x1|, |x0*eta - x2|), and verify the growth
inequalities the sequence is expected to satisfy, with every verdict
resting on exact or certified-interval arithmetic.
"""

from .analysis import (
    ExponentEstimate,
    LambdaEntry,
    LemmaReport,
    MeasureParams,
    build_report,
    choose_delta,
    default_tail_from,
    estimate_lambda,
    evertse_count_log2,
    evertse_count_log2_deg,
    measure_w,
    measure_w_ab,
    naive_height_and_degree,
    verify_lemma_W,
    verify_lemma_X,
    verify_lemma_f,
    verify_lemma_main,
)
from .errors import (
    BadDegree,
    BadLambda,
    DegenerateDelta,
    DependentVectors,
    DomainError,
    HorizonExceeded,
    InsufficientData,
    MinPointsError,
    ParseError,
    PrecisionExhausted,
    StreamExhausted,
    ThetaTooSmall,
    ZeroPolynomial,
    ZeroVector,
)
from .exact_reals import (
    Comparison,
    ContinuedFraction,
    Enclosure,
    ExplicitStream,
    Expression,
    PeriodicStream,
    QuadSurd,
    RealSpec,
    Square,
    WordStream,
    compare,
    convergents,
    enclose,
    exact_value,
    nearest_integer,
    periodic_cf_value,
    refine,
)
from .geometry import (
    ConicForm,
    Subspace,
    conic_eval,
    conic_from_poly,
    index_set_I,
    is_lattice_basis,
    parabola_form,
    primitivize,
    subspace_of,
    triple_independent,
    wedge,
    weil_height,
)
from .minimal_points import (
    CSV_HEADER,
    DeltaFunction,
    MinimalPoint,
    best_approx_at,
    delta_at,
    find_i0,
    format_csv,
    format_json,
    minimal_point_sequence,
    parse_csv,
    parse_json,
)
from .runner import RunConfig, resolve_theta, run_verify, summarize_points
from .specparse import parse_conic, parse_rational, parse_real_spec, parse_word_id
from .words import (
    Explicit,
    Fibonacci,
    LetterPair,
    Periodic,
    Sturmian,
    WordSpec,
    explicit_word,
    fibonacci_word,
    periodic_word,
    sturmian_word,
    word_letters,
)

__version__ = "0.1.0"
