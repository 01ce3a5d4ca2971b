"""Run orchestration shared by the CLI and the HTTP service.

A run is described by a RunConfig (two real specs, a horizon, precision
and parallelism knobs, the lambda/theta parameters for the growth
checks).  The handlers here produce plain data: a point list plus a
summary dict, or a full verification report dict.  Presentation (files,
exit codes, HTTP status) is the caller's concern.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .analysis import (
    ExponentEstimate,
    LemmaReport,
    build_report,
    default_tail_from,
    estimate_lambda,
    verify_lemma_W,
    verify_lemma_X,
    verify_lemma_f,
    verify_lemma_main,
)
from .errors import DomainError, InsufficientData, ParseError
from .exact_reals import RealSpec
from .geometry import index_set_I
from .minimal_points import (
    MinimalPoint,
    format_csv,
    format_json,
    minimal_point_sequence,
    parse_csv,
    parse_json,
)
from .specparse import parse_conic, parse_rational, parse_real_spec

__all__ = [
    "RunConfig",
    "resolve_theta",
    "compute_points",
    "load_points",
    "render_points",
    "summarize_points",
    "run_verify",
]

THETA_AUTO_MARGIN = Fraction(21, 20)


@dataclass(frozen=True)
class RunConfig:
    """Validated description of one sweep/verification run."""

    xi_spec: str
    eta_spec: str = "sq:xi"
    x_max: int = 10000
    max_depth: int = 512
    lam: Fraction = Fraction(3, 5)
    theta: Union[Fraction, str] = "auto"
    conic: str = "parabola"
    output: Optional[str] = None
    fmt: str = "csv"
    threads: int = 1

    def __post_init__(self) -> None:
        if not self.xi_spec:
            raise ParseError("xi spec must be given")
        if self.x_max < 1:
            raise DomainError(f"x_max must be >= 1, got {self.x_max}")
        if self.max_depth < 4:
            raise DomainError(f"max_depth must be >= 4, got {self.max_depth}")
        if self.threads < 1:
            raise DomainError(f"threads must be >= 1, got {self.threads}")
        if self.fmt not in ("csv", "json"):
            raise DomainError(f"format must be csv or json, got {self.fmt!r}")
        lam = Fraction(self.lam)
        object.__setattr__(self, "lam", lam)
        if not Fraction(1, 2) < lam < 1:
            raise DomainError(f"lambda must lie in (1/2, 1), got {lam}")
        if self.theta != "auto":
            object.__setattr__(self, "theta", Fraction(self.theta))

    @classmethod
    def from_mapping(cls, raw: dict) -> "RunConfig":
        """Build from string-keyed config (JSON file or query payload)."""
        known = {
            "xi": "xi_spec",
            "eta": "eta_spec",
            "x_max": "x_max",
            "max_depth": "max_depth",
            "lambda": "lam",
            "theta": "theta",
            "conic": "conic",
            "output": "output",
            "format": "fmt",
            "threads": "threads",
        }
        kwargs: dict = {}
        for key, value in raw.items():
            if key not in known:
                raise ParseError(f"unknown config key: {key!r}")
            if value is None:
                continue
            field = known[key]
            if field in ("x_max", "max_depth", "threads"):
                value = int(value)
            elif field == "lam":
                value = parse_rational(str(value))
            elif field == "theta" and str(value) != "auto":
                value = parse_rational(str(value))
            kwargs[field] = value
        if "xi_spec" not in kwargs:
            raise ParseError("config must provide the xi spec")
        return cls(**kwargs)

    def parsed_specs(self) -> tuple[RealSpec, RealSpec]:
        xi = parse_real_spec(self.xi_spec)
        eta = parse_real_spec(self.eta_spec, xi=xi)
        return xi, eta

    def resolved_theta(self) -> Fraction:
        return resolve_theta(self.lam, self.theta)

    def run_metadata(self) -> dict:
        return {
            "xi_spec": self.xi_spec,
            "eta_spec": self.eta_spec,
            "x_max": self.x_max,
            "max_depth": self.max_depth,
        }


def resolve_theta(lam: Fraction, theta: Union[Fraction, str]) -> Fraction:
    """`auto` means the critical value (1-lam)/(2*lam-1) times 21/20."""
    if theta == "auto":
        return (1 - lam) / (2 * lam - 1) * THETA_AUTO_MARGIN
    return Fraction(theta)


def compute_points(cfg: RunConfig) -> list[MinimalPoint]:
    xi, eta = cfg.parsed_specs()
    return minimal_point_sequence(
        xi, eta, cfg.x_max, max_depth=cfg.max_depth, threads=cfg.threads
    )


def load_points(path: str) -> list[MinimalPoint]:
    """Replay ingestion: re-read a sequence export (CSV or JSON)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return parse_json(text)
    return parse_csv(text)


def render_points(points: Sequence[MinimalPoint], fmt: str) -> str:
    if fmt == "json":
        return format_json(points)
    return format_csv(points)


def _exponent_or_none(
    points: Sequence[MinimalPoint],
) -> tuple[Optional[ExponentEstimate], bool]:
    """Exponent estimate over the non-degenerate prefix, plus a flag for
    an exact delta = 0 tail (rationally dependent 1, xi, eta)."""
    usable = list(points)
    zero_delta = False
    while usable and usable[-1].delta.lo == 0:
        zero_delta = True
        usable.pop()
    if len(usable) < 2:
        return None, zero_delta
    return estimate_lambda(usable, default_tail_from(usable)), zero_delta


def summarize_points(points: Sequence[MinimalPoint]) -> dict:
    """Count, final abscissa, tail exponent summary, degeneracy flag."""
    est, zero_delta = _exponent_or_none(points)
    summary: dict = {
        "points": len(points),
        "final_X": points[-1].X,
        "zero_delta": zero_delta,
    }
    if est is not None:
        summary["tail_from"] = est.tail_from
        summary["tail_lambda_min"] = float(est.tail_min)
        summary["tail_argmin"] = est.tail_argmin
    return summary


def _dirichlet_report(points: Sequence[MinimalPoint]) -> LemmaReport:
    """delta_i^2 * X_i <= 1 for every recorded point (certified via the
    enclosure upper bound)."""
    margins = []
    for p in points:
        slack = 1 - p.delta.hi * p.delta.hi * p.X
        margins.append({"i": p.index, "slack": f"{slack.numerator}/{slack.denominator}"})
        if slack < 0:
            return LemmaReport(
                lemma_id="dirichlet",
                verdict="violated",
                checked_range=(points[0].index, points[-1].index),
                margins=tuple(margins),
                witness=p.index,
                detail=f"delta_{p.index}^2 * X_{p.index} > 1",
            )
    return LemmaReport(
        lemma_id="dirichlet",
        verdict="holds-on-horizon",
        checked_range=(points[0].index, points[-1].index),
        margins=tuple(margins),
    )


def run_verify(cfg: RunConfig, points: Optional[Sequence[MinimalPoint]] = None) -> dict:
    """Full verification report for a run (or replayed sequence).

    Sections: exponent estimate, lemmas W/X/f/main plus the Dirichlet
    invariant.  Degenerate (rational) runs skip the exponent section and
    report what remains checkable.
    """
    if points is None:
        points = compute_points(cfg)
    points = list(points)
    if not points:
        raise DomainError("no points to verify")
    est, zero_delta = _exponent_or_none(points)
    lemmas: dict[str, LemmaReport] = {}
    lemmas["dirichlet"] = _dirichlet_report(points)
    if len(points) >= 2:
        lemmas["W"] = verify_lemma_W(points)
    I = index_set_I(points)
    try:
        lemmas["X"] = verify_lemma_X(points, I)
    except InsufficientData as exc:
        lemmas["X"] = LemmaReport(
            lemma_id="X",
            verdict="inconclusive",
            checked_range=(points[0].index, points[-1].index),
            detail=str(exc),
            stats={"I_size": len(I), "I": list(I)},
        )
    form = parse_conic(cfg.conic)
    if len(points) >= 2:
        lemmas["f"] = verify_lemma_f(points, form, cfg.lam)
    lemmas["main"] = verify_lemma_main(points, I, cfg.lam, cfg.resolved_theta())
    run_meta = cfg.run_metadata()
    run_meta["lambda"] = f"{cfg.lam.numerator}/{cfg.lam.denominator}"
    theta = cfg.resolved_theta()
    run_meta["theta"] = f"{theta.numerator}/{theta.denominator}"
    run_meta["conic"] = cfg.conic
    run_meta["zero_delta"] = zero_delta
    return build_report(run_meta, exponent=est, lemmas=lemmas)
