"""Command-line front end.

Subcommands:
    word <word-id> <n>            print n letters, comma-separated
    minimal-points                sweep a pair, export CSV/JSON, print summary
    verify                        run all checks, emit the report JSON
    bounds evertse|measure        the explicit bound calculators

Exit codes: 0 success (and no violated lemma), 2 parse/domain error,
3 precision exhausted (names the offending abscissa), 4 a lemma verdict
is `violated`.  A JSON config file (--config) may hold the same keys as
the flags; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional, Sequence

from .analysis import MeasureParams, evertse_count_log2, measure_w
from .errors import MinPointsError, ParseError, PrecisionExhausted
from .runner import (
    RunConfig,
    compute_points,
    load_points,
    render_points,
    run_verify,
    summarize_points,
)
from .specparse import parse_rational, parse_word_id
from .words import word_letters

LN2 = math.log(2)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minpoints",
        description="Minimal-point sequences for pairs (xi, eta) and "
        "verification of their growth inequalities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_word = sub.add_parser("word", help="print a prefix of a generated word")
    p_word.add_argument("word_id", help="fib(a,b) | sturm([0;...],a,b) | per(...) | expl(...)")
    p_word.add_argument("n", type=int, help="number of letters")

    def add_run_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--xi", help="real spec for xi, e.g. word:fib(1,2)")
        p.add_argument("--eta", help="real spec for eta (default sq:xi)")
        p.add_argument("--x-max", type=int, dest="x_max", help="abscissa horizon (default 10000)")
        p.add_argument("--max-depth", type=int, dest="max_depth", help="refinement cap (default 512)")
        p.add_argument("--threads", type=int, help="sweep thread count (default 1)")
        p.add_argument("--output", help="write the export/report here (default stdout)")
        p.add_argument("--format", dest="fmt", choices=("csv", "json"), help="export format")
        p.add_argument("--config", help="JSON file with the same keys as the flags")

    p_points = sub.add_parser("minimal-points", help="compute and export a sequence")
    add_run_flags(p_points)

    p_verify = sub.add_parser("verify", help="verify the growth inequalities")
    add_run_flags(p_verify)
    p_verify.add_argument("--lambda", dest="lam", help="exponent parameter in (1/2, 1), default 3/5")
    p_verify.add_argument("--theta", help="growth exponent, rational or `auto`")
    p_verify.add_argument("--conic", help="conic spec (default parabola)")
    p_verify.add_argument("--replay", help="re-ingest a sequence export instead of recomputing")

    p_bounds = sub.add_parser("bounds", help="explicit bound calculators")
    bsub = p_bounds.add_subparsers(dest="bounds_command", required=True)

    p_ev = bsub.add_parser("evertse", help="subspace-count bound")
    p_ev.add_argument("--n", type=int, default=3, help="number of variables (default 3)")
    p_ev.add_argument("--delta", required=True, help="rational in (0, 1]")
    p_ev.add_argument("--D", type=int, required=True, dest="D", help="degree bound")
    group = p_ev.add_mutually_exclusive_group()
    group.add_argument("--log2", action="store_true", help="present as log2 (default)")
    group.add_argument("--ln", action="store_true", help="present as natural log")

    p_me = bsub.add_parser("measure", help="transcendence-measure values")
    p_me.add_argument("--c", default="1", help="positive rational constant (default 1)")
    p_me.add_argument("--d", type=int, required=True, help="degree bound, >= 3")
    p_me.add_argument("--H", type=int, required=True, dest="H", help="height bound, >= 2")
    group = p_me.add_mutually_exclusive_group()
    group.add_argument("--log2", action="store_true", help="present the bound as log2")
    group.add_argument("--ln", action="store_true", help="present the bound as natural log (default)")

    return parser


def _config_from_args(args: argparse.Namespace, extra: dict) -> RunConfig:
    raw: dict = {}
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise ParseError("config file must hold a JSON object")
        raw.update(loaded)
    flag_keys = {
        "xi": args.xi,
        "eta": args.eta,
        "x_max": args.x_max,
        "max_depth": args.max_depth,
        "threads": args.threads,
        "output": args.output,
        "format": args.fmt,
    }
    flag_keys.update(extra)
    for key, value in flag_keys.items():
        if value is not None:
            raw[key] = value
    return RunConfig.from_mapping(raw)


def _write_or_print(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _summary_line(summary: dict) -> str:
    parts = [f"points={summary['points']}", f"final_X={summary['final_X']}"]
    if "tail_lambda_min" in summary:
        parts.append(f"tail_from={summary['tail_from']}")
        parts.append(f"tail_lambda_min={summary['tail_lambda_min']:.6f}")
        parts.append(f"tail_argmin={summary['tail_argmin']}")
    if summary.get("zero_delta"):
        parts.append("delta=0 (1, xi, eta rationally dependent: run terminated)")
    return " ".join(parts)


def _cmd_word(args: argparse.Namespace) -> int:
    spec = parse_word_id(args.word_id)
    letters = word_letters(spec, args.n)
    print(",".join(str(t) for t in letters))
    return 0


def _cmd_minimal_points(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args, {})
    points = compute_points(cfg)
    text = render_points(points, cfg.fmt)
    _write_or_print(text, cfg.output)
    line = _summary_line(summarize_points(points))
    stream = sys.stdout if cfg.output else sys.stderr
    print(line, file=stream)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    extra = {}
    if args.lam is not None:
        extra["lambda"] = args.lam
    if args.theta is not None:
        extra["theta"] = args.theta
    if args.conic is not None:
        extra["conic"] = args.conic
    cfg = _config_from_args(args, extra)
    points = load_points(args.replay) if args.replay else None
    report = run_verify(cfg, points=points)
    text = json.dumps(report, indent=2) + "\n"
    _write_or_print(text, cfg.output)
    verdicts = {name: sec["verdict"] for name, sec in report["lemmas"].items()}
    if cfg.output:
        print("verdicts: " + " ".join(f"{k}={v}" for k, v in verdicts.items()))
    if any(v == "violated" for v in verdicts.values()):
        return 4
    return 0


def _cmd_bounds(args: argparse.Namespace) -> int:
    if args.bounds_command == "evertse":
        value = evertse_count_log2(args.n, parse_rational(args.delta), args.D)
        if args.ln:
            print(f"evertse_ln = {value * LN2:.12f}")
        else:
            print(f"evertse_log2 = {value:.12f}")
        return 0
    w, log_bound = measure_w(MeasureParams(parse_rational(args.c), args.d, args.H))
    print(f"w = {w:.12f}")
    if args.log2:
        print(f"log2_bound = {log_bound / LN2:.12f}")
    else:
        print(f"log_bound = {log_bound:.12f}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "word": _cmd_word,
        "minimal-points": _cmd_minimal_points,
        "verify": _cmd_verify,
        "bounds": _cmd_bounds,
    }
    try:
        return handlers[args.command](args)
    except PrecisionExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except MinPointsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: bad config JSON: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
