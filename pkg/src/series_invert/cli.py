"""Command-line interface.

    series-invert revert  --function "x - x^2" --order 8 --mode rational
    series-invert burmann --function "x - x^2" --outer "x^2" --order 6
    series-invert jet     --corpus sine --order 5 --measured
    series-invert verify  --corpus flat-identity --order 6
    series-invert bench   --format csv
    series-invert corpus

Exit codes: 0 success, 2 non-revertible input or ill-conditioned jet,
3 parse/IO/usage errors, 4 reversion algorithms disagree (a bug),
5 numeric oracle failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field

from . import series as S
from .corpus import CORPUS, corpus_lookup
from .errors import (
    DomainTooSmall,
    ExpressionSyntaxError,
    IllConditionedJet,
    InsufficientOrder,
    NotExpandable,
    NotRevertible,
    OracleFailure,
    SeriesInvertError,
    UnknownEntry,
    WindowsNotNested,
)
from .expr import parse_expression, render, series_expand
from .functions import SmoothFunction, from_expression
from .reports import Report, emit_report
from .reversion import lagrange_burmann, lagrange_revert, newton_revert, triangular_revert
from .smooth import (
    classify_decay,
    estimate_remainder_order,
    extract_jet,
    inverse_taylor,
    DEFAULT_BASE_STEP,
)

__all__ = ["RunConfig", "main", "cmd_revert", "cmd_burmann", "cmd_jet", "cmd_verify",
           "cmd_bench", "cmd_corpus", "AlgorithmDisagreement"]

EXIT_OK = 0
EXIT_NOT_REVERTIBLE = 2
EXIT_INPUT = 3
EXIT_DISAGREEMENT = 4
EXIT_ORACLE = 5

FLOAT_AGREEMENT = 1e-10
DEFAULT_WINDOWS = ((1e-2, 1e-1), (1e-3, 1e-2))
BENCH_ORDERS = (32, 64, 128, 256)
ALGORITHMS = {
    "lagrange": lagrange_revert,
    "newton": newton_revert,
    "triangular": triangular_revert,
}


class AlgorithmDisagreement(SeriesInvertError):
    pass


class UsageError(SeriesInvertError):
    pass


@dataclass
class RunConfig:
    command: str
    function: str | None = None
    coeffs: str | None = None
    corpus: str | None = None
    order: int = 8
    mode: str | None = None
    windows: list = field(default_factory=list)
    samples: int = 32
    out: str | None = None
    format: str = "json"
    outer: str = "x"
    base_step: float = DEFAULT_BASE_STEP
    measured: bool = False
    orders: tuple = BENCH_ORDERS

    def __post_init__(self):
        sources = [s for s in (self.function, self.coeffs, self.corpus) if s is not None]
        if len(sources) > 1:
            raise UsageError("give exactly one of --function, --coeffs, --corpus")

    @property
    def has_source(self):
        return any(s is not None for s in (self.function, self.coeffs, self.corpus))


@dataclass
class _Source:
    label: str
    series_at: object  # callable N, mode -> TruncatedSeries
    smooth: SmoothFunction
    windows: tuple


def _resolve(config: RunConfig, order: int) -> _Source:
    if not config.has_source:
        raise UsageError("give one of --function, --coeffs, --corpus")
    if config.corpus is not None:
        entry = corpus_lookup(config.corpus)
        return _Source(entry.name, entry.series, entry.smooth_function(max(order, 16)),
                       entry.verify_windows)
    if config.function is not None:
        node = parse_expression(config.function)
        return _Source(render(node), lambda N, mode=None: series_expand(node, N, mode),
                       from_expression(node, max(order, 16)), DEFAULT_WINDOWS)
    try:
        with open(config.coeffs, encoding="utf-8") as fh:
            poly = S.from_json(json.load(fh))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read coefficients from {config.coeffs}: {exc}") from None

    def series_at(N, mode=None):
        if N > poly.order:
            raise InsufficientOrder(f"coefficient file has order {poly.order} < {N}")
        s = S.truncate(poly, N)
        if mode == "float" and s.ring.exact:
            return S.to_float(s)
        if mode == "rational" and not s.ring.exact:
            raise NotExpandable("float coefficients cannot be used in rational mode")
        return s

    def mp_eval(t):
        return S.eval_at(poly, t)

    smooth = SmoothFunction(lambda t: float(S.eval_at(poly, float(t))), mp_eval,
                            poly, True, math.inf, config.coeffs)
    return _Source(config.coeffs, series_at, smooth, DEFAULT_WINDOWS)


def _input_series(config, source, order):
    s = source.series_at(order, None if config.mode is None else config.mode)
    if config.mode == "float" and s.ring.exact:
        s = S.to_float(s)
    return s


def _timed(fn, *args):
    start = time.perf_counter()
    value = fn(*args)
    return value, time.perf_counter() - start


def _agreement(result, reference):
    return S.relative_diff(result, reference)


def _agrees(a, b):
    if a.ring.exact:
        return a.coeffs == b.coeffs
    return S.relative_diff(a, b) <= FLOAT_AGREEMENT


# -- commands ----------------------------------------------------------------------

def cmd_revert(config: RunConfig) -> Report:
    """Run all three reversion algorithms and report the agreed inverse."""
    source = _resolve(config, config.order)
    f = _input_series(config, source, config.order)
    results = {}
    timing = {}
    for name, algorithm in ALGORITHMS.items():
        res, timing[name] = _timed(algorithm, f, config.order)
        results[name] = res.series
    ref = results["triangular"]
    diffs = {name: _agreement(s, ref) for name, s in results.items()}
    for name, s in results.items():
        if not _agrees(s, ref):
            raise AlgorithmDisagreement(
                f"{name} disagrees with triangular (max relative diff {diffs[name]:g})")
    g = results["lagrange"]
    payload = {
        "command": "revert",
        "function": source.label,
        "order": config.order,
        "mode": f.mode,
        "input": S.to_json(f),
        "series": S.to_json(g),
        "agreement": {name: diffs[name] for name in ("lagrange", "newton")},
        "timing": timing,
    }
    coeffs = S.to_json(g)["coeffs"]
    records = [{"k": k, "coefficient": c} for k, c in enumerate(coeffs)]
    return Report(payload, records)


def cmd_burmann(config: RunConfig) -> Report:
    """Coefficients of ``H(f^-1(y))`` for ``H`` given by ``--outer``."""
    source = _resolve(config, config.order)
    f = _input_series(config, source, config.order)
    H_node = parse_expression(config.outer)
    H = series_expand(H_node, config.order, f.mode)
    if H.mode != f.mode:
        H = S.to_float(H)
    result, elapsed = _timed(lagrange_burmann, H, f, config.order)
    check = S.compose(H, lagrange_revert(f, config.order).series)
    if not _agrees(result, check):
        raise AlgorithmDisagreement("Lagrange-Burmann disagrees with composition")
    payload = {
        "command": "burmann",
        "function": source.label,
        "outer": render(H_node),
        "order": config.order,
        "mode": f.mode,
        "series": S.to_json(result),
        "timing": {"lagrange_burmann": elapsed},
    }
    coeffs = S.to_json(result)["coeffs"]
    return Report(payload, [{"k": k, "coefficient": c} for k, c in enumerate(coeffs)])


def _jet_for(config, source):
    fun = source.smooth.without_series() if config.measured else source.smooth
    return extract_jet(fun, config.order, config.base_step)


def cmd_jet(config: RunConfig) -> Report:
    """The jet of the function and the inverse Taylor polynomial built from it."""
    source = _resolve(config, config.order)
    jet = _jet_for(config, source)
    P = inverse_taylor(jet, config.order)
    payload = {
        "command": "jet",
        "function": source.label,
        "order": config.order,
        "jet": jet.to_json(),
        "polynomial": S.to_json(P),
    }
    jc = S.to_json(jet.series)["coeffs"]
    records = [{"k": k, "coefficient": c, "error": float(e), "inverse_coefficient": p}
               for k, (c, e, p) in enumerate(zip(jc, jet.per_coeff_error, S.to_json(P)["coeffs"]))]
    return Report(payload, records)


def cmd_verify(config: RunConfig) -> Report:
    """Jet, inverse polynomial, remainder slopes over nested windows, verdict."""
    source = _resolve(config, config.order)
    jet = _jet_for(config, source)
    P = inverse_taylor(jet, config.order)
    windows = [tuple(w) for w in config.windows] or list(source.windows)
    reports = [estimate_remainder_order(source.smooth, P, w, config.samples) for w in windows]
    verdict = classify_decay(reports) if len(reports) > 1 else reports[0].verdict
    payload = {
        "command": "verify",
        "function": source.label,
        "order": config.order,
        "analytic": source.smooth.analytic,
        "jet": jet.to_json(),
        "polynomial": S.to_json(P),
        "reports": [r.to_json() for r in reports],
        "verdict": verdict,
    }
    records = []
    for r in reports:
        row = r.to_json()
        records.append({
            "y_min": row["window"][0], "y_max": row["window"][1], "samples": row["samples"],
            "slope": row["slope"], "slope_stderr": row["slope_stderr"],
            "inner_slope": row["inner_slope"], "noise_floor_hit": row["noise_floor_hit"],
            "verdict": row["verdict"], "final_verdict": verdict,
        })
    return Report(payload, records)


def cmd_bench(config: RunConfig) -> Report:
    """Time the three algorithms at several orders in both rings."""
    if not config.has_source:
        config = RunConfig(**{**config.__dict__, "corpus": "quadratic"})
    source = _resolve(config, max(config.orders))
    rows = []
    for mode in ("rational", "float"):
        for order in config.orders:
            f = source.series_at(order, None)
            f = S.to_float(f) if mode == "float" else f
            if mode == "rational" and not f.ring.exact:
                raise NotExpandable("the benchmark function has no exact rational series")
            results = {}
            times = {}
            for name, algorithm in ALGORITHMS.items():
                res, times[name] = _timed(algorithm, f, order)
                results[name] = res.series
            for name in ALGORITHMS:
                rows.append({
                    "algorithm": name, "mode": mode, "order": order,
                    "wall_time": times[name],
                    "max_coeff_diff_vs_triangular": _agreement(results[name], results["triangular"]),
                })
    payload = {
        "command": "bench",
        "function": source.label,
        "rows": [{k: v for k, v in r.items() if k != "wall_time"} for r in rows],
        "timing": {f"{r['algorithm']}/{r['mode']}/{r['order']}": r["wall_time"] for r in rows},
    }
    return Report(payload, rows)


def cmd_corpus(config: RunConfig) -> Report:
    """List the shipped corpus."""
    entries = []
    for entry in CORPUS.values():
        entries.append({
            "name": entry.name,
            "expression": entry.text,
            "analytic": entry.analytic,
            "default_window": list(entry.default_window),
            "monotone_radius": entry.monotone_radius,
            "exact_series": None if entry.exact_series is None
            else S.to_json(S.truncate(entry.exact_series, config.order)),
        })
    records = [{"name": e["name"], "expression": e["expression"], "analytic": e["analytic"],
                "window_min": e["default_window"][0], "window_max": e["default_window"][1]}
               for e in entries]
    return Report({"command": "corpus", "entries": entries}, records)


COMMANDS = {
    "revert": cmd_revert,
    "burmann": cmd_burmann,
    "jet": cmd_jet,
    "verify": cmd_verify,
    "bench": cmd_bench,
    "corpus": cmd_corpus,
}


# -- argument parsing --------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="series-invert",
                     description="Power series reversion and smooth-case inversion checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, order=8):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--function", metavar="TEXT", help="expression in x")
        src.add_argument("--coeffs", metavar="PATH", help="JSON series file")
        src.add_argument("--corpus", metavar="NAME", help="corpus entry name")
        p.add_argument("--order", type=int, default=order)
        p.add_argument("--mode", choices=("rational", "float"))
        p.add_argument("--out", metavar="PATH")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    common(sub.add_parser("revert", help="invert a series with all three algorithms"))
    p = sub.add_parser("burmann", help="coefficients of H(f^-1(y))")
    common(p)
    p.add_argument("--outer", metavar="TEXT", default="x", help="the series H as an expression")
    for name, helptext in (("jet", "jet and inverse Taylor polynomial"),
                           ("verify", "measure the inversion remainder order")):
        p = sub.add_parser(name, help=helptext)
        common(p, order=5)
        p.add_argument("--base-step", type=float, default=DEFAULT_BASE_STEP)
        p.add_argument("--measured", action="store_true",
                       help="estimate the jet by finite differences even if it is known exactly")
        if name == "verify":
            p.add_argument("--window", nargs=2, type=float, action="append", metavar=("A", "B"),
                           default=[], dest="windows")
            p.add_argument("--samples", type=int, default=32)
    p = sub.add_parser("bench", help="time the reversion algorithms")
    common(p)
    p.add_argument("--orders", type=int, nargs="+", default=list(BENCH_ORDERS))
    p = sub.add_parser("corpus", help="list the function corpus")
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def _config(args) -> RunConfig:
    values = {k: v for k, v in vars(args).items() if v is not None}
    if "orders" in values:
        values["orders"] = tuple(values["orders"])
    return RunConfig(**values)


_EXIT_CODES = (
    (AlgorithmDisagreement, EXIT_DISAGREEMENT),
    (NotRevertible, EXIT_NOT_REVERTIBLE),
    (IllConditionedJet, EXIT_NOT_REVERTIBLE),
    (DomainTooSmall, EXIT_NOT_REVERTIBLE),
    (OracleFailure, EXIT_ORACLE),
    (ExpressionSyntaxError, EXIT_INPUT),
    (NotExpandable, EXIT_INPUT),
    (UnknownEntry, EXIT_INPUT),
    (InsufficientOrder, EXIT_INPUT),
    (WindowsNotNested, EXIT_INPUT),
    (UsageError, EXIT_INPUT),
    (OSError, EXIT_INPUT),
    (SeriesInvertError, EXIT_INPUT),
    (ValueError, EXIT_INPUT),
)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config(args)
        report = COMMANDS[config.command](config)
        emit_report(report, config.format, config.out)
    except Exception as exc:
        for kind, code in _EXIT_CODES:
            if isinstance(exc, kind):
                print(f"series-invert: {type(exc).__name__}: {exc}", file=sys.stderr)
                return code
        raise
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
