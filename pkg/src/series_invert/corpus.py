"""Named test functions with known properties.

Every entry vanishes at 0 with nonzero slope there, so every entry is
revertible.  Names are stable identifiers used on the command line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UnknownEntry
from .expr import ExpressionNode, is_analytic, parse_expression, series_expand
from .functions import SmoothFunction, from_expression
from .series import TruncatedSeries

__all__ = ["CorpusEntry", "corpus_lookup", "corpus_names", "CORPUS"]

EXACT_ORDER = 32


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    text: str
    expression: ExpressionNode
    exact_series: TruncatedSeries | None
    analytic: bool
    default_window: tuple
    monotone_radius: float
    domain: float = math.inf
    verify_windows: tuple = ((1e-2, 1e-1), (1e-3, 1e-2))

    def series(self, N: int, mode: str | None = None) -> TruncatedSeries:
        return series_expand(self.expression, N, mode)

    def smooth_function(self, order: int | None = 16) -> SmoothFunction:
        return from_expression(self.expression, order, radius=self.monotone_radius,
                               domain=self.domain, name=self.name)


def _entry(name, text, window=(1e-3, 1e-1), radius=1.0, **extra):
    e = parse_expression(text)
    exact = series_expand(e, EXACT_ORDER)
    return CorpusEntry(name, text, e, exact if exact.ring.exact else None, is_analytic(e),
                       tuple(window), radius, **extra)


CORPUS = {e.name: e for e in (
    _entry("identity", "x", radius=10.0),
    _entry("quadratic", "x - x^2", radius=0.5),
    _entry("lambert", "x*exp(x)", radius=1.0),
    _entry("sine", "sin(x)", radius=math.pi / 2),
    _entry("tangent", "tan(x)", radius=math.pi / 2, domain=math.pi / 2),
    _entry("scaled", "2*x + x^2", radius=1.0),
    _entry("flat-identity", "x + flatbump(x)", window=(0.28, 0.55), radius=1.0,
           verify_windows=((0.35, 0.55), (0.28, 0.40))),
)}


def corpus_names() -> list:
    return list(CORPUS)


def corpus_lookup(name: str) -> CorpusEntry:
    try:
        return CORPUS[name]
    except KeyError:
        raise UnknownEntry(f"no corpus entry {name!r}; known: {', '.join(CORPUS)}") from None
