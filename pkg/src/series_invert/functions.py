"""Evaluable real functions around 0, with optional exact Taylor data."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

from .expr import ExpressionNode, eval_expression, is_analytic, parse_expression, series_expand
from .errors import NotExpandable
from .series import TruncatedSeries

__all__ = ["SmoothFunction", "from_expression"]


@dataclass(frozen=True)
class SmoothFunction:
    """A real function of one variable, smooth around 0.

    ``radius`` bounds the interval ``[-radius, radius]`` on which the function
    is strictly monotone (the inverse branch searched by the oracle);
    ``domain`` bounds where it may be evaluated at all.

    ``fn`` evaluates in binary64.  ``mp_fn``, when present, evaluates the same
    function in :mod:`mpmath` at the ambient working precision and lets the
    remainder measurements resolve values far below binary64 resolution.
    ``exact_series`` is the function's jet at 0 when it is known exactly;
    for a flat-perturbed function this is still its jet, but ``analytic`` is
    False because the Taylor series does not represent the function.
    """

    fn: Callable[[float], float]
    mp_fn: Callable | None = None
    exact_series: TruncatedSeries | None = None
    analytic: bool = True
    radius: float = math.inf
    name: str = ""
    domain: float = math.inf

    def __call__(self, x):
        return self.fn(x)

    def without_series(self) -> "SmoothFunction":
        """The same function with its exact jet hidden (forces measured jets)."""
        return replace(self, exact_series=None)


def from_expression(e: ExpressionNode | str, order: int | None = 16, *,
                    radius: float = math.inf, domain: float = math.inf,
                    name: str | None = None) -> SmoothFunction:
    """Wrap an expression as a :class:`SmoothFunction`.

    The jet through ``order`` (from :func:`series_expand`) is attached as
    ``exact_series``; pass ``order=None`` to omit it.  Expressions without a
    power series at 0 get no jet.
    """
    if isinstance(e, str):
        e = parse_expression(e)
    exact = None
    if order is not None:
        try:
            exact = series_expand(e, order)
        except NotExpandable:
            exact = None

    def fn(x):
        return eval_expression(e, x)

    def mp_fn(x):
        return eval_expression(e, x, backend="mpmath")

    return SmoothFunction(fn, mp_fn, exact, is_analytic(e), radius,
                          name if name is not None else str(e), domain)
