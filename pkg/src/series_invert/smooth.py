"""The smooth-case pipeline.

1. :func:`extract_jet` recovers the Taylor coefficients of a smooth function
   at 0 from function values alone.
2. :func:`inverse_taylor` turns a jet into the Taylor polynomial ``P_N`` of
   the inverse function, using nothing but the jet.
3. :func:`estimate_remainder_order` measures how fast ``f^-1(y) - P_N(y)``
   decays as ``y -> 0`` by a log-log fit against the numeric inverse, and
   :func:`classify_decay` combines several windows into one verdict.

For an analytic ``f`` the remainder decays like ``|y|^(N+1)`` (or faster by
parity).  For ``f = x + flatbump(x)`` the jet is that of the identity, so
``P_N(y) = y`` for every ``N``, while the true remainder ``~exp(-1/y^2)``
has local log-log slope ``2/y^2``: faster than any power.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import series as S
from ._threads import thread_count
from .errors import (
    DomainError,
    DomainTooSmall,
    IllConditionedJet,
    NotRevertible,
    StepUnderflow,
    WindowsNotNested,
)
from .functions import SmoothFunction
from .oracle import numeric_inverse
from .reversion import lagrange_revert
from .series import TruncatedSeries

__all__ = [
    "Jet",
    "RemainderReport",
    "Thresholds",
    "THRESHOLDS",
    "POLYNOMIAL",
    "SUPER_POLYNOMIAL",
    "INCONCLUSIVE",
    "extract_jet",
    "inverse_taylor",
    "estimate_remainder_order",
    "classify_decay",
    "noise_floor",
]

POLYNOMIAL = "consistent-with-order-(N+1)"
SUPER_POLYNOMIAL = "super-polynomial"
INCONCLUSIVE = "inconclusive"

DEFAULT_BASE_STEP = 1 / 16
DEFAULT_LEVELS = 4
MIN_STEP = 2.0 ** -40
MP_DIGITS = 50
EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class Thresholds:
    """Decision constants shared by all verdicts."""

    slope_slack: float = 0.3         # polynomial verdict needs slope >= N + 1 - slack
    super_margin: float = 2.0        # super-polynomial inner slope must exceed N + margin
    nested_increase: float = 1.0     # per-window slope increase for super-polynomial
    stable_spread: float = 0.5       # polynomial slopes agree within this across windows
    binary64_floor: float = 1e-13    # relative noise floor of a binary64 oracle
    min_points: int = 3              # fewest usable samples for a fit


THRESHOLDS = Thresholds()


# -- jets --------------------------------------------------------------------------

@dataclass(frozen=True)
class Jet:
    series: TruncatedSeries
    per_coeff_error: tuple
    source: str  # "exact" or "finite-difference"

    def __post_init__(self):
        if len(self.per_coeff_error) != self.series.order + 1:
            raise ValueError("one error estimate per coefficient is required")
        if self.source not in ("exact", "finite-difference"):
            raise ValueError(f"unknown jet source {self.source!r}")
        if self.source == "exact" and any(e != 0 for e in self.per_coeff_error):
            raise ValueError("exact jets carry zero error estimates")

    @property
    def order(self):
        return self.series.order

    def to_json(self) -> dict:
        return {"series": S.to_json(self.series),
                "per_coeff_error": [float(e) for e in self.per_coeff_error],
                "source": self.source}


def _central_difference(f, k, h):
    """``f^(k)(0)`` estimate on a symmetric stencil, plus the size of its terms."""
    total = 0.0
    size = 0.0
    for j in range(k + 1):
        c = (-1) ** j * math.comb(k, j)
        v = c * f((k / 2 - j) * h)
        total += v
        size += abs(v)
    return total / h ** k, size / h ** k


def _richardson(f, k, h, levels):
    """Best entry of the Richardson tableau over steps ``h, h/2, ...``.

    Central differences have error expansions in ``h^2``, so column ``m``
    cancels the ``h^(2m)`` term.  Each extrapolated entry is scored by its
    last correction (against its left and upper-left neighbours) and the
    lowest-scored entry is returned with that score as its error estimate.
    A roundoff estimate for the finest stencil bounds the score from below.
    """
    rows = []
    sizes = []
    best, best_err, best_row = None, math.inf, 0
    for i in range(levels):
        d, size = _central_difference(f, k, h / 2 ** i)
        sizes.append(size)
        row = [d]
        for m in range(1, i + 1):
            row.append(row[m - 1] + (row[m - 1] - rows[i - 1][m - 1]) / (4 ** m - 1))
            err = max(abs(row[m] - row[m - 1]), abs(row[m] - rows[i - 1][m - 1]))
            if err < best_err:
                best, best_err, best_row = row[m], err, i
        rows.append(row)
    if best is None:
        best, best_err, best_row = rows[-1][-1], math.inf, levels - 1
    # extrapolation weights sum to at most ~2 in absolute value
    roundoff = 2 * EPS * sizes[best_row]
    return best, max(best_err, roundoff)


def extract_jet(fun: SmoothFunction, N: int, base_step: float = DEFAULT_BASE_STEP, *,
                levels: int = DEFAULT_LEVELS, use_exact: bool = True) -> Jet:
    """Taylor coefficients ``f^(k)(0)/k!`` for ``k = 0..N``.

    When ``fun`` carries an exact jet (and ``use_exact`` is true) it is
    returned directly.  Otherwise coefficient ``k`` comes from a central
    difference of order ``k`` with step ``base_step * sqrt(k)``, Richardson
    extrapolated over ``levels`` halvings of that step.
    """
    if N < 1:
        raise ValueError("jet order must be at least 1")
    if use_exact and fun.exact_series is not None and fun.exact_series.order >= N:
        return Jet(S.truncate(fun.exact_series, N), (0,) * (N + 1), "exact")
    if base_step <= 0:
        raise ValueError("base_step must be positive")
    if base_step * 2.0 ** -levels < MIN_STEP:
        raise StepUnderflow(f"finest step {base_step * 2.0 ** -levels:g} is below 2^-40")
    reach = max(k / 2 * base_step * math.sqrt(k) for k in range(1, N + 1))
    if reach > fun.domain:
        raise DomainTooSmall(f"stencil reaches {reach:g}, beyond the domain radius {fun.domain:g}")

    def f(t):
        try:
            return float(fun(t))
        except (DomainError, ValueError, ZeroDivisionError, OverflowError) as exc:
            raise DomainTooSmall(f"cannot evaluate at {t:g}: {exc}") from None

    coeffs = [f(0.0)]
    errors = [0.0]
    for k in range(1, N + 1):
        d, err = _richardson(f, k, base_step * math.sqrt(k), levels)
        fact = math.factorial(k)
        coeffs.append(float(d) / fact)
        errors.append(float(err) / fact)
    return Jet(S.series(coeffs, "float"), tuple(errors), "finite-difference")


def inverse_taylor(jet: Jet, N: int | None = None) -> TruncatedSeries:
    """Degree-``N`` Taylor polynomial of ``f^-1`` from the jet of ``f`` alone.

    A constant coefficient within its error bar of 0 is clamped to 0; the
    linear coefficient must exceed ten times its error bar.
    """
    if N is None:
        N = jet.order
    if N > jet.order:
        raise ValueError(f"jet of order {jet.order} cannot give degree {N}")
    coeffs = [float(c) for c in jet.series.coeffs[: N + 1]]
    err = [float(e) for e in jet.per_coeff_error[: N + 1]]
    if abs(coeffs[0]) > max(10 * err[0], 1e-12):
        raise NotRevertible(f"f(0) = {coeffs[0]:g} is not 0 within its error bar")
    coeffs[0] = 0.0
    if coeffs[1] == 0:
        raise NotRevertible("f'(0) = 0")
    if abs(coeffs[1]) <= 10 * err[1]:
        raise IllConditionedJet(
            f"f'(0) = {coeffs[1]:g} is not resolved (error {err[1]:g}); shrink the step")
    return lagrange_revert(S.series(coeffs, "float"), N).series


# -- remainder measurements --------------------------------------------------------

@dataclass(frozen=True)
class RemainderReport:
    poly_order: int
    window: tuple
    sample_count: int
    slope: float
    slope_stderr: float
    noise_floor_hit: bool
    verdict: str
    inner_slope: float = math.nan
    points: tuple = field(default=(), compare=False)

    def __post_init__(self):
        lo, hi = self.window
        if not 0 < lo < hi:
            raise ValueError("window must satisfy 0 < y_min < y_max")

    def to_json(self) -> dict:
        def num(v):
            return None if v is None or math.isnan(v) else float(v)
        return {
            "poly_order": self.poly_order,
            "window": [float(self.window[0]), float(self.window[1])],
            "samples": self.sample_count,
            "slope": num(self.slope),
            "slope_stderr": num(self.slope_stderr),
            "noise_floor_hit": self.noise_floor_hit,
            "verdict": self.verdict,
            "inner_slope": num(self.inner_slope),
            "points": [[float(y), float(r)] for y, r in self.points],
        }


def noise_floor(x, precision: int | None = None) -> float:
    """Smallest remainder distinguishable from oracle error at ``x = f^-1(y)``.

    ``1e-13 * max(1, |x|)`` for a binary64 oracle; with ``precision`` decimal
    digits the relative level is ``10**(3 - precision)`` instead.
    """
    rel = THRESHOLDS.binary64_floor if precision is None else 10.0 ** (3 - precision)
    return rel * max(1.0, abs(float(x)))


def _fit(logy, logr):
    n = len(logy)
    if n < 2:
        return math.nan, math.nan
    A = np.vstack([logy, np.ones(n)]).T
    coef = np.linalg.lstsq(A, logr, rcond=None)[0]
    slope = float(coef[0])
    if n < 3:
        return slope, math.nan
    resid = logr - A @ coef
    sxx = np.sum((logy - logy.mean()) ** 2)
    stderr = math.sqrt(float(np.sum(resid ** 2)) / (n - 2) / sxx)
    return slope, stderr


def _sample(fun, P, y, precision):
    """``(|f^-1(y) - P(y)|, f^-1(y))`` at one point."""
    if precision is None:
        x = numeric_inverse(fun, y)
        return abs(x - S.eval_at(P, y)), x
    import mpmath
    with mpmath.workdps(precision):
        x = numeric_inverse(fun, y, 10.0 ** (1 - precision), precision=precision)
        r = abs(x - S.eval_at(P, mpmath.mpf(y)))
        return float(r), float(x)


def _side(fun, P, ys, precision, workers):
    def one(y):
        return _sample(fun, P, y, precision)
    if workers > 1 and len(ys) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(one, ys))
    else:
        values = [one(y) for y in ys]
    kept = [(abs(y), r) for y, (r, x) in zip(ys, values) if r > noise_floor(x, precision)]
    kept.sort()
    return kept, len(kept) < len(ys)


def _side_slopes(kept, y_split, cfg):
    if len(kept) < cfg.min_points:
        return math.nan, math.nan, math.nan
    logy = np.log([y for y, _ in kept])
    logr = np.log([r for _, r in kept])
    slope, stderr = _fit(logy, logr)
    inner = logy <= math.log(y_split)
    inner_slope = _fit(logy[inner], logr[inner])[0] if inner.sum() >= cfg.min_points else math.nan
    return slope, stderr, inner_slope


def estimate_remainder_order(fun: SmoothFunction, P: TruncatedSeries, window, samples: int = 32, *,
                             precision="auto", config: Thresholds = THRESHOLDS,
                             workers: int | None = None) -> RemainderReport:
    """Fit the log-log decay rate of ``|f^-1(y) - P(y)|`` over ``window``.

    ``samples`` log-spaced points are taken in ``[y_min, y_max]`` and again
    in the mirrored negative window; points whose remainder is below the
    oracle noise floor are dropped.  The reported slope is the smaller of
    the two sides.  A second fit over the lower half of the window (in log
    scale) detects decay that steepens toward 0.

    ``precision="auto"`` measures with ``mpmath`` at 50 digits when ``fun``
    has an extended-precision evaluator and in binary64 otherwise; pass
    ``None`` to force binary64 or an integer digit count.
    """
    y_min, y_max = (float(w) for w in window)
    if not 0 < y_min < y_max:
        raise ValueError("window must satisfy 0 < y_min < y_max")
    if samples < 8:
        raise ValueError("at least 8 samples are required")
    if precision == "auto":
        precision = MP_DIGITS if fun.mp_fn is not None else None
    if workers is None:
        workers = thread_count() if precision is not None else 1
    N = P.order
    ys = np.geomspace(y_min, y_max, samples).tolist()
    y_split = math.sqrt(y_min * y_max)

    sides = []
    points = []
    hit = False
    for sign in (1.0, -1.0):
        kept, side_hit = _side(fun, P, [sign * y for y in ys], precision, workers)
        hit = hit or side_hit
        points.extend((sign * y, r) for y, r in kept)
        sides.append(_side_slopes(kept, y_split, config))

    slope, stderr, inner = min(sides, key=lambda s: (math.inf if math.isnan(s[0]) else s[0]))
    if any(math.isnan(s[0]) for s in sides):
        slope, stderr, inner = math.nan, math.nan, math.nan

    if hit or math.isnan(slope):
        verdict = INCONCLUSIVE
    elif all(not math.isnan(s[2]) and s[2] >= s[0] + config.nested_increase
             and s[2] > N + config.super_margin for s in sides):
        verdict = SUPER_POLYNOMIAL
    elif slope >= N + 1 - config.slope_slack:
        verdict = POLYNOMIAL
    else:
        verdict = INCONCLUSIVE
    return RemainderReport(N, (y_min, y_max), samples, slope, stderr, hit, verdict,
                           inner, tuple(sorted(points)))


def _check_nested(reports):
    if len(reports) < 2:
        raise WindowsNotNested("at least two windows are needed")
    ordered = sorted(reports, key=lambda r: -r.window[1])
    for outer, inner in zip(ordered, ordered[1:]):
        if not (inner.window[1] < outer.window[1] and inner.window[0] <= outer.window[0]):
            raise WindowsNotNested(
                f"window {inner.window} does not move toward 0 from {outer.window}")
    return ordered


def classify_decay(reports, config: Thresholds = THRESHOLDS) -> str:
    """Combine reports over windows shrinking toward 0 into one verdict.

    Windows must have strictly decreasing upper ends and non-increasing lower
    ends.  Polynomial decay of order ``N+1`` means every slope is at least
    ``N + 1 - slack`` and all agree within ``stable_spread``; super-polynomial
    decay means the slope grows by at least ``nested_increase`` at every
    shrink and ends above ``N + super_margin``.
    """
    ordered = _check_nested(list(reports))
    orders = {r.poly_order for r in ordered}
    if len(orders) != 1:
        raise ValueError(f"reports mix polynomial orders {sorted(orders)}")
    N = orders.pop()
    slopes = [r.slope for r in ordered]
    if any(r.noise_floor_hit for r in ordered) or any(math.isnan(s) for s in slopes):
        return INCONCLUSIVE
    if all(b - a >= config.nested_increase for a, b in zip(slopes, slopes[1:])) \
            and slopes[-1] > N + config.super_margin:
        return SUPER_POLYNOMIAL
    if max(slopes) - min(slopes) <= config.stable_spread \
            and min(slopes) >= N + 1 - config.slope_slack:
        return POLYNOMIAL
    return INCONCLUSIVE
