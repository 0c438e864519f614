"""Ground-truth inverse values ``f^-1(y)`` by bracketing root-finding.

The search always starts next to 0 and stops at the first sign change, so
the root returned is the one on the local inverse branch through the origin.
"""

from __future__ import annotations

from contextlib import nullcontext
from dataclasses import dataclass

from .errors import DomainError, MaxIterations, NoBracket
from .functions import SmoothFunction

__all__ = ["BracketingInterval", "bracket_inverse", "numeric_inverse",
           "DEFAULT_ABS_TOL", "MAX_DOUBLINGS", "MAX_ITERATIONS"]

DEFAULT_ABS_TOL = 1e-13
MAX_DOUBLINGS = 60
MAX_ITERATIONS = 200


@dataclass(frozen=True)
class BracketingInterval:
    """``[lo, hi]`` with ``fun(lo) - y`` and ``fun(hi) - y`` of opposite sign.

    An endpoint may also hit ``y`` exactly, in which case the product of the
    two signs is 0 rather than negative.
    """

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def encloses(self, y) -> bool:
        return self.lo < self.hi and (self.f_lo - y) * (self.f_hi - y) <= 0


def _sign(v):
    return (v > 0) - (v < 0)


def _evaluator(fun: SmoothFunction, mp: bool):
    ev = fun.mp_fn if mp else fun.fn
    if ev is None:
        raise ValueError(f"{fun.name or 'function'} has no extended-precision evaluator")

    def safe(t):
        try:
            return ev(t)
        except (DomainError, ValueError, ZeroDivisionError, OverflowError) as exc:
            raise NoBracket(f"cannot evaluate at {t}: {exc}") from None
    return safe


def _bracket(ev, y, seed, radius):
    zero = y * 0
    f_plus, f_minus = ev(seed + zero), ev(-seed + zero)
    orient = _sign(f_plus - f_minus)
    if orient == 0:
        raise NoBracket("function is flat at the seed radius")
    if y == 0:
        return BracketingInterval(-seed + zero, seed + zero, f_minus, f_plus)
    direction = orient * _sign(y)
    prev_t, prev_f = zero, ev(zero)
    s = seed + zero
    for _ in range(MAX_DOUBLINGS + 1):
        capped = s >= radius
        if capped:
            s = radius + zero
        t = direction * s
        ft = ev(t)
        if _sign(y) * (ft - prev_f) <= 0:
            raise NoBracket(f"not monotone on [0, {t}]: window too large for the local inverse")
        if _sign(ft - y) != -_sign(y):
            lo, hi, flo, fhi = (prev_t, t, prev_f, ft) if t > prev_t else (t, prev_t, ft, prev_f)
            return BracketingInterval(lo, hi, flo, fhi)
        if capped:
            break
        prev_t, prev_f = t, ft
        s = 2 * s
    raise NoBracket(f"no sign change of f(x) - {y} within the search range")


def bracket_inverse(fun: SmoothFunction, y, seed_radius=None, *,
                    precision: int | None = None) -> BracketingInterval:
    """Enclose the root of ``fun(x) = y`` on the branch through 0.

    The radius starts at ``seed_radius`` (default ``|y|/4``) and doubles, at
    most :data:`MAX_DOUBLINGS` times and never beyond ``fun.radius``, until
    ``fun(x) - y`` changes sign.  Raises :class:`NoBracket` when ``y`` is out
    of reach or monotonicity fails along the way.
    """
    with _precision(precision):
        ev = _evaluator(fun, precision is not None)
        y = _lift(y, precision)
        seed = seed_radius if seed_radius is not None else (abs(y) / 4 if y != 0 else 1e-3)
        seed = _lift(seed, precision)
        if not seed > 0:
            raise ValueError("seed_radius must be positive")
        return _bracket(ev, y, seed, fun.radius)


def _precision(precision):
    if precision is None:
        return nullcontext()
    import mpmath
    return mpmath.workdps(precision)


def _lift(v, precision):
    if precision is None:
        return float(v)
    import mpmath
    return mpmath.mpf(v)


def numeric_inverse(fun: SmoothFunction, y, abs_tol=None, *, seed_radius=None,
                    precision: int | None = None):
    """Solve ``fun(x) = y`` for the root on the local branch through 0.

    Hybrid of bisection and secant steps: the secant candidate is used when
    it falls strictly inside the bracket, bisection otherwise and whenever
    the bracket failed to halve over the last three steps.  Returns ``x``
    inside the final bracket with bracket width ``<= abs_tol`` and
    ``|fun(x) - y| <= abs_tol * max(1, |y|)``.

    ``precision`` (decimal digits) switches to ``fun.mp_fn`` under
    :mod:`mpmath`; ``abs_tol`` then defaults to ``10**(5 - precision)``.
    Raises :class:`NoBracket` or, after :data:`MAX_ITERATIONS` steps,
    :class:`MaxIterations`.
    """
    with _precision(precision):
        ev = _evaluator(fun, precision is not None)
        y = _lift(y, precision)
        if abs_tol is None:
            abs_tol = DEFAULT_ABS_TOL if precision is None else _lift(10, precision) ** (5 - precision)
        abs_tol = _lift(abs_tol, precision)
        seed = seed_radius if seed_radius is not None else (abs(y) / 4 if y != 0 else 1e-3)
        br = _bracket(ev, y, _lift(seed, precision), fun.radius)
        return _solve(ev, y, br, abs_tol)


def _solve(ev, y, br, abs_tol):
    a, b = br.lo, br.hi
    fa, fb = br.f_lo - y, br.f_hi - y
    if fa == 0:
        return a
    if fb == 0:
        return b
    res_tol = abs_tol * max(1, abs(y))
    step = abs_tol / 4
    x0, f0, x1, f1 = a, fa, b, fb
    widths = [b - a]
    for _ in range(MAX_ITERATIONS):
        mid = (a + b) / 2
        stalled = len(widths) > 3 and widths[-1] > widths[-4] / 2
        c = mid
        if not stalled and f1 != f0:
            s = x1 - f1 * (x1 - x0) / (f1 - f0)
            if a < s < b:
                c = s
                # steps below the tolerance cannot close the bracket; push across
                if abs(c - x1) < step:
                    c = x1 + step if mid > x1 else x1 - step
                    if not a < c < b:
                        c = mid
        fc = ev(c) - y
        if fc == 0:
            return c
        if _sign(fc) == _sign(fa):
            a, fa = c, fc
        else:
            b, fb = c, fc
        x0, f0, x1, f1 = x1, f1, c, fc
        widths.append(b - a)
        if b - a <= abs_tol:
            best, fbest = (a, fa) if abs(fa) <= abs(fb) else (b, fb)
            if abs(fbest) <= res_tol:
                return best
        if not a < (a + b) / 2 < b:
            # bracket is down to adjacent representable numbers
            break
    raise MaxIterations(f"no convergence for y = {y} (bracket [{a}, {b}])")
