"""Truncated formal power series over exact rationals or binary64 floats.

A :class:`TruncatedSeries` of order ``N`` stores the coefficients
``c[0] .. c[N]`` of ``c[0] + c[1] x + ... + c[N] x**N``.  Coefficients of
higher degree are *unknown*, not zero, so every binary operation truncates
its result to the smaller operand order::

    >>> from series_invert.series import series
    >>> a = series([1, 1], "rational")
    >>> b = series([1, 1, 1], "rational")
    >>> (a + b).coeffs
    (Fraction(2, 1), Fraction(2, 1))

Two coefficient rings are supported.  ``"rational"`` uses
:class:`fractions.Fraction` and never rounds; ``"float"`` uses binary64 and
compares with a relative tolerance.  Mixing rings in one operation raises
:class:`~series_invert.errors.RingMismatch`.

Series values are immutable; all functions here are pure.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CoefficientIndexError,
    InnerConstantNonzero,
    OrderError,
    RingMismatch,
    ZeroConstantTerm,
)

__all__ = [
    "CoefficientRing",
    "RATIONAL",
    "FLOAT",
    "TruncatedSeries",
    "series",
    "variable",
    "constant",
    "add",
    "sub",
    "neg",
    "scale",
    "mul",
    "div",
    "compose",
    "derivative",
    "integrate",
    "pow_int",
    "eval_at",
    "coeff_at",
    "shift_down",
    "truncate",
    "to_float",
    "to_json",
    "from_json",
    "relative_diff",
]


@dataclass(frozen=True)
class CoefficientRing:
    """Coefficient domain of a series.

    ``tolerance`` is the relative tolerance used by approximate comparisons;
    it is always 0 for the exact rational ring.
    """

    mode: str
    tolerance: float = 0.0

    def __post_init__(self):
        if self.mode not in ("rational", "float"):
            raise ValueError(f"unknown ring mode {self.mode!r}")
        if self.tolerance < 0:
            raise ValueError("tolerance must be nonnegative")
        if self.mode == "rational" and self.tolerance != 0:
            raise ValueError("the rational ring is exact; tolerance must be 0")

    @property
    def exact(self) -> bool:
        return self.mode == "rational"

    def convert(self, value):
        if self.exact:
            if isinstance(value, Fraction):
                return value
            if isinstance(value, str):
                return Fraction(value.strip())
            if isinstance(value, (Rational, float)):
                return Fraction(value)
            raise TypeError(f"cannot use {value!r} as a rational coefficient")
        if isinstance(value, str):
            return float(Fraction(value.strip()))
        return float(value)


RATIONAL = CoefficientRing("rational")
FLOAT = CoefficientRing("float", 1e-12)


def _ring(mode) -> CoefficientRing:
    if isinstance(mode, CoefficientRing):
        return mode
    if mode == "rational":
        return RATIONAL
    if mode == "float":
        return FLOAT
    raise ValueError(f"unknown ring mode {mode!r}")


@dataclass(frozen=True)
class TruncatedSeries:
    coeffs: tuple
    ring: CoefficientRing = RATIONAL

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise OrderError("a series needs at least one coefficient")
        object.__setattr__(
            self, "coeffs", tuple(self.ring.convert(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def mode(self) -> str:
        return self.ring.mode

    @property
    def revertible(self) -> bool:
        return self.order >= 1 and self.coeffs[0] == 0 and self.coeffs[1] != 0

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return coeff_at(self, k)

    def __iter__(self):
        return iter(self.coeffs)

    def __add__(self, other):
        return add(self, self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, self._coerce(other))

    def __rsub__(self, other):
        return sub(self._coerce(other), self)

    def __neg__(self):
        return neg(self)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return div(self, other)
        return scale(self, 1 / self.ring.convert(other))

    def __rtruediv__(self, other):
        return div(self._coerce(other), self)

    def __pow__(self, n):
        return pow_int(self, n)

    def __call__(self, arg):
        if isinstance(arg, TruncatedSeries):
            return compose(self, arg)
        return eval_at(self, arg)

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        return constant(other, self.order, self.ring)

    def truncate(self, order: int) -> "TruncatedSeries":
        return truncate(self, order)

    def isclose(self, other: "TruncatedSeries", rel: float | None = None) -> bool:
        """Coefficientwise comparison at the ring tolerance (exact for rationals)."""
        if self.order != other.order:
            return False
        if self.ring.exact and other.ring.exact and rel is None:
            return self.coeffs == other.coeffs
        if rel is None:
            rel = max(self.ring.tolerance, other.ring.tolerance)
        return relative_diff(self, other) <= rel

    def __repr__(self):
        return f"TruncatedSeries({list(self.coeffs)!r}, mode={self.mode!r})"

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if k and c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}" if mono else f"{c}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O(x^{self.order + 1})"


# -- constructors --------------------------------------------------------------

def series(coeffs: Iterable, mode="rational", order: int | None = None) -> TruncatedSeries:
    """Build a series from coefficients, zero-padding (or truncating) to ``order``."""
    coeffs = list(coeffs)
    if order is not None:
        coeffs = (coeffs + [0] * (order + 1))[: order + 1]
    return TruncatedSeries(tuple(coeffs), _ring(mode))


def variable(order: int, mode="rational") -> TruncatedSeries:
    """The identity series ``x`` truncated at ``order`` (``order >= 1``)."""
    if order < 1:
        raise OrderError("the variable x needs order >= 1")
    return series([0, 1], mode, order)


def constant(value, order: int, mode="rational") -> TruncatedSeries:
    return series([value], mode, order)


# -- helpers -------------------------------------------------------------------

def _check_ring(a: TruncatedSeries, b: TruncatedSeries) -> CoefficientRing:
    if a.ring.mode != b.ring.mode:
        raise RingMismatch(f"cannot combine {a.mode} and {b.mode} series")
    return a.ring if a.ring.tolerance >= b.ring.tolerance else b.ring


def _lcm_denominator(coeffs: Sequence[Fraction]) -> int:
    return reduce(math.lcm, (c.denominator for c in coeffs), 1)


def dot_rational(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> Fraction:
    """Exact ``sum(x * y)`` computed over a common denominator."""
    dx = _lcm_denominator(xs)
    dy = _lcm_denominator(ys)
    s = sum(x.numerator * (dx // x.denominator) * y.numerator * (dy // y.denominator)
            for x, y in zip(xs, ys))
    return Fraction(s, dx * dy)


def _convolve_rational(a: Sequence[Fraction], b: Sequence[Fraction], n: int) -> list:
    # scale to integers so the O(n^2) loop runs on ints; reduce once per output
    da = _lcm_denominator(a[:n])
    db = _lcm_denominator(b[:n])
    ia = [c.numerator * (da // c.denominator) for c in a[:n]]
    ib = [c.numerator * (db // c.denominator) for c in b[:n]]
    den = da * db
    out = []
    for k in range(n):
        lo = max(0, k - len(ib) + 1)
        hi = min(k, len(ia) - 1)
        s = sum(map(operator.mul, ia[lo:hi + 1], ib[k - hi:k - lo + 1][::-1])) if lo <= hi else 0
        out.append(Fraction(s, den))
    return out


def _convolve(a: Sequence, b: Sequence, n: int, ring: CoefficientRing) -> list:
    """First ``n`` coefficients of the Cauchy product of ``a`` and ``b``."""
    if ring.exact:
        return _convolve_rational(a, b, n)
    full = np.convolve(np.asarray(a[:n], dtype=float), np.asarray(b[:n], dtype=float))
    return full[:n].tolist()


# -- arithmetic ----------------------------------------------------------------

def truncate(a: TruncatedSeries, order: int) -> TruncatedSeries:
    if order > a.order:
        raise OrderError(f"cannot raise order {a.order} to {order} by truncation")
    if order < 0:
        raise OrderError("order must be nonnegative")
    return TruncatedSeries(a.coeffs[: order + 1], a.ring)


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    ring = _check_ring(a, b)
    n = min(a.order, b.order) + 1
    return TruncatedSeries(tuple(x + y for x, y in zip(a.coeffs[:n], b.coeffs[:n])), ring)


def sub(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    ring = _check_ring(a, b)
    n = min(a.order, b.order) + 1
    return TruncatedSeries(tuple(x - y for x, y in zip(a.coeffs[:n], b.coeffs[:n])), ring)


def neg(a: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries(tuple(-c for c in a.coeffs), a.ring)


def scale(a: TruncatedSeries, factor) -> TruncatedSeries:
    factor = a.ring.convert(factor)
    return TruncatedSeries(tuple(factor * c for c in a.coeffs), a.ring)


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Schoolbook Cauchy product truncated to the smaller order."""
    ring = _check_ring(a, b)
    n = min(a.order, b.order) + 1
    return TruncatedSeries(tuple(_convolve(a.coeffs, b.coeffs, n, ring)), ring)


def div(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Quotient ``q`` with ``q * b == a`` through the smaller order."""
    ring = _check_ring(a, b)
    if b.coeffs[0] == 0:
        raise ZeroConstantTerm("divisor has zero constant term")
    n = min(a.order, b.order) + 1
    bc = b.coeffs
    b0 = bc[0]
    q = []
    for k in range(n):
        s = a.coeffs[k]
        for j in range(max(0, k - b.order), k):
            s -= q[j] * bc[k - j]
        q.append(s / b0)
    return TruncatedSeries(tuple(q), ring)


def shift_down(a: TruncatedSeries, k: int = 1) -> TruncatedSeries:
    """Divide by ``x**k``, cancelling it symbolically; order drops by ``k``.

    This is how ``x / f(x)`` is formed for a revertible ``f``: no ``0/0`` is
    ever evaluated.
    """
    if k > a.order:
        raise OrderError(f"cannot cancel x^{k} from a series of order {a.order}")
    if any(c != 0 for c in a.coeffs[:k]):
        raise ZeroConstantTerm(f"series is not divisible by x^{k}")
    return TruncatedSeries(a.coeffs[k:], a.ring)


def derivative(a: TruncatedSeries) -> TruncatedSeries:
    if a.order < 1:
        raise OrderError("derivative of an order-0 series is undefined")
    return TruncatedSeries(tuple(k * a.coeffs[k] for k in range(1, a.order + 1)), a.ring)


def integrate(a: TruncatedSeries, const=0) -> TruncatedSeries:
    """Antiderivative with the given constant term; order rises by one."""
    ring = a.ring
    out = [ring.convert(const)]
    for k, c in enumerate(a.coeffs):
        out.append(c / ring.convert(k + 1))
    return TruncatedSeries(tuple(out), ring)


def pow_int(a: TruncatedSeries, n: int) -> TruncatedSeries:
    """``a**n`` by repeated squaring, truncated at ``a.order``."""
    if n < 0 or int(n) != n:
        raise ValueError("exponent must be a nonnegative integer")
    result = constant(1, a.order, a.ring)
    base = a
    n = int(n)
    while n:
        if n & 1:
            result = mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """Coefficients of ``outer(inner(x))`` through the smaller order.

    Horner nesting in baby-step/giant-step form: the powers ``inner**j`` for
    ``j < m`` (``m ~ sqrt(N)``) are tabulated, each block of ``m`` outer
    coefficients becomes a linear combination of them, and the blocks are
    nested by Horner's rule in ``inner**m``.
    """
    ring = _check_ring(outer, inner)
    if inner.coeffs[0] != 0:
        raise InnerConstantNonzero("inner series must vanish at 0")
    order = min(outer.order, inner.order)
    n = order + 1
    oc = outer.coeffs[:n]
    g = truncate(inner, order)
    m = max(1, math.isqrt(n))

    powers = [constant(1, order, ring)]
    for _ in range(m):
        powers.append(mul(powers[-1], g))
    giant = powers[m]
    zero = ring.convert(0)

    def block(start):
        acc = [zero] * n
        for j in range(m):
            idx = start + j
            if idx >= n:
                break
            c = oc[idx]
            if c == 0:
                continue
            # inner**j has valuation j; skip the known-zero low part
            pc = powers[j].coeffs
            for k in range(j, n):
                acc[k] += c * pc[k]
        return TruncatedSeries(tuple(acc), ring)

    starts = list(range(0, n, m))
    result = block(starts[-1])
    for s in reversed(starts[:-1]):
        result = add(mul(result, giant), block(s))
    return result


def eval_at(a: TruncatedSeries, t):
    """Horner evaluation of the degree-N polynomial at ``t``."""
    coeffs = a.coeffs
    if a.ring.exact and isinstance(t, Rational):
        t = Fraction(t)
    elif isinstance(t, (float, Rational)):
        t = float(t)
        coeffs = [float(c) for c in coeffs]
    elif a.ring.exact:
        # extended-precision argument (e.g. mpmath.mpf): lift p/q exactly
        coeffs = [t * 0 + c.numerator if c.denominator == 1
                  else (t * 0 + c.numerator) / c.denominator for c in coeffs]
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * t + c
    return acc


def coeff_at(a: TruncatedSeries, k: int):
    if not isinstance(k, int) or not 0 <= k <= a.order:
        raise CoefficientIndexError(f"index {k} outside 0..{a.order}")
    return a.coeffs[k]


def to_float(a: TruncatedSeries, tolerance: float | None = None) -> TruncatedSeries:
    ring = FLOAT if tolerance is None else CoefficientRing("float", tolerance)
    return TruncatedSeries(tuple(float(c) for c in a.coeffs), ring)


def relative_diff(a: TruncatedSeries, b: TruncatedSeries) -> float:
    """Largest per-coefficient relative difference (0/0 counts as 0)."""
    n = min(a.order, b.order) + 1
    worst = 0.0
    for x, y in zip(a.coeffs[:n], b.coeffs[:n]):
        if x == y:
            continue
        scale_ = max(abs(x), abs(y))
        worst = max(worst, float(abs(x - y) / scale_))
    return worst


# -- JSON ----------------------------------------------------------------------

def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def to_json(a: TruncatedSeries) -> dict:
    """``{"order", "mode", "coeffs"}`` with rationals as ``"p/q"`` strings."""
    if a.ring.exact:
        coeffs = [_fmt_rational(c) for c in a.coeffs]
    else:
        coeffs = [float(c) for c in a.coeffs]
    return {"order": a.order, "mode": a.mode, "coeffs": coeffs}


def from_json(obj: dict) -> TruncatedSeries:
    mode = obj.get("mode", "rational")
    coeffs = obj["coeffs"]
    order = obj.get("order", len(coeffs) - 1)
    if len(coeffs) != order + 1:
        raise OrderError(f"order {order} but {len(coeffs)} coefficients")
    return series(coeffs, mode)
