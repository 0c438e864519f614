"""Series reversion: the compositional inverse ``g`` of ``f`` with ``g(f(x)) = x``.

Three independent algorithms are provided and are expected to agree
coefficient for coefficient:

* :func:`lagrange_revert`: the explicit coefficient formula
  ``n * [y^n] g = [x^(n-1)] (x / f(x))^n``,
* :func:`newton_revert`: Newton iteration on ``f(g(y)) - y = 0`` with
  doubling precision,
* :func:`triangular_revert`: forward substitution in ``[y^n] f(g(y)) = [n == 1]``.

:func:`lagrange_burmann` extends the explicit formula to the coefficients of
``H(g(y))`` for an arbitrary series ``H``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import series as S
from ._threads import thread_count
from .errors import InsufficientOrder, NonConvergence, NotRevertible
from .series import TruncatedSeries

__all__ = [
    "InversionResult",
    "lagrange_revert",
    "newton_revert",
    "triangular_revert",
    "lagrange_burmann",
    "revert",
    "check_revertible",
]

METHODS = ("lagrange", "newton", "triangular")


@dataclass(frozen=True)
class InversionResult:
    series: TruncatedSeries
    method: str
    input_order: int

    @property
    def coeffs(self):
        return self.series.coeffs


def check_revertible(f: TruncatedSeries, N: int | None = None) -> int:
    """Validate the reversion preconditions and return the target order."""
    if f.order < 1 or f.coeffs[0] != 0:
        raise NotRevertible("f(0) must be 0")
    if f.coeffs[1] == 0:
        raise NotRevertible("f'(0) must be nonzero")
    if N is None:
        N = f.order
    if N < 1:
        raise InsufficientOrder("reversion order must be at least 1")
    if f.order < N:
        raise InsufficientOrder(f"f has order {f.order} < requested {N}")
    return N


def _x_over_f(f: TruncatedSeries, N: int) -> TruncatedSeries:
    """``x / f(x)`` through degree ``N - 1``, cancelling the common ``x`` first."""
    reduced = S.shift_down(S.truncate(f, N))
    return S.div(S.constant(1, N - 1, f.ring), reduced)


# -- powers of x/f(x) ------------------------------------------------------------

def _power_by_squaring(h: TruncatedSeries, n: int, m: int) -> list:
    """Coefficients 0..m of ``h**n`` via :func:`series.pow_int`."""
    return list(S.pow_int(S.truncate(h, m), n).coeffs)


def _power_by_recurrence(h: TruncatedSeries, n: int, m: int) -> list:
    """Coefficients 0..m of ``h**n`` by the J.C.P. Miller recurrence.

    For ``P = h**n`` with ``h[0] != 0``::

        k h[0] P[k] = sum_{j=1..k} ((n + 1) j - k) h[j] P[k - j]

    """
    hc = h.coeffs[: m + 1]
    if h.ring.exact:
        h0 = hc[0]
        P = [h0 ** n]
        for k in range(1, m + 1):
            weights = [((n + 1) * j - k) * hc[j] for j in range(1, k + 1)]
            P.append(S.dot_rational(weights, P[k - 1::-1]) / (k * h0))
        return P
    H = np.asarray(hc, dtype=float)
    P = np.empty(m + 1)
    P[0] = H[0] ** n
    for k in range(1, m + 1):
        j = np.arange(1, k + 1)
        P[k] = np.dot(((n + 1) * j - k) * H[1:k + 1], P[k - 1::-1][:k]) / (k * H[0])
    return P.tolist()


_POWERS = {"squaring": _power_by_squaring, "recurrence": _power_by_recurrence}


def _pick_powers(powers, ring):
    if powers == "auto":
        powers = "recurrence" if ring.exact else "squaring"
    try:
        return _POWERS[powers]
    except KeyError:
        raise ValueError(f"unknown power method {powers!r}") from None


def _map(fn, items, workers):
    items = list(items)
    if workers is None:
        workers = thread_count()
    if workers <= 1 or len(items) < 64:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# -- the three algorithms ----------------------------------------------------------

def lagrange_revert(f: TruncatedSeries, N: int | None = None, *,
                    powers: str = "auto", workers: int | None = None) -> InversionResult:
    """Revert ``f`` with the explicit Lagrange coefficient formula.

    Each ``b[n] = [x^(n-1)] (x/f)^n / n`` is computed from its own fresh
    power of ``x/f``; nothing is reused between different ``n``, so the
    per-coefficient work may be spread over threads.

    ``powers`` selects how ``(x/f)^n`` is formed: ``"squaring"`` (repeated
    squaring through :func:`series.pow_int`), ``"recurrence"`` (Miller's
    O(n^2) recurrence), or ``"auto"`` (recurrence for rationals, squaring
    for floats).
    """
    N = check_revertible(f, N)
    ring = f.ring
    h = _x_over_f(f, N)
    power = _pick_powers(powers, ring)

    def coefficient(n):
        return power(h, n, n - 1)[n - 1] / ring.convert(n)

    coeffs = [ring.convert(0)] + _map(coefficient, range(1, N + 1), workers)
    return InversionResult(TruncatedSeries(tuple(coeffs), ring), "lagrange", f.order)


def newton_revert(f: TruncatedSeries, N: int | None = None) -> InversionResult:
    """Revert ``f`` by Newton iteration ``g <- g - (f(g) - x) / f'(g)``.

    Starting from ``g = x / f'(0)`` (correct through degree 1) every step
    doubles the number of correct coefficients.  In the rational ring the
    doubling is verified exactly and a failure raises
    :class:`NonConvergence`.
    """
    N = check_revertible(f, N)
    ring = f.ring
    zero = ring.convert(0)
    g = [zero, 1 / f.coeffs[1]]
    trusted = 1
    while True:
        target = min(2 * trusted, N)
        ft = S.truncate(f, target)
        gt = S.series(g, ring, target)
        resid = S.sub(S.compose(ft, gt), S.variable(target, ring))
        low = resid.coeffs[: trusted + 1]
        if ring.exact and any(c != 0 for c in low):
            raise NonConvergence(
                f"residual does not vanish through degree {trusted}")
        if trusted >= N:
            break
        # resid = x^(trusted+1) * q; only q's first target-trusted coefficients matter
        m = target - trusted - 1
        q = S.TruncatedSeries(resid.coeffs[trusted + 1:], ring)
        dfg = S.compose(S.truncate(S.derivative(S.truncate(f, max(target, 1))), m),
                        S.truncate(gt, m) if m >= 1 else S.series([0], ring))
        corr = S.div(q, dfg)
        g = list(gt.coeffs)
        for k, c in enumerate(corr.coeffs):
            g[trusted + 1 + k] -= c
        trusted = target
    return InversionResult(S.series(g, ring, N), "newton", f.order)


def triangular_revert(f: TruncatedSeries, N: int | None = None) -> InversionResult:
    """Revert ``f`` by solving ``[y^n] f(g(y)) = [n == 1]`` one coefficient at a time.

    ``[y^n] g^k`` for ``k >= 2`` only involves ``b[1] .. b[n-1]``, so::

        f[1] b[n] = -sum_{k=2..n} f[k] [y^n] g^k

    is a lower-triangular system solved by forward substitution, with the
    rows of ``g^k`` extended by one coefficient per step.  Every term on the
    right is formed from products of already known coefficients, which keeps
    the float ring free of the cancellation the ``g(f(x)) = x`` form suffers.
    This path shares no code with the Lagrange formula and is the reference
    oracle for the other two algorithms.
    """
    N = check_revertible(f, N)
    ring = f.ring
    fc = S.truncate(f, N).coeffs
    zero = ring.convert(0)
    # rows of g^k beyond the last nonzero f[k] are never needed
    top = max(k for k, c in enumerate(fc) if c != 0)
    b = [zero, 1 / fc[1]]
    powers = [None, b]  # powers[k][n] = [y^n] g^k, valid for n <= current step
    for n in range(2, N + 1):
        s = zero
        for k in range(2, min(n, top) + 1):
            if len(powers) <= k:
                powers.append([zero] * k)
            prev = powers[k - 1]
            # [y^n] g^k = sum_{i=k-1..n-1} [y^i] g^(k-1) * b[n-i]
            v = _dot(prev[k - 1:n], b[n - k + 1:0:-1], ring)
            powers[k].append(v)
            if fc[k] != 0:
                s += fc[k] * v
        b.append(-s / fc[1])
    return InversionResult(S.TruncatedSeries(tuple(b), ring), "triangular", f.order)


def _dot(xs, ys, ring):
    if ring.exact:
        return S.dot_rational(xs, ys)
    return float(np.dot(xs, ys))


_ALGORITHMS = {
    "lagrange": lagrange_revert,
    "newton": newton_revert,
    "triangular": triangular_revert,
}


def revert(f: TruncatedSeries, N: int | None = None, method: str = "lagrange") -> InversionResult:
    try:
        algorithm = _ALGORITHMS[method]
    except KeyError:
        raise ValueError(f"unknown reversion method {method!r}") from None
    return algorithm(f, N)


def lagrange_burmann(H: TruncatedSeries, f: TruncatedSeries, N: int | None = None, *,
                     powers: str = "auto") -> TruncatedSeries:
    """Degree-``N`` truncation of ``H(g(y))`` where ``g`` reverts ``f``.

    ``[y^n] H(g(y)) = [x^(n-1)] (H'(x) (x/f(x))^n) / n`` for ``n >= 1`` and
    the constant term is ``H(0)``.
    """
    N = check_revertible(f, N)
    S._check_ring(H, f)
    if H.order < N:
        raise InsufficientOrder(f"H has order {H.order} < requested {N}")
    ring = f.ring
    h = _x_over_f(f, N)
    dH = S.derivative(S.truncate(H, N)).coeffs
    power = _pick_powers(powers, ring)
    out = [H.coeffs[0]]
    for n in range(1, N + 1):
        P = power(h, n, n - 1)
        s = sum((dH[i] * P[n - 1 - i] for i in range(n)), ring.convert(0))
        out.append(s / ring.convert(n))
    return S.TruncatedSeries(tuple(out), ring)
