import math
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from series_invert import series as S
from series_invert.corpus import CORPUS
from series_invert.errors import InsufficientOrder, NotRevertible
from series_invert.reversion import (
    lagrange_burmann,
    lagrange_revert,
    newton_revert,
    revert,
    triangular_revert,
)

from conftest import poly

ALGORITHMS = (lagrange_revert, newton_revert, triangular_revert)


# -- independent oracles (no library code) ------------------------------------

def catalan(n):
    c = [1]
    for m in range(n):
        c.append(sum(c[i] * c[m - i] for i in range(m + 1)))
    return c


def arcsin_coeffs(N):
    out = [Q(0)] * (N + 1)
    for n in range(0, (N - 1) // 2 + 1):
        out[2 * n + 1] = Q(math.factorial(2 * n), 4 ** n * math.factorial(n) ** 2 * (2 * n + 1))
    return out


def arctan_coeffs(N):
    out = [Q(0)] * (N + 1)
    for n in range(0, (N - 1) // 2 + 1):
        out[2 * n + 1] = Q((-1) ** n, 2 * n + 1)
    return out


# -- worked examples -----------------------------------------------------------

@pytest.mark.parametrize("algorithm", ALGORITHMS)
def test_identity(algorithm):
    for N in (1, 4, 9):
        g = algorithm(S.variable(N), N)
        assert g.series == S.variable(N)
        assert g.method in ("lagrange", "newton", "triangular")
        assert g.input_order == N


@pytest.mark.parametrize("algorithm", ALGORITHMS)
def test_catalan(algorithm):
    g = algorithm(poly(0, 1, -1, order=5), 5).series
    assert list(g.coeffs) == [0, 1, 1, 2, 5, 14]


@pytest.mark.parametrize("algorithm", ALGORITHMS)
def test_lambert_jet(algorithm):
    f = poly(0, 1, 1, Q(1, 2), Q(1, 6))
    g = algorithm(f, 4).series
    assert list(g.coeffs) == [0, 1, -1, Q(3, 2), Q(-8, 3)]
    assert list(g.coeffs) == [0] + [Q((-n) ** (n - 1), math.factorial(n)) for n in range(1, 5)]


@pytest.mark.parametrize("algorithm", ALGORITHMS)
def test_sine(algorithm):
    f = poly(0, 1, 0, Q(-1, 6), 0, Q(1, 120))
    assert list(algorithm(f, 5).series.coeffs) == [0, 1, 0, Q(1, 6), 0, Q(3, 40)]


@pytest.mark.parametrize("algorithm", ALGORITHMS)
def test_scaled_quadratic(algorithm):
    g = algorithm(poly(0, 2, 1, 0), 3).series
    assert list(g.coeffs) == [0, Q(1, 2), Q(-1, 8), Q(1, 16)]


@pytest.mark.parametrize("algorithm", ALGORITHMS)
@pytest.mark.parametrize("a", [2, -3, Q(1, 2), Q(-7, 5)])
def test_linear(algorithm, a):
    assert algorithm(poly(0, a, order=4), 4).series == poly(0, 1 / Q(a), order=4)


def test_triangular_substitutes_back():
    f = poly(0, 1, -1, 0, 0)
    g = triangular_revert(f, 4).series
    assert list(g.coeffs) == [0, 1, 1, 2, 5]
    assert S.compose(g, f) == S.variable(4)


def test_invariant_first_coefficients():
    f = poly(0, Q(-3, 7), 2, 5, order=6)
    for algorithm in ALGORITHMS:
        g = algorithm(f, 6).series
        assert g.coeffs[0] == 0 and g.coeffs[1] == Q(-7, 3)


@pytest.mark.parametrize("algorithm", ALGORITHMS)
def test_errors(algorithm):
    with pytest.raises(NotRevertible):
        algorithm(poly(0, 0, 1), 2)
    with pytest.raises(NotRevertible):
        algorithm(poly(1, 1, 0), 2)
    with pytest.raises(InsufficientOrder):
        algorithm(poly(0, 1, 1), 5)


def test_revert_dispatch():
    f = poly(0, 1, -1, order=6)
    assert revert(f, 6, "newton").series == revert(f, 6).series
    with pytest.raises(ValueError):
        revert(f, 6, "bogus")


# -- larger orders against closed forms ----------------------------------------

def test_catalan_order_40():
    g = lagrange_revert(poly(0, 1, -1, order=40), 40).series
    assert list(g.coeffs) == [0] + catalan(39)


def test_arcsin_and_arctan():
    N = 21
    sine = CORPUS["sine"].series(N)
    tangent = CORPUS["tangent"].series(N)
    for algorithm in ALGORITHMS:
        assert list(algorithm(sine, N).series.coeffs) == arcsin_coeffs(N)
        assert list(algorithm(tangent, N).series.coeffs) == arctan_coeffs(N)


def test_power_paths_agree():
    f = CORPUS["lambert"].series(24)
    ref = lagrange_revert(f, powers="squaring").series
    assert lagrange_revert(f, powers="recurrence").series == ref
    ff = S.to_float(f)
    assert lagrange_revert(ff, powers="recurrence").series.isclose(
        lagrange_revert(ff, powers="squaring").series, rel=1e-12)


def test_parallel_matches_serial():
    f = CORPUS["quadratic"].series(80)
    assert lagrange_revert(f, workers=4).series == lagrange_revert(f, workers=1).series
    ff = S.to_float(f)
    assert lagrange_revert(ff, workers=4).series == lagrange_revert(ff, workers=1).series


# -- properties over the corpus -------------------------------------------------

@pytest.mark.parametrize("name", list(CORPUS))
def test_round_trip_and_double_reversion(name):
    N = 16
    f = CORPUS[name].series(N)
    g = lagrange_revert(f, N).series
    assert S.compose(g, f) == S.variable(N)
    assert S.compose(f, g) == S.variable(N)
    assert lagrange_revert(g, N).series == f


@pytest.mark.parametrize("name", list(CORPUS))
def test_three_way_agreement(name):
    N = 32
    f = CORPUS[name].series(N)
    results = [algorithm(f, N).series for algorithm in ALGORITHMS]
    assert results[0] == results[1] == results[2]
    ff = S.to_float(f)
    fl = [algorithm(ff, N).series for algorithm in ALGORITHMS]
    assert all(S.relative_diff(r, fl[2]) <= 1e-10 for r in fl)
    assert S.relative_diff(fl[2], S.to_float(results[0])) <= 1e-10


@pytest.mark.parametrize("name", list(CORPUS))
@pytest.mark.parametrize("a", [2, -3, Q(1, 2)])
def test_scaling_equivariance(name, a):
    N = 12
    f = CORPUS[name].series(N)
    b = lagrange_revert(f, N).series.coeffs
    scaled = lagrange_revert(S.scale(f, a), N).series.coeffs
    assert list(scaled) == [b[n] / Q(a) ** n for n in range(N + 1)]


revertible = st.tuples(
    st.fractions(max_denominator=5).filter(lambda v: v != 0),
    st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=5), min_size=6, max_size=6),
).map(lambda p: S.series([0, p[0], *p[1]]))


@settings(max_examples=30)
@given(revertible)
def test_random_series_agree(f):
    g = lagrange_revert(f).series
    assert newton_revert(f).series == g == triangular_revert(f).series
    assert S.compose(g, f) == S.variable(f.order)


# -- Lagrange-Burmann ------------------------------------------------------------

def test_burmann_examples():
    f = poly(0, 1, -1, 0, 0)
    assert lagrange_burmann(poly(0, 0, 1, 0, 0), f, 4) == poly(0, 0, 1, 2, 5)
    assert lagrange_burmann(S.variable(4), f, 4) == lagrange_revert(f, 4).series
    assert lagrange_burmann(poly(1, order=4), f, 4) == poly(1, order=4)


@pytest.mark.parametrize("name", list(CORPUS))
def test_burmann_consistency(name):
    N = 12
    f = CORPUS[name].series(N)
    H = CORPUS["lambert"].series(N) + poly(3, order=N)
    g = lagrange_revert(f, N).series
    assert lagrange_burmann(H, f, N) == S.compose(H, g)


def test_burmann_errors():
    with pytest.raises(InsufficientOrder):
        lagrange_burmann(poly(0, 1), poly(0, 1, 1, 1), 3)
    with pytest.raises(NotRevertible):
        lagrange_burmann(poly(0, 1, 0), poly(0, 0, 1), 2)
