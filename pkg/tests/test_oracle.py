import math

import mpmath
import numpy as np
import pytest

from series_invert.corpus import CORPUS
from series_invert.errors import MaxIterations, NoBracket, OracleFailure
from series_invert.functions import SmoothFunction, from_expression
from series_invert.oracle import MAX_DOUBLINGS, bracket_inverse, numeric_inverse

identity = SmoothFunction(lambda t: t, radius=math.inf)
quadratic = from_expression("x - x^2", radius=0.5)
lambert = from_expression("x*exp(x)", radius=1.0)


def test_bracket_identity():
    br = bracket_inverse(identity, 0.3, 0.1)
    assert br.lo < 0.3 < br.hi and br.encloses(0.3)


def test_bracket_quadratic():
    root = (1 - math.sqrt(1 - 0.84)) / 2
    br = bracket_inverse(quadratic, 0.21)
    assert br.lo <= root <= br.hi and br.encloses(0.21)


def test_bracket_cap():
    seed = 1e-3
    with pytest.raises(NoBracket):
        bracket_inverse(identity, seed * 2.0 ** (MAX_DOUBLINGS + 2), seed)
    # exactly reachable within the cap
    br = bracket_inverse(identity, seed * 2.0 ** (MAX_DOUBLINGS - 1), seed)
    assert br.encloses(seed * 2.0 ** (MAX_DOUBLINGS - 1))


def test_bracket_out_of_range():
    # x - x^2 peaks at 1/4: no local inverse beyond it
    with pytest.raises(NoBracket):
        bracket_inverse(quadratic, 0.3)


def test_bracket_non_monotone():
    bumpy = SmoothFunction(lambda t: t - 2 * t ** 2, radius=10.0)
    with pytest.raises(NoBracket):
        bracket_inverse(bumpy, 0.2, 0.1)


def test_numeric_inverse_examples():
    assert numeric_inverse(identity, 0.3) == pytest.approx(0.3, abs=1e-13)
    assert abs(numeric_inverse(quadratic, 0.21) - 0.3) <= 1e-12
    x = numeric_inverse(lambert, 0.1)
    assert abs(x * math.exp(x) - 0.1) <= 1e-12
    assert 0 < x < 0.1
    assert numeric_inverse(identity, 0.0) == 0.0


def test_smaller_root_selected():
    # x - x^2 = 0.21 has roots 0.3 and 0.7; the local branch gives 0.3
    wide = SmoothFunction(quadratic.fn, radius=math.inf)
    assert abs(numeric_inverse(wide, 0.21) - 0.3) <= 1e-12


def test_deterministic():
    f = CORPUS["tangent"].smooth_function()
    assert numeric_inverse(f, 0.37) == numeric_inverse(f, 0.37)


def test_max_iterations_is_oracle_failure():
    assert issubclass(MaxIterations, OracleFailure)
    assert issubclass(NoBracket, OracleFailure)


@pytest.mark.parametrize("name", list(CORPUS))
def test_residual_contract(name):
    entry = CORPUS[name]
    fun = entry.smooth_function()
    lo, hi = entry.default_window
    for tol in (1e-13, 1e-10):
        for y in np.geomspace(lo, hi, 64):
            for s in (1.0, -1.0):
                x = numeric_inverse(fun, s * y, tol)
                assert abs(fun(x) - s * y) <= tol * max(1.0, abs(y))


@pytest.mark.parametrize("name", ["sine", "lambert", "flat-identity"])
def test_extended_precision(name):
    fun = CORPUS[name].smooth_function()
    with mpmath.workdps(50):
        x = numeric_inverse(fun, "0.3", precision=50)
        assert abs(fun.mp_fn(x) - mpmath.mpf("0.3")) <= mpmath.mpf(10) ** -44
    assert abs(float(x) - numeric_inverse(fun, 0.3)) <= 1e-13


def test_sine_matches_arcsin():
    fun = CORPUS["sine"].smooth_function()
    for y in np.geomspace(1e-4, 0.9, 20):
        assert abs(numeric_inverse(fun, y) - math.asin(y)) <= 2e-13
