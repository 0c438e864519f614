import math

import pytest

from series_invert import series as S
from series_invert.corpus import CORPUS, EXACT_ORDER, corpus_lookup, corpus_names
from series_invert.errors import UnknownEntry
from series_invert.expr import eval_expression, series_expand

REQUIRED = {
    "identity": "x",
    "quadratic": "x - x^2",
    "lambert": "x*exp(x)",
    "sine": "sin(x)",
    "tangent": "tan(x)",
    "scaled": "2*x + x^2",
    "flat-identity": "x + flatbump(x)",
}


def test_required_entries():
    assert set(REQUIRED) <= set(corpus_names())
    for name, text in REQUIRED.items():
        assert corpus_lookup(name).text == text


def test_lookup_examples():
    q = corpus_lookup("quadratic")
    assert q.exact_series.truncate(3) == S.series([0, 1, -1, 0])
    assert q.analytic
    flat = corpus_lookup("flat-identity")
    assert not flat.analytic
    assert flat.default_window == (0.28, 0.55)
    with pytest.raises(UnknownEntry):
        corpus_lookup("nope")


@pytest.mark.parametrize("name", list(CORPUS))
def test_entry_invariants(name):
    entry = CORPUS[name]
    assert eval_expression(entry.expression, 0.0) == 0.0
    f = series_expand(entry.expression, 4)
    assert f.revertible
    lo, hi = entry.default_window
    assert 0 < lo < hi <= entry.monotone_radius
    if entry.exact_series is not None:
        assert entry.exact_series.mode == "rational"
        assert entry.exact_series.order == EXACT_ORDER
        for N in (1, 5, 17, EXACT_ORDER):
            assert series_expand(entry.expression, N) == entry.exact_series.truncate(N)


@pytest.mark.parametrize("name", list(CORPUS))
def test_monotone_on_radius(name):
    entry = CORPUS[name]
    fun = entry.smooth_function()
    r = min(entry.monotone_radius, entry.domain) * (1 - 1e-9)
    ts = [r * (k / 500 - 1) for k in range(1001)]
    values = [fun(t) for t in ts]
    increasing = values[-1] > values[0]
    assert all((b > a) == increasing for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("name", [n for n in CORPUS if CORPUS[n].analytic])
def test_expansion_matches_evaluation(name):
    entry = CORPUS[name]
    P = entry.series(12)
    for k in range(-20, 21):
        t = k / 200
        assert abs(eval_expression(entry.expression, t) - float(S.eval_at(P, t))) <= 1e-9


def test_smooth_function_metadata():
    fun = corpus_lookup("tangent").smooth_function()
    assert fun.domain == pytest.approx(math.pi / 2)
    assert fun.analytic and fun.exact_series is not None
    flat = corpus_lookup("flat-identity").smooth_function()
    assert not flat.analytic and flat.exact_series.truncate(6) == S.variable(6)
