"""Acceptance criteria 1-10, each at its stated tolerance.

Every test prints one ``criterion N: PASS|FAIL`` line (visible even when
pytest captures output) before asserting.
"""

import json
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from series_invert import series as S
from series_invert.cli import RunConfig, cmd_verify, main
from series_invert.corpus import CORPUS
from series_invert.functions import from_expression
from series_invert.oracle import numeric_inverse
from series_invert.reversion import lagrange_revert, newton_revert, triangular_revert
from series_invert.smooth import SUPER_POLYNOMIAL, extract_jet, inverse_taylor

from test_expr import GRAMMAR_SUITE, run_grammar_case

HERE = Path(__file__).parent


@pytest.fixture
def verdict(capsys):
    def report(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail
    return report


def catalan(n):
    c = [1]
    for m in range(n - 1):
        c.append(sum(c[i] * c[m - i] for i in range(m + 1)))
    return c


def test_criterion_1_catalan(verdict, capsys):
    start = time.perf_counter()
    code = main(["revert", "--function", "x - x^2", "--order", "16", "--mode", "rational"])
    elapsed = time.perf_counter() - start
    doc = json.loads(capsys.readouterr().out)
    expected = ["0"] + [str(c) for c in catalan(16)]
    ok = code == 0 and doc["series"]["coeffs"] == expected and elapsed < 1.0
    verdict(1, ok, f"C_0..C_15 exact={doc['series']['coeffs'] == expected}, {elapsed:.3f}s < 1s")


def test_criterion_2_lambert(verdict):
    out = subprocess.run([sys.executable, str(HERE / "lambert_closed_form.py"), "12"],
                         capture_output=True, text=True, check=True).stdout.split()
    f = CORPUS["lambert"].series(12, "rational")
    g = lagrange_revert(f, 12).series
    got = [S.to_json(g)["coeffs"][n] for n in range(1, 13)]
    verdict(2, got == out, f"b_1..b_12 exact match: {got == out}")


def test_criterion_3_three_way(verdict):
    start = time.perf_counter()
    worst_float = 0.0
    rational_ok = True
    for entry in CORPUS.values():
        for N in (8, 32, 128):
            f = entry.series(N)
            rs = [a(f, N).series for a in (lagrange_revert, newton_revert, triangular_revert)]
            rational_ok &= f.mode == "rational" and rs[0] == rs[1] == rs[2]
            ff = S.to_float(f)
            fs = [a(ff, N).series for a in (lagrange_revert, newton_revert, triangular_revert)]
            worst_float = max(worst_float, *(S.relative_diff(x, y)
                                             for x in fs for y in fs))
    elapsed = time.perf_counter() - start
    ok = rational_ok and worst_float <= 1e-10 and elapsed < 30
    verdict(3, ok, f"rational exact={rational_ok}, float worst rel diff {worst_float:.2e} <= 1e-10, "
                   f"{elapsed:.1f}s < 30s")


def test_criterion_4_round_trip(verdict):
    N = 32
    bad = [name for name, entry in CORPUS.items()
           if S.compose(lagrange_revert(entry.series(N, "rational"), N).series,
                        entry.series(N, "rational")) != S.variable(N)]
    verdict(4, not bad, f"compose(g, f) == x exactly for all entries; failures: {bad}")


def test_criterion_5_jet_only(verdict):
    N = 6
    P = inverse_taylor(extract_jet(from_expression("x", None), N), N)
    Q = inverse_taylor(extract_jet(from_expression("x + flatbump(x)", None), N), N)
    diff = max(abs(a - b) for a, b in zip(P.coeffs, Q.coeffs))
    verdict(5, diff <= 1e-8, f"max coefficient difference {diff:.2e} <= 1e-8")


def test_criterion_6_analytic_order(verdict):
    start = time.perf_counter()
    report = cmd_verify(RunConfig("verify", corpus="sine", order=5,
                                  windows=[(1e-2, 1e-1), (1e-3, 1e-2)], samples=32))
    elapsed = time.perf_counter() - start
    slopes = [r["slope"] for r in report.payload["reports"]]
    ok = all(6.8 <= s <= 7.2 for s in slopes) and elapsed < 5
    verdict(6, ok, f"slopes {[round(s, 4) for s in slopes]} in [6.8, 7.2], {elapsed:.2f}s < 5s")


def test_criterion_7_super_polynomial(verdict):
    report = cmd_verify(RunConfig("verify", corpus="flat-identity", order=6,
                                  windows=[(0.35, 0.55), (0.28, 0.40)], samples=32))
    outer, inner = (r["slope"] for r in report.payload["reports"])
    final = report.payload["verdict"]
    ok = inner > outer and outer > 8 and inner > 12 and final == SUPER_POLYNOMIAL
    verdict(7, ok, f"outer {outer:.2f} > 8, inner {inner:.2f} > 12, verdict {final}")


def test_criterion_8_oracle_residual(verdict):
    worst = 0.0
    for entry in CORPUS.values():
        fun = entry.smooth_function()
        for y in np.geomspace(*entry.default_window, 64):
            for s in (1.0, -1.0):
                x = numeric_inverse(fun, s * y)
                worst = max(worst, abs(fun(x) - s * y) / max(1.0, y))
    verdict(8, worst <= 1e-13, f"worst scaled residual {worst:.2e} <= 1e-13")


def test_criterion_9_performance(verdict):
    f = CORPUS["lambert"].series(256)
    start = time.perf_counter()
    lagrange_revert(S.to_float(f), 256)
    t_float = time.perf_counter() - start
    g = CORPUS["lambert"].series(64)
    start = time.perf_counter()
    lagrange_revert(g, 64)
    t_rational = time.perf_counter() - start
    ok = t_float < 1 and t_rational < 10
    verdict(9, ok, f"float order 256 {t_float:.3f}s < 1s, rational order 64 {t_rational:.3f}s < 10s")


def test_criterion_10_parser(verdict):
    passed = sum(run_grammar_case(*case) for case in GRAMMAR_SUITE)
    verdict(10, passed == 25 == len(GRAMMAR_SUITE), f"{passed}/{len(GRAMMAR_SUITE)} grammar cases")
