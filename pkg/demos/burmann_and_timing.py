"""Lagrange-Burmann coefficients and a small timing comparison.

H(g(y)) for g the inverse of f can be read off without forming g first.
Squaring the Catalan generating function gives the shifted Catalan numbers.
"""

import time

from series_invert import lagrange_burmann, parse_expression, series_expand
from series_invert import series as S
from series_invert.reversion import lagrange_revert, newton_revert, triangular_revert

N = 10
f = series_expand(parse_expression("x - x^2"), N)
H = series_expand(parse_expression("x^2"), N)
print("[y^n] g(y)^2 for g the inverse of x - x^2:")
print("  ", [int(c) for c in lagrange_burmann(H, f, N).coeffs])

print("\norder  mode      lagrange   newton     triangular")
for order in (32, 64, 128):
    f = series_expand(parse_expression("x*exp(x)"), order)
    for mode, series in (("rational", f), ("float", S.to_float(f))):
        times = []
        for algorithm in (lagrange_revert, newton_revert, triangular_revert):
            start = time.perf_counter()
            algorithm(series, order)
            times.append(time.perf_counter() - start)
        print(f"{order:5d}  {mode:8s}  " + "  ".join(f"{t:9.4f}" for t in times))
