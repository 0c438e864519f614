"""Reverting two classical series with the explicit coefficient formula.

The inverse of y = x - x^2 has the Catalan numbers as its coefficients, and
the inverse of y = x e^x (the Lambert W function near 0) has coefficients
(-n)^(n-1)/n!.  Both come out exactly in rational arithmetic, and the three
independent algorithms agree to the last digit.
"""

import math
from fractions import Fraction

from series_invert import parse_expression, series_expand
from series_invert import series as S
from series_invert.reversion import lagrange_revert, newton_revert, triangular_revert

N = 12

quadratic = series_expand(parse_expression("x - x^2"), N)
g = lagrange_revert(quadratic).series
print("inverse of x - x^2:")
print("  ", [int(c) for c in g.coeffs])

lambert = series_expand(parse_expression("x*exp(x)"), N)
w = lagrange_revert(lambert).series
closed = [Fraction((-n) ** (n - 1), math.factorial(n)) for n in range(1, N + 1)]
print("\ninverse of x*exp(x), first six coefficients:")
for n in range(1, 7):
    print(f"   b_{n} = {w.coeffs[n]}")
print("matches (-n)^(n-1)/n! through degree", N, ":", list(w.coeffs[1:]) == closed)

# the same answer three ways, and substituting back gives x
same = newton_revert(lambert).series == w == triangular_revert(lambert).series
print("\nnewton == lagrange == triangular:", same)
print("g(f(x)) == x:", S.compose(w, lambert) == S.variable(N))

# float mode for a quick numeric check against W(0.1)
W = S.to_float(w)
print(f"\nW(0.1) from the degree-{N} polynomial: {S.eval_at(W, 0.1):.15f}")
print(f"0.1 * exp(-W) (should equal W):   {0.1 * math.exp(-S.eval_at(W, 0.1)):.15f}")
