"""The inverse's Taylor polynomial depends only on the jet.

x and x + exp(-1/x^2) share every derivative at 0, so finite differences
give them the same jet and the Lagrange formula gives them the same inverse
polynomial P_N(y) = y.  What differs is how the true inverse leaves P_N:
for sin the gap shrinks like y^7 (N = 5); for the flat perturbation it
shrinks faster than any power, and the measured log-log slope keeps
growing as the window moves toward 0.
"""

from series_invert import classify_decay, estimate_remainder_order, extract_jet, inverse_taylor
from series_invert.corpus import corpus_lookup
from series_invert.functions import from_expression

N = 6
plain = from_expression("x", None)
flat = from_expression("x + flatbump(x)", None)
P_plain = inverse_taylor(extract_jet(plain, N), N)
P_flat = inverse_taylor(extract_jet(flat, N), N)
print("P_6 from the jet of x:               ", [f"{c:+.1e}" for c in P_plain.coeffs])
print("P_6 from the jet of x + flatbump(x): ", [f"{c:+.1e}" for c in P_flat.coeffs])

print("\nsin, N = 5:")
sine = corpus_lookup("sine").smooth_function()
P = inverse_taylor(extract_jet(sine, 5), 5)
reports = [estimate_remainder_order(sine, P, w, 32) for w in ((1e-2, 1e-1), (1e-3, 1e-2))]
for r in reports:
    print(f"   window {r.window}: slope {r.slope:.3f} +- {r.slope_stderr:.3f}")
print("   verdict:", classify_decay(reports))

print("\nx + flatbump(x), N = 6:")
fun = corpus_lookup("flat-identity").smooth_function()
reports = [estimate_remainder_order(fun, P_flat, w, 32) for w in ((0.35, 0.55), (0.28, 0.40))]
for r in reports:
    print(f"   window {r.window}: slope {r.slope:.2f}")
print("   verdict:", classify_decay(reports))
