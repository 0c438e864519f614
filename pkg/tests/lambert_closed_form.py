"""Prints b_n = (-n)^(n-1)/n! for n = 1..N as p/q strings, one per line."""
import sys
from fractions import Fraction
from math import factorial

N = int(sys.argv[1]) if len(sys.argv) > 1 else 12
for n in range(1, N + 1):
    b = Fraction((-n) ** (n - 1), factorial(n))
    print(f"{b.numerator}/{b.denominator}" if b.denominator != 1 else b.numerator)
