"""Expressions in one variable ``x``: parsing, printing, evaluation, expansion.

Grammar (whitespace is insignificant, operators are left-associative)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('-' | '+') factor | base ('^' integer)?
    base   := number | 'x' | name '(' expr ')' | '(' expr ')'

Numbers are integers (``12``), decimals (``0.25``) or rationals written
without spaces (``3/4``).  A unary minus ``-u`` is read as ``0 - u``.
Recognised function names are listed in :data:`FUNCTIONS`; ``flatbump`` is
``exp(-1/x^2)`` continued by 0 at ``x = 0``, a smooth function whose Taylor
series at 0 vanishes identically.

    >>> e = parse_expression("x*exp(x)")
    >>> render(e)
    'x * exp(x)'
    >>> eval_expression(parse_expression("x - x^2"), 0.3)
    0.21
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import series as S
from .errors import (
    DomainError,
    ExpressionSyntaxError,
    NotExpandable,
    UnknownFunction,
)
from .series import TruncatedSeries

__all__ = [
    "FUNCTIONS",
    "ExpressionNode",
    "parse_expression",
    "render",
    "eval_expression",
    "series_expand",
    "is_analytic",
    "is_rational",
]

FUNCTIONS = ("exp", "sin", "cos", "tan", "atan", "log1p", "sqrt", "expm1", "flatbump")
KINDS = ("constant", "variable", "add", "sub", "mul", "div", "pow", "call")


@dataclass(frozen=True)
class ExpressionNode:
    kind: str
    children: tuple = ()
    value: Fraction | None = None
    name: str | None = None
    # source spelling of decimal literals; not part of structural identity
    text: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown node kind {self.kind!r}")

    def __str__(self):
        return render(self)


def constant(value, text=None) -> ExpressionNode:
    return ExpressionNode("constant", value=Fraction(value), text=text)


VARIABLE = ExpressionNode("variable")


def binary(kind, left, right) -> ExpressionNode:
    return ExpressionNode(kind, (left, right))


def call(name, arg) -> ExpressionNode:
    return ExpressionNode("call", (arg,), name=name)


# -- lexer -------------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<number>\d+\.\d*|\.\d+|\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()−])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Token:
    kind: str  # number, name, op, end
    text: str
    offset: int  # byte offset into the UTF-8 source
    glued: bool  # no whitespace before this token


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    glued = True
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExpressionSyntaxError(
                f"unexpected character {text[pos]!r}", len(text[:pos].encode()),
                ("number", "x", "function", "(", "-", "+"))
        kind = m.lastgroup
        if kind == "ws":
            glued = False
        else:
            tok = m.group()
            if tok == "−":
                tok = "-"
            tokens.append(_Token(kind, tok, len(text[:pos].encode()), glued))
            glued = True
        pos = m.end()
    tokens.append(_Token("end", "", len(text.encode()), glued))
    return tokens


# -- parser ------------------------------------------------------------------------

_OPERAND = frozenset({"number", "x", "function", "(", "-", "+"})


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def peek(self, k=1) -> _Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def at(self, *ops) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def fail(self, message, expected):
        tok = self.tok
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ExpressionSyntaxError(f"{message}: unexpected {what}", tok.offset, expected)

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            self.fail("trailing input", {"+", "-", "*", "/", "^", "end"})
        return node

    def expr(self):
        node = self.term()
        while self.at("+", "-"):
            kind = "add" if self.tok.text == "+" else "sub"
            self.i += 1
            node = binary(kind, node, self.term())
        return node

    def term(self):
        node = self.factor(allow_rational=True)
        while self.at("*", "/"):
            kind = "mul" if self.tok.text == "*" else "div"
            self.i += 1
            # "x/3/4" must stay (x/3)/4, so no rational literal right after '/'
            node = binary(kind, node, self.factor(allow_rational=kind == "mul"))
        return node

    def factor(self, allow_rational):
        if self.at("-"):
            self.i += 1
            return binary("sub", constant(0), self.factor(allow_rational))
        if self.at("+"):
            self.i += 1
            return self.factor(allow_rational)
        node = self.base(allow_rational)
        if self.at("^"):
            self.i += 1
            tok = self.tok
            if tok.kind != "number" or not tok.text.isdigit():
                self.fail("exponent must be a nonnegative integer", {"integer"})
            self.i += 1
            node = binary("pow", node, constant(int(tok.text)))
        return node

    def base(self, allow_rational):
        tok = self.tok
        if tok.kind == "number":
            self.i += 1
            if (allow_rational and tok.text.isdigit() and self.at("/") and self.tok.glued
                    and self.peek().kind == "number" and self.peek().text.isdigit()
                    and self.peek().glued and not self._followed_by_caret(2)):
                den = self.peek().text
                self.i += 2
                if int(den) == 0:
                    raise ExpressionSyntaxError("zero denominator in rational literal",
                                                self.tokens[self.i - 1].offset, ())
                return constant(Fraction(int(tok.text), int(den)))
            if tok.text.isdigit():
                return constant(int(tok.text))
            return constant(Fraction(tok.text), text=tok.text)
        if tok.kind == "name":
            if tok.text == "x":
                self.i += 1
                return VARIABLE
            if tok.text not in FUNCTIONS:
                raise UnknownFunction(f"unknown function {tok.text!r}", tok.offset,
                                      set(FUNCTIONS) | {"x"})
            self.i += 1
            if not self.at("("):
                self.fail(f"function {tok.text} needs an argument", {"("})
            self.i += 1
            arg = self.expr()
            if not self.at(")"):
                self.fail("unclosed call", {")", "+", "-", "*", "/", "^"})
            self.i += 1
            return call(tok.text, arg)
        if self.at("("):
            self.i += 1
            node = self.expr()
            if not self.at(")"):
                self.fail("unclosed parenthesis", {")", "+", "-", "*", "/", "^"})
            self.i += 1
            return node
        self.fail("expected an operand", _OPERAND)

    def _followed_by_caret(self, k):
        t = self.peek(k)
        return t.kind == "op" and t.text == "^"


def parse_expression(text: str) -> ExpressionNode:
    """Parse ``text`` into an :class:`ExpressionNode` tree.

    Raises :class:`ExpressionSyntaxError` (with ``offset`` and ``expected``)
    or :class:`UnknownFunction`.
    """
    return _Parser(text).parse()


# -- printer -----------------------------------------------------------------------

_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "pow": 3}
_SYMBOL = {"add": "+", "sub": "-", "mul": "*", "div": "/"}


def _prec(node):
    return _PREC.get(node.kind, 4)


def render(node: ExpressionNode) -> str:
    """Canonical text that parses back to a structurally identical tree."""
    kind = node.kind
    if kind == "constant":
        v = node.value
        if node.text is not None:
            return node.text
        if v.denominator == 1:
            return str(v.numerator)
        return f"({v.numerator}/{v.denominator})"
    if kind == "variable":
        return "x"
    if kind == "call":
        return f"{node.name}({render(node.children[0])})"
    left, right = node.children
    if kind == "pow":
        base = render(left)
        if _prec(left) < 4:
            base = f"({base})"
        return f"{base}^{right.value.numerator}"
    p = _PREC[kind]
    ls = render(left)
    rs = render(right)
    if _prec(left) < p:
        ls = f"({ls})"
    if _prec(right) <= p:
        rs = f"({rs})"
    return f"{ls} {_SYMBOL[kind]} {rs}"


# -- evaluation --------------------------------------------------------------------

def _flatbump_float(t):
    s = t * t
    # exp(-1/s) underflows to 0 once 1/s > ~745
    if s == 0.0 or s < 1.0 / 745.2:
        return 0.0
    return math.exp(-1.0 / s)


def _guard(fn, name):
    def wrapped(t):
        try:
            return fn(t)
        except (ValueError, OverflowError) as exc:
            raise DomainError(f"{name}({t!r}): {exc}") from None
    return wrapped


_FLOAT_FUNCS = {
    "exp": _guard(math.exp, "exp"),
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "atan": math.atan,
    "log1p": _guard(math.log1p, "log1p"),
    "sqrt": _guard(math.sqrt, "sqrt"),
    "expm1": _guard(math.expm1, "expm1"),
    "flatbump": _flatbump_float,
}


def _mp_funcs():
    import mpmath

    def log1p(t):
        if t <= -1:
            raise DomainError(f"log1p({t}) outside domain")
        return mpmath.log1p(t)

    def sqrt(t):
        if t < 0:
            raise DomainError(f"sqrt({t}) of a negative number")
        return mpmath.sqrt(t)

    def flatbump(t):
        return mpmath.mpf(0) if t == 0 else mpmath.exp(-1 / (t * t))

    return {
        "exp": mpmath.exp, "sin": mpmath.sin, "cos": mpmath.cos, "tan": mpmath.tan,
        "atan": mpmath.atan, "log1p": log1p, "sqrt": sqrt, "expm1": mpmath.expm1,
        "flatbump": flatbump,
    }


def eval_expression(e: ExpressionNode, x, backend: str = "float"):
    """Evaluate ``e`` at ``x``.

    ``backend="float"`` evaluates in binary64; ``backend="mpmath"`` evaluates
    with :mod:`mpmath` at its current working precision.  Leaving the real
    domain raises :class:`DomainError`.
    """
    if backend == "float":
        funcs = _FLOAT_FUNCS
        x = float(x)

        def lift(v):
            return float(v)
    elif backend == "mpmath":
        import mpmath
        funcs = _mp_funcs()
        x = mpmath.mpf(x)

        def lift(v):
            return mpmath.mpf(v.numerator) / v.denominator
    else:
        raise ValueError(f"unknown backend {backend!r}")

    def ev(node):
        kind = node.kind
        if kind == "constant":
            return lift(node.value)
        if kind == "variable":
            return x
        if kind == "call":
            return funcs[node.name](ev(node.children[0]))
        a = ev(node.children[0])
        if kind == "pow":
            n = node.children[1].value.numerator
            return a ** n
        b = ev(node.children[1])
        if kind == "add":
            return a + b
        if kind == "sub":
            return a - b
        if kind == "mul":
            return a * b
        if b == 0:
            raise DomainError("division by zero")
        return a / b

    try:
        return ev(e)
    except OverflowError as exc:
        raise DomainError(str(exc)) from None


# -- series expansion --------------------------------------------------------------

class _NeedsFloat(Exception):
    """An irrational constant term appeared while expanding in rational mode."""


def is_analytic(e: ExpressionNode) -> bool:
    """False when ``e`` contains the flat primitive ``flatbump``."""
    if e.kind == "call" and e.name == "flatbump":
        return False
    return all(is_analytic(c) for c in e.children)


def is_rational(e: ExpressionNode, N: int = 8) -> bool:
    """True when ``e`` has an exact rational Taylor expansion at 0."""
    try:
        _expand(e, N, S.RATIONAL)
    except _NeedsFloat:
        return False
    return True


@lru_cache(maxsize=None)
def _primitive(name: str, N: int, mode: str) -> TruncatedSeries:
    """Maclaurin series of the elementary primitives through degree ``N``."""
    if mode == "float":
        return S.to_float(_primitive(name, N, "rational"))
    fact = [1]
    for k in range(1, N + 2):
        fact.append(fact[-1] * k)
    if name == "exp":
        return S.series([Fraction(1, fact[k]) for k in range(N + 1)])
    if name == "expm1":
        return S.series([0] + [Fraction(1, fact[k]) for k in range(1, N + 1)])
    if name == "sin":
        return S.series([0 if k % 2 == 0 else Fraction((-1) ** (k // 2), fact[k])
                         for k in range(N + 1)])
    if name == "cos":
        return S.series([0 if k % 2 else Fraction((-1) ** (k // 2), fact[k])
                         for k in range(N + 1)])
    if name == "tan":
        return S.div(_primitive("sin", N, mode), _primitive("cos", N, mode))
    if name in ("atan", "log1p"):
        if N == 0:
            return S.series([0])
        # d/dx atan = 1/(1+x^2), d/dx log1p = 1/(1+x)
        den = [1, 0, 1] if name == "atan" else [1, 1]
        return S.integrate(S.div(S.constant(1, N - 1), S.series(den, order=N - 1)))
    if name == "sqrt1p":
        out = [Fraction(1)]
        for k in range(1, N + 1):
            out.append(out[-1] * (Fraction(1, 2) - (k - 1)) / k)
        return S.series(out)
    raise KeyError(name)


def _exact_sqrt(q: Fraction):
    p, r = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if p * p == q.numerator and r * r == q.denominator:
        return Fraction(p, r)
    return None


def _expand(e: ExpressionNode, N: int, ring) -> TruncatedSeries:
    kind = e.kind
    if kind == "constant":
        return S.constant(e.value, N, ring)
    if kind == "variable":
        return S.series([0, 1], ring, N)
    if kind == "add":
        return S.add(_expand(e.children[0], N, ring), _expand(e.children[1], N, ring))
    if kind == "sub":
        return S.sub(_expand(e.children[0], N, ring), _expand(e.children[1], N, ring))
    if kind == "mul":
        return S.mul(_expand(e.children[0], N, ring), _expand(e.children[1], N, ring))
    if kind == "pow":
        return S.pow_int(_expand(e.children[0], N, ring), e.children[1].value.numerator)
    if kind == "div":
        return _expand_div(e, N, ring)
    return _expand_call(e, N, ring)


def _expand_div(e, N, ring):
    num_node, den_node = e.children
    den = _expand(den_node, N, ring)
    if den.coeffs[0] != 0:
        return S.div(_expand(num_node, N, ring), den)
    # cancel a common power of x, e.g. sin(x)/x
    v = next((k for k, c in enumerate(den.coeffs) if c != 0), None)
    if v is None:
        v = next((k for k, c in enumerate(_expand(den_node, 2 * N + 2, ring).coeffs) if c != 0),
                 None)
        if v is None:
            raise NotExpandable(f"denominator {render(den_node)} has no nonzero term", e)
    num = _expand(num_node, N + v, ring)
    if any(c != 0 for c in num.coeffs[:v]):
        raise NotExpandable(f"{render(e)} has a pole at 0", e)
    den = _expand(den_node, N + v, ring)
    return S.div(S.shift_down(num, v), S.shift_down(den, v))


def _irrational(ring, value):
    if ring.exact:
        raise _NeedsFloat
    return value


def _expand_call(e, N, ring):
    name = e.name
    u = _expand(e.children[0], N, ring)
    u0 = u.coeffs[0]
    mode = ring.mode
    zero_u0 = u0 == 0
    if zero_u0 and name in ("exp", "expm1", "sin", "cos", "tan", "atan", "log1p"):
        return S.compose(_primitive(name, N, mode), u)
    v = S.sub(u, S.constant(u0, N, ring))  # u - u(0), vanishes at 0
    if name == "flatbump":
        if zero_u0:
            return S.constant(0, N, ring)
        _irrational(ring, None)
        # exp(-1/u^2) with u(0) != 0 is analytic at 0
        inv_sq = S.neg(S.div(S.constant(1, N, ring), S.mul(u, u)))
        return _exp_shifted(inv_sq, N, ring)
    if name == "exp":
        return _exp_shifted(u, N, ring)
    if name == "expm1":
        return S.sub(_exp_shifted(u, N, ring), S.constant(1, N, ring))
    if name in ("sin", "cos", "tan"):
        _irrational(ring, None)
        s0, c0 = math.sin(float(u0)), math.cos(float(u0))
        sv = S.compose(_primitive("sin", N, mode), v)
        cv = S.compose(_primitive("cos", N, mode), v)
        sin_u = S.add(S.scale(cv, s0), S.scale(sv, c0))
        cos_u = S.sub(S.scale(cv, c0), S.scale(sv, s0))
        if name == "sin":
            return sin_u
        if name == "cos":
            return cos_u
        if cos_u.coeffs[0] == 0:
            raise NotExpandable("tan has a pole at the expansion point", e)
        return S.div(sin_u, cos_u)
    if name in ("atan", "log1p"):
        if name == "log1p" and u0 <= -1:
            raise NotExpandable("log1p argument must exceed -1 at 0", e)
        c = _irrational(ring, math.atan(u0) if name == "atan" else math.log1p(u0))
        if N == 0:
            return S.constant(c, 0, ring)
        du = S.derivative(u)
        base = S.add(S.constant(1, N - 1, ring),
                     S.mul(S.truncate(u, N - 1), S.truncate(u, N - 1)) if name == "atan"
                     else S.truncate(u, N - 1))
        return S.integrate(S.div(du, base), c)
    if name == "sqrt":
        if zero_u0:
            if all(c == 0 for c in u.coeffs):
                return u
            raise NotExpandable("sqrt argument vanishes at 0; no power series", e)
        if u0 < 0:
            raise NotExpandable("sqrt argument is negative at 0", e)
        r = _exact_sqrt(u0) if ring.exact else math.sqrt(u0)
        if r is None:
            raise _NeedsFloat
        rel = S.scale(v, 1 / u0)
        return S.scale(S.compose(_primitive("sqrt1p", N, mode), rel), r)
    raise NotExpandable(f"no expansion rule for {name}", e)


def _exp_shifted(u, N, ring):
    u0 = u.coeffs[0]
    body = S.compose(_primitive("exp", N, ring.mode), S.sub(u, S.constant(u0, N, ring)))
    if u0 == 0:
        return body
    _irrational(ring, None)
    return S.scale(body, math.exp(u0))


def series_expand(e: ExpressionNode, N: int, mode: str | None = None) -> TruncatedSeries:
    """Taylor expansion of ``e`` at 0 through degree ``N``.

    With ``mode=None`` the result is exact rational whenever every constant
    term involved is rational, and binary64 otherwise.  Forcing
    ``mode="rational"`` on an expression with irrational coefficients raises
    :class:`NotExpandable`.  ``flatbump`` of an argument vanishing at 0
    contributes its jet, the zero series; use :func:`is_analytic` to tell
    such expansions apart from convergent ones.
    """
    if N < 0:
        raise ValueError("order must be nonnegative")
    if mode in (None, "rational"):
        try:
            return _expand(e, N, S.RATIONAL)
        except _NeedsFloat:
            if mode == "rational":
                raise NotExpandable(
                    f"{render(e)} has irrational Taylor coefficients", e) from None
    elif mode != "float":
        raise ValueError(f"unknown mode {mode!r}")
    return _expand(e, N, S.FLOAT)
