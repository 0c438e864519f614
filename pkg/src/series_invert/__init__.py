"""Power series reversion by Lagrange inversion, plus jet-only inversion of smooth functions."""

from .corpus import CORPUS, CorpusEntry, corpus_lookup, corpus_names
from .errors import *  # noqa: F401,F403
from .expr import ExpressionNode, eval_expression, parse_expression, render, series_expand
from .functions import SmoothFunction, from_expression
from .oracle import BracketingInterval, bracket_inverse, numeric_inverse
from .reversion import (
    InversionResult,
    lagrange_burmann,
    lagrange_revert,
    newton_revert,
    revert,
    triangular_revert,
)
from .series import (
    FLOAT,
    RATIONAL,
    CoefficientRing,
    TruncatedSeries,
    add,
    coeff_at,
    compose,
    derivative,
    div,
    eval_at,
    mul,
    pow_int,
    variable,
)
from .smooth import (
    Jet,
    RemainderReport,
    classify_decay,
    estimate_remainder_order,
    extract_jet,
    inverse_taylor,
)

__version__ = "0.1.0"
