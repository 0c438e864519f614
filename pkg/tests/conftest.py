from fractions import Fraction as Q

import pytest

from series_invert import series as S


def poly(*coeffs, order=None, mode="rational"):
    """Shorthand: poly(1, 2) is 1 + 2x."""
    return S.series(coeffs, mode, order)


@pytest.fixture
def Qf():
    return Q


from hypothesis import settings  # noqa: E402

settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")
