from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import settings, strategies as st

from neron import corpus
from neron.neron_dim1 import build_desingularization, select_system
from neron.neron_special import special_desingularization
from neron.polycore import Polynomial, PolyRing

settings.register_profile("default", deadline=None, max_examples=60, derandomize=True)
settings.register_profile("stress", deadline=None, max_examples=300)
settings.load_profile("default")


@lru_cache(maxsize=None)
def problem(name):
    return corpus.load(name)


@lru_cache(maxsize=None)
def dim1(name):
    return problem(name).to_desing_problem()


@lru_cache(maxsize=None)
def presentation(name):
    p = dim1(name)
    return build_desingularization(p, select_system(p))


@lru_cache(maxsize=None)
def special(name):
    sp = problem(name).to_special_problem()
    return sp, special_desingularization(sp)


@pytest.fixture
def cusp_ring():
    return PolyRing(("x", "Y1", "Y2", "Y3", "Y4"))


small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def polynomials(ring, max_terms=5, max_deg=3):
    """Random polynomials of total degree at most ``max_deg``."""
    n = ring.nvars
    exps = st.tuples(*[st.integers(0, max_deg)] * n).filter(lambda e: sum(e) <= max_deg)
    return st.dictionaries(exps, small, max_size=max_terms).map(
        lambda d: Polynomial.from_dict(ring, d))


def u_series(N):
    """u1 = EXP, v1 = FACT, u2 = sqrt(u1^3), v2 = 3/2 u1^2 v1 / u2 mod x^N."""
    from neron.series import EXP, FACT, series_inverse, series_sqrt
    u1, v1 = EXP(N), FACT(N)
    u2 = series_sqrt(u1 ** 3)
    v2 = u1 * u1 * v1 * series_inverse(u2) * Fraction(3, 2)
    return u1, u2, v1, v2


REPORT = []


def report(criterion, passed, detail=""):
    line = f"{'PASS' if passed else 'FAIL'} criterion {criterion}" + (f": {detail}" if detail else "")
    REPORT.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if REPORT:
        terminalreporter.section("acceptance")
        for line in REPORT:
            terminalreporter.write_line(line)
