import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from symspringer.gf import make_field
from symspringer.linalg import MatrixF, det
from symspringer.series import LaurentSeries
from symspringer.symspace import TorusElement, is_regular

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

F3 = make_field(3)
F5 = make_field(5)
F9 = make_field(3, 2)


@pytest.fixture
def rng():
    return random.Random(20240611)


def rand_poly(rng, field, lo=0, hi=3, density=0.6):
    """Random exact Laurent polynomial with exponents in [lo, hi]."""
    terms = {k: rng.randrange(field.q) for k in range(lo, hi + 1) if rng.random() < density}
    return LaurentSeries.from_codes(field, terms)


def rand_nonzero(rng, field, lo=0, hi=3):
    while True:
        s = rand_poly(rng, field, lo, hi)
        if not s.is_zero:
            return s


def rand_unit(rng, field, hi=3):
    c = {0: rng.randrange(1, field.q)}
    c.update({k: rng.randrange(field.q) for k in range(1, hi + 1)})
    return LaurentSeries.from_codes(field, c)


def rand_matrix(rng, field, n, lo=-1, hi=2):
    return MatrixF([[rand_poly(rng, field, lo, hi) for _ in range(n)] for _ in range(n)], field)


def rand_invertible(rng, field, n, lo=-1, hi=2):
    while True:
        m = rand_matrix(rng, field, n, lo, hi)
        if not det(m).is_zero:
            return m


def rand_gl_o(rng, field, n):
    """Random element of GL_n(o): integral polynomial entries, unit determinant."""
    while True:
        m = rand_matrix(rng, field, n, 0, 2)
        d = det(m)
        if not d.is_zero and d.valuation() == 0:
            return m


def rand_regular_x(rng, field, n, max_val=2):
    """Distinct exact x_i, each t^v times a polynomial."""
    while True:
        x = [LaurentSeries.t_power(field, rng.randint(0, max_val)) * rand_unit(rng, field, 2) for _ in range(n)]
        if is_regular(x):
            return x


def rand_torus_point(rng, field, x):
    """Monomial point (c t^u, d t^w) of X(T, gamma)."""
    n = len(x)
    u = [rng.randint(-2, 2) for _ in range(n)]
    w = [ui + rng.randint(0, min(xi.valuation(), 3)) for ui, xi in zip(u, x)]
    c = [rng.randrange(1, field.q) for _ in range(n)]
    d = [rng.randrange(1, field.q) for _ in range(n)]
    r = [LaurentSeries.from_codes(field, {ui: ci}) for ui, ci in zip(u, c)]
    s = [LaurentSeries.from_codes(field, {wi: di}) for wi, di in zip(w, d)]
    return TorusElement(r, s)


@st.composite
def series_strategy(draw, field=F3, lo=-2, hi=4, exact=None):
    terms = draw(st.dictionaries(st.integers(lo, hi), st.integers(0, field.q - 1), max_size=5))
    is_exact = draw(st.booleans()) if exact is None else exact
    if is_exact:
        return LaurentSeries.from_codes(field, terms)
    return LaurentSeries.from_codes(field, terms, prec=hi + 1)
