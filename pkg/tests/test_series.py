import math
import random

import pytest
from hypothesis import given, strategies as st

from conftest import F3, F5, F9, rand_unit, series_strategy
from symspringer.errors import (
    DivisionByZero,
    FieldMismatch,
    InsufficientPrecision,
    InvalidInput,
    SeriesSyntaxError,
    ValuationOfZero,
)
from symspringer.series import (
    LaurentSeries,
    get_working_precision,
    parse_series,
    parse_series_list,
    require_precision_for,
    working_precision,
)


def S(text, field=F3):
    return parse_series(text, field)


def known_terms(a):
    """Coefficient codes at every exponent below the precision, as a dict."""
    return {k: c.code for k, c in a.terms().items()}


def naive_product(a, b):
    """Schoolbook convolution of the stored coefficients, with the precision rule."""
    f = a.field
    out = {}
    for i, x in a.terms().items():
        for j, y in b.terms().items():
            out[i + j] = f.add(out.get(i + j, 0), f.mul(x.code, y.code))
    prec = min(a.prec + b.lower_bound() if a.prec is not None else math.inf,
               b.prec + a.lower_bound() if b.prec is not None else math.inf)
    return {k: c for k, c in out.items() if c and k < prec}, prec


# -- parsing and printing ----------------------------------------------------------

def test_parse_examples():
    a = S("1 + t^2")
    assert a.exact and known_terms(a) == {0: 1, 2: 1}
    assert S("t^-1 - t^-1").is_zero
    with pytest.raises(SeriesSyntaxError):
        S("2t^3")
    with pytest.raises(SyntaxError):
        S("1 +")


def test_parse_grammar_variants():
    assert known_terms(S("-t^-2 + 2*t")) == {-2: 2, 1: 2}
    assert known_terms(S("  3*t^0 ")) == {}
    assert S("1 + t + O(t^3)").prec == 3
    b = S("(u+1)*t^-1 + u", F9)
    assert b.valuation() == -1
    assert parse_series_list("1, 1+t, t^2", F3)[2] == LaurentSeries.t_power(F3, 2)


@given(series_strategy(F3))
def test_print_parse_round_trip(a):
    assert S(str(a)) == a


@given(series_strategy(F9, exact=True))
def test_print_parse_round_trip_extension(a):
    assert parse_series(str(a), F9) == a


# -- arithmetic -------------------------------------------------------------------

def test_arithmetic_examples():
    assert (S("1+t") * S("1-t")) == S("1 - t^2")
    assert (S("1+t") * S("1-t")).exact
    prod = S("1 + O(t^2)") * S("t + O(t^3)")
    assert str(prod) == "t + O(t^3)"
    assert (S("1+t") + S("-1-t")).is_zero


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        S("1") + S("1", F5)


@given(series_strategy(F3), series_strategy(F3))
def test_product_matches_schoolbook(a, b):
    terms, prec = naive_product(a, b)
    p = a * b
    expect_prec = None if prec == math.inf else prec
    if not (a.exact and b.exact) and (a.is_zero or b.is_zero):
        # exact zero times anything is exactly zero
        assert p.is_zero
        return
    assert p.prec == expect_prec
    assert known_terms(p) == terms


@given(series_strategy(F3), series_strategy(F3))
def test_sum_precision(a, b):
    s = a + b
    precs = [x.prec for x in (a, b) if x.prec is not None]
    assert s.prec == (min(precs) if precs else None)
    for k, c in s.terms().items():
        assert s.prec is None or k < s.prec


@given(series_strategy(F3), series_strategy(F3), series_strategy(F3))
def test_ring_laws_up_to_precision(a, b, c):
    assert ((a + b) + c).agrees(a + (b + c))
    assert (a * (b + c)).agrees(a * b + a * c)
    assert (a * b).agrees(b * a)


@given(series_strategy(F3), series_strategy(F3))
def test_valuation_is_additive(a, b):
    if not a.codes or not b.codes:
        return
    p = a * b
    assert p.valuation() == a.valuation() + b.valuation()


# -- inverse ----------------------------------------------------------------------

def test_inverse_examples():
    w = get_working_precision()
    inv = S("1 - t").inverse()
    assert inv.prec == w
    assert known_terms(inv) == {k: 1 for k in range(w)}
    assert S("t^2").inverse() == S("t^-2") and S("t^2").inverse().exact
    with pytest.raises(InsufficientPrecision):
        S("O(t^3)").inverse()
    with pytest.raises(DivisionByZero):
        S("0").inverse()
    with pytest.raises(ZeroDivisionError):
        S("1") / S("0")


def test_inverse_of_inexact_input_precision():
    a = S("t^2 + t^3 + O(t^6)")
    inv = a.inverse()
    assert inv.prec == 6 - 2 * 2
    assert (a * inv).agrees(S("1"))


def test_inverse_random_units_and_non_units():
    rng = random.Random(3)
    for i in range(500):
        f = F5 if i % 2 else F9
        u = rand_unit(rng, f, 4)
        a = u * LaurentSeries.t_power(f, rng.randint(-3, 3))
        if i % 3 == 0:
            a = a.truncate(a.valuation() + 6)
        inv = a.inverse()
        prod = a * inv
        assert prod.agrees(LaurentSeries.one(f))
        assert prod.prec is None or prod.prec >= 4


def test_working_precision_context():
    with working_precision(10):
        assert S("1 - t").inverse().prec == 10
        with pytest.raises(InsufficientPrecision):
            require_precision_for(3)
    assert get_working_precision() == 32
    require_precision_for(8)
    with pytest.raises(InvalidInput):
        with working_precision(0):
            pass


# -- valuation and integrality ----------------------------------------------------------

def test_valuation_examples():
    assert S("t^-2 + 1").valuation() == -2
    assert (S("1") - S("1 + t^2")).valuation() == 2
    with pytest.raises(ValuationOfZero):
        S("0").valuation()
    assert S("0").valuation(allow_zero=True) == math.inf
    with pytest.raises(InsufficientPrecision):
        S("O(t^4)").valuation()


def test_integrality_examples():
    assert S("1 + t").is_integral()
    assert not S("t^-1").is_integral()
    with pytest.raises(InsufficientPrecision):
        S("O(t^0)").is_integral()
    assert S("O(t^0)").is_surely_integral()
    assert S("0").is_integral()


def test_unknown_zero_never_becomes_exact():
    a = S("1 + t + O(t^2)") - S("1 + t")
    assert a.is_unknown and not a.is_zero
    assert str(a) == "O(t^2)"


@given(series_strategy(F3))
def test_no_coefficient_beyond_precision(a):
    for op in (a * a, a + a, -a, a * S("1 + t")):
        if op.prec is not None:
            assert all(k < op.prec for k in op.terms())
            with pytest.raises(InsufficientPrecision):
                op.coefficient(op.prec)


def test_exact_quotient():
    a = S("1 + t") * S("t^-1 + 2 + t^3")
    assert a.exact_quotient(S("1 + t")) == S("t^-1 + 2 + t^3")
    with pytest.raises(ValueError):
        S("1 + t^2").exact_quotient(S("1 + t"))


def test_map_field_embeds_coefficients():
    a = S("2 + t - t^3")
    b = a.map_field(F9)
    assert b.field is F9
    assert str(b) == str(a)


@given(st.integers(-5, 5), st.integers(0, 8))
def test_truncate_and_polynomial_part(k, m):
    a = S("t^-5 + 2*t^-1 + 1 + t^3 + t^7")
    tr = a.truncate(m)
    assert tr.prec == m
    assert tr.agrees(a)
    pp = a.polynomial_part(k)
    assert pp.exact and all(e < k for e in pp.terms())
