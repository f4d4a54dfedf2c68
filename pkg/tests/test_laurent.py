from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tavorder.errors import NotDivisible, ZeroAtNegativeExponent
from tavorder.laurent import (ONE, T, ZERO, LaurentPoly, PolyMatrix, equal_up_to_units,
                              exact_divide, format_laurent, lp_arith, lp_eval,
                              lp_unit_normalize, parse_laurent)

P = parse_laurent

polys = st.dictionaries(st.integers(-6, 6), st.integers(-20, 20), max_size=6).map(LaurentPoly)


def test_arith_examples():
    assert lp_arith(T - ONE, T + ONE, "mul") == P("t^2 - 1")
    assert lp_arith(P("t^2 - t + 1"), ZERO, "mul") == ZERO
    assert P("t^2 - t + 1") * LaurentPoly.monomial(1, -1) == P("t - 1 + t^(-1)")
    assert lp_arith(T, ONE, "add") == P("t + 1")
    assert lp_arith(T, T, "sub").is_zero()


def test_no_zero_coefficients_stored():
    p = LaurentPoly({0: 1, 1: 0, 2: -3}) + LaurentPoly({2: 3})
    assert p.terms == {0: 1}
    assert ZERO.terms == {}


def test_unit_normalize_examples():
    nf = lp_unit_normalize(-LaurentPoly.monomial(1, -3) * P("t^2 - 3t + 1"))
    assert (nf.poly, nf.shift, nf.sign) == (P("t^2 - 3t + 1"), -3, -1)
    nf = lp_unit_normalize(ZERO)
    assert (nf.poly, nf.shift, nf.sign) == (ZERO, 0, 1)
    nf = lp_unit_normalize(P("5t^4"))
    assert (nf.poly, nf.shift, nf.sign) == (P("5"), 4, 1)


@given(polys, st.integers(-5, 5), st.sampled_from([1, -1]))
def test_unit_normalize_orbit_invariant(p, k, s):
    nf = lp_unit_normalize(p)
    assert nf.restore() == p
    assert lp_unit_normalize(nf.poly).poly == nf.poly
    assert lp_unit_normalize((p * s).shift(k)).poly == nf.poly
    if not p.is_zero():
        assert nf.poly.valuation() == 0 and nf.poly.leading_coeff() > 0


def test_eval_examples():
    assert lp_eval(P("t^2 - t + 1"), 1) == 1
    assert lp_eval(P("t^2 - 3t + 1"), 1) == -1
    assert lp_eval(P("t - 1 + t^(-1)"), 2) == Fraction(3, 2)
    assert lp_eval(P("t - 1 + t^(-1)"), 2, modulus=7) == (3 * pow(2, -1, 7)) % 7
    with pytest.raises(ZeroAtNegativeExponent):
        lp_eval(P("t^(-1)"), 0)


@settings(max_examples=60)
@given(polys, polys, st.integers(-9, 9).filter(lambda x: x != 0))
def test_eval_is_ring_hom(a, b, x):
    assert lp_eval(a * b, x) == lp_eval(a, x) * lp_eval(b, x)
    assert lp_eval(a + b, x) == lp_eval(a, x) + lp_eval(b, x)
    p = 2305843009213693951
    assert lp_eval(a * b, x, p) == lp_eval(a, x, p) * lp_eval(b, x, p) % p


@given(polys)
def test_parse_format_roundtrip(p):
    assert parse_laurent(format_laurent(p)) == p


def test_exact_divide():
    assert exact_divide(P("t^2 - 1"), P("t - 1")) == P("t + 1")
    assert exact_divide(P("t^(-1) - t"), P("1 - t")) == P("t^(-1) + 1")
    with pytest.raises(NotDivisible):
        exact_divide(P("t^2 + 1"), P("t - 1"))
    with pytest.raises(NotDivisible):
        exact_divide(P("t + 1"), P("2"))


def test_equal_up_to_units():
    assert equal_up_to_units(P("t^2 - t + 1"), P("-t^(-1) + 1 - t"))
    assert not equal_up_to_units(P("t^2 - t + 1"), P("t^2 + t + 1"))


def test_polymatrix_clearing():
    m = PolyMatrix([[P("t^(-1)"), P("t")], [ZERO, P("1 + t^3")]])
    sparse, shift, span, zero_row = m.cleared()
    assert shift == -1 and span == 2 + 3 and not zero_row
    assert PolyMatrix([[ZERO, ZERO], [ONE, T]]).cleared()[3]
