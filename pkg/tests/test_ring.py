"""Truncated ring arithmetic against plain integer oracles."""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from btstab.errors import CtxMismatch, NotAUnit, NotEisenstein, PrecisionTooSmall, ResidueReducible
from btstab.ring import (ABOVE_PRECISION, NOT_A_UNIT, format_element, make_base_field, parse_base,
                         parse_element, unit_level, v2)

N = 8
Q2 = make_base_field("trivial", None, N)
S2 = parse_base("q2sqrt2", N)  # x^2 = 2
ints = st.integers(min_value=-10 ** 6, max_value=10 ** 6)


def s2_val(c0, c1):
    """val of c0 + c1 sqrt2 computed from integers (min over distinct parities)."""
    vals = [2 * v2(c0)] if c0 else []
    vals += [2 * v2(c1) + 1] if c1 else []
    return min(vals) if vals else None


@given(ints, ints)
def test_q2_matches_integers_mod_2N(a, b):
    x, y = Q2(a), Q2(b)
    assert (x + y).coeffs == ((a + b) % 2 ** N,)
    assert (x * y).coeffs == ((a * b) % 2 ** N,)
    assert (-x).coeffs == ((-a) % 2 ** N,)


@given(ints.filter(lambda a: a % 2))
def test_q2_inverse(a):
    assert Q2(a).inverse().coeffs == (pow(a, -1, 2 ** N),)


@given(ints, ints, ints, ints)
def test_sqrt2_product_matches_exact_formula(a0, a1, b0, b1):
    x, y = S2((a0, a1)), S2((b0, b1))
    assert x * y == S2((a0 * b0 + 2 * a1 * b1, a0 * b1 + a1 * b0))


@given(ints, ints)
def test_sqrt2_valuation(c0, c1):
    want = s2_val(c0, c1)
    got = S2((c0, c1)).valuation()
    if want is None or want >= N:
        assert got is ABOVE_PRECISION
    else:
        assert got == want


@settings(max_examples=50)
@given(ints, ints)
def test_sqrt2_inverse_roundtrip(c0, c1):
    x = S2((2 * c0 + 1, c1))
    assert x * x.inverse() == S2.one


def test_uniformizer_division():
    w = S2.uniformizer
    assert (w * w).divide_by_uniformizer() == w.reduce(N - 1)
    assert Q2(12).divide_by_uniformizer().coeffs == (6,)
    with pytest.raises(NotAUnit):
        Q2(3).divide_by_uniformizer()


def test_reduce_and_residues():
    assert len(list(S2.residues(3))) == 8
    assert len(list(Q2.residues(3))) == 8
    assert S2((5, 3)).reduce(1) == S2((1, 0))


def test_unit_level():
    assert unit_level(Q2(5)) == 2
    assert unit_level(Q2(1)) == N - 1
    assert unit_level(Q2(2)) is NOT_A_UNIT


def test_literals_roundtrip():
    for text in ("0", "5", "3+1*w", "0+1*w"):
        assert format_element(parse_element(S2, text)) == text
    assert parse_element(S2, "w") == S2.uniformizer
    with pytest.raises(ValueError):
        parse_element(Q2, "1+w")


def test_constructor_errors():
    with pytest.raises(NotEisenstein):
        make_base_field("eisenstein", [2, 1], 3)
    with pytest.raises(ResidueReducible):
        make_base_field("unramified", [1, 0, 1], 3)
    with pytest.raises(PrecisionTooSmall):
        make_base_field("trivial", None, 0)
    with pytest.raises(CtxMismatch):
        Q2(1) + S2(1)
