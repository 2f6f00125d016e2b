"""Quadratic extensions: arithmetic oracles, census and the norm lemmas."""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from btstab.errors import InvalidDescriptor, NotRamified, PrecisionTooSmall
from btstab.quadext import (classify_extensions, different_valuation, make_extension, norm_fiber_check,
                            norm_kernel_check, parse_extension, parse_ext_element, format_ext_element)
from btstab.ring import parse_base

F = parse_base("q2", 8)
SPECS = ["unram", "eis:2,1", "eis:0,1", "eis:0,7"]
ints = st.integers(min_value=-10 ** 5, max_value=10 ** 5)


def ext_of(spec):
    return make_extension(F, parse_extension(F, spec))


def coeffs_AB(ext):
    return int(ext._A.coeffs[0]), int(ext._B.coeffs[0])


@pytest.mark.parametrize("spec", SPECS)
@given(a0=ints, a1=ints, b0=ints, b1=ints)
@settings(max_examples=40)
def test_product_and_norm_against_polynomial_oracle(spec, a0, a1, b0, b1):
    E = ext_of(spec)
    A, B = coeffs_AB(E)
    z, w = E(a0, a1), E(b0, b1)
    # (a0 + a1 x)(b0 + b1 x) with x^2 = -A x - B
    c2 = a1 * b1
    assert z * w == E(a0 * b0 - B * c2, a0 * b1 + a1 * b0 - A * c2)
    assert z.norm() == E.base(a0 * a0 - A * a0 * a1 + B * a1 * a1)
    assert z.trace() == E.base(2 * a0 - A * a1)
    assert z.conj().conj() == z
    assert (z * w).conj() == z.conj() * w.conj()


def test_census_q2():
    descs = classify_extensions(F)
    assert len(descs) == 7
    assert sorted(d.diff_val for d in descs) == [0, 2, 2, 3, 3, 3, 3]
    for d in descs:
        assert different_valuation(make_extension(F, d)) == d.diff_val


def test_census_q2sqrt2():
    base = parse_base("q2sqrt2", 8)
    descs = classify_extensions(base)
    assert len(descs) == 15
    assert descs[0].kind == "unramified"
    for d in descs[1:]:
        assert different_valuation(make_extension(base, d)) == d.diff_val


def test_census_precision_guard():
    with pytest.raises(PrecisionTooSmall):
        classify_extensions(parse_base("q2", 3))


def test_bad_descriptors():
    with pytest.raises(InvalidDescriptor):
        parse_extension(F, "eis:1,1")  # a must lie in p
    with pytest.raises(InvalidDescriptor):
        parse_extension(F, "eis:2,2")  # b must be a unit
    with pytest.raises(ValueError):
        parse_extension(F, "cubic")


def test_uniformizer_and_valuations():
    E = ext_of("eis:0,1")
    pi = E.uniformizer
    assert pi.valuation() == 1
    assert E.embed(2).valuation() == 2
    U = ext_of("unram")
    assert U.embed(2).valuation() == 1
    assert U.gen.valuation() == 0


def test_element_literals():
    E = ext_of("eis:2,1")
    z = parse_ext_element(E, "3,1")
    assert format_ext_element(z) == "3,1"


@pytest.mark.parametrize("spec", ["unram", "eis:2,1", "eis:2,3", "eis:0,1", "eis:0,3", "eis:0,5", "eis:0,7"])
def test_norm_fiber(spec):
    E = ext_of(spec)
    for n in (1, 2, 3):
        chk = norm_fiber_check(E, n)
        assert chk.holds, chk.to_json()
        if E.ramified:
            assert chk.exponent == 2 * n - min(n, E.desc.diff_val - 1)
        else:
            assert chk.exponent == n


@pytest.mark.parametrize("spec", ["eis:2,1", "eis:0,1"])
def test_norm_kernel(spec):
    checks = norm_kernel_check(ext_of(spec), 3)
    assert [c.name for c in checks[:2]] == ["casselman(a):containment", "casselman(a):order"]
    assert all(c.holds for c in checks), [c.to_json() for c in checks]


def test_norm_kernel_needs_ramified():
    with pytest.raises(NotRamified):
        norm_kernel_check(ext_of("unram"), 1)
