"""Matrix groups mod p^N: arithmetic, action, filtration shapes and tori."""
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from btstab.errors import BudgetExceeded
from btstab.grp import (GroupElem, Shape, act, closure_subgroup, conj_by_P, elements_of_shape,
                        enumerate_sl2, norm_one_torus, parse_matrix, preimage, sl2_order, special_matrix,
                        subgroup_member, subgroup_shape, torus_members, trace_zero_for_point)
from btstab.quadext import make_extension, parse_extension
from btstab.ring import parse_base
from btstab.tree import distance, normalize_point, vertices_up_to

N = 4
F = parse_base("q2", N)
ints = st.integers(min_value=-1000, max_value=1000)


def sl2(rng, ctx=F):
    """Random element as a product of unipotents."""
    res = list(ctx.residues(ctx.precision))
    b, c, c2 = (rng.choice(res) for _ in range(3))
    u = GroupElem(ctx, ctx.one, b, ctx.zero, ctx.one)
    lo = GroupElem(ctx, ctx.one, ctx.zero, c, ctx.one)
    lo2 = GroupElem(ctx, ctx.one, ctx.zero, c2, ctx.one)
    return lo * u * lo2


@given(ints, ints, ints, ints, ints, ints, ints, ints)
def test_product_matches_integer_matrices(a, b, c, d, e, f, g, h):
    x = GroupElem(F, a, b, c, d, check=False)
    y = GroupElem(F, e, f, g, h, check=False)
    m = 2 ** N
    want = ((a * e + b * g) % m, (a * f + b * h) % m, (c * e + d * g) % m, (c * f + d * h) % m)
    p = x * y
    got = tuple(z.coeffs[0] for z in (p.a, p.b, p.c, p.d))
    assert got == want


def test_inverse_and_literal():
    rng = random.Random(1)
    for _ in range(20):
        g = sl2(rng)
        assert g * g.inverse() == GroupElem.identity(F)
        assert parse_matrix(F, g.literal()) == g


def test_sl2_order_and_enumeration():
    for n in (1, 2, 3):
        assert sl2_order(F, n) == 3 * 2 ** (3 * n - 2)
        elems = list(enumerate_sl2(F, n))
        assert len(elems) == sl2_order(F, n) == len(set(elems))
        assert all(g.det() == g.ctx.one for g in elems)
    with pytest.raises(BudgetExceeded):
        enumerate_sl2(F, 4, budget=100)


def test_enumeration_chunks_partition_the_group():
    enum = enumerate_sl2(F, 2)
    parts = [set(enum.chunk(i, 3)) for i in range(3)]
    assert sum(len(p) for p in parts) == len(enum)
    assert set().union(*parts) == set(enum)


@pytest.mark.parametrize("spec", ["unram", "eis:0,1"])
def test_action_is_an_isometric_group_action(spec):
    base = parse_base("q2", 8)
    E = make_extension(base, parse_extension(base, spec))
    ctx = base.with_precision(2)
    rng = random.Random(3)
    verts = vertices_up_to(E, 2 * E.e_EF)[:40]
    for _ in range(10):
        g, h = sl2(rng, ctx), sl2(rng, ctx)
        for v in verts:
            assert act(g, act(h, v)) == act(g * h, v)
        u, v = verts[5], verts[-1]
        assert distance(act(g, u), act(g, v)) == distance(u, v)


def test_shapes():
    assert subgroup_shape("K", 2, 1) == Shape(2, 2, 2)
    assert subgroup_shape("J", 0, 1) == Shape(0, 0, 0)
    assert subgroup_shape("J", 2, 1) == Shape(1, 2, 2)
    assert subgroup_shape("J", 4, 2) == Shape(2, 4, 4)
    assert subgroup_shape("B", 3, 1) == Shape(0, 0, 3)
    assert subgroup_shape("I", 2, 1) == Shape(1, 1, 2)
    assert Shape(1, 2, 3).conj_P() == Shape(1, 2, 3)
    with pytest.raises(ValueError):
        subgroup_shape("I", 3, 1)


def test_shape_sets_are_subgroups():
    F3 = F.with_precision(3)
    for name, n in (("K", 1), ("J", 2), ("Jr", 3), ("I", 2), ("B", 2)):
        elems = elements_of_shape(F3, subgroup_shape(name, n, 1), 3)
        keys = {g.key() for g in elems}
        for g in elems[:20]:
            for h in elems[:20]:
                assert (g * h.inverse()).key() in keys


def test_membership_and_P_conjugation():
    F3 = F.with_precision(3)
    g = GroupElem(F3, 1, 1, 2, 3)
    assert subgroup_member(g, "B", 1)
    assert not subgroup_member(g, "K", 1)
    P = special_matrix("P", F3)
    assert conj_by_P(g) is not None
    assert special_matrix("W", F3).det() == F3.one
    assert P.det() == -F3.uniformizer


def test_odd_iwahori_closure():
    F3 = F.with_precision(3)
    I3 = closure_subgroup(F3, "I", 3)
    K2 = {g.key() for g in elements_of_shape(F3, subgroup_shape("K", 2, 1), 3)}
    I2 = {g.key() for g in elements_of_shape(F3, subgroup_shape("I", 2, 1), 3)}
    keys = {g.key() for g in I3}
    assert K2 < keys <= I2


def test_preimage_sizes():
    keys = {GroupElem.identity(F.with_precision(1)).key()}
    up = preimage(keys, F, 1, 3)
    assert len(up) == sl2_order(F, 3) // sl2_order(F, 1)
    assert all(GroupElem(F.with_precision(3), *k, check=False).reduce(1).key() in keys for k in up)


@pytest.mark.parametrize("spec", ["unram", "eis:2,1", "eis:0,1"])
def test_compact_torus(spec):
    base = parse_base("q2", 8)
    E = make_extension(base, parse_extension(base, spec), 16)
    tz = trace_zero_for_point(E.one, E.gen, E)
    assert (tz.entries.a + tz.entries.d).is_zero()
    for r in (1, 2, 3):
        T = norm_one_torus(tz, r)
        Fr = base.with_precision(r)
        elems = [GroupElem(Fr, *k, check=False) for k in T]
        assert all(g.det() == Fr.one for g in elems)
        C = tz.gen.reduce(r)
        assert all(g * C == C * g for g in elems)
        assert T <= torus_members(tz.__class__(tz.entries, C, tz.disc, tz.eigenvalue, tz.line), r, r)
        keys = {g.key() for g in elems}
        assert all((g * h).key() in keys for g in elems for h in elems)
