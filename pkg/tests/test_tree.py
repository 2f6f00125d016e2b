"""Tree coordinates, metric, embedding of T_F and the Galois action."""
import random

import pytest

from btstab.errors import NotUnimodular, PointIsRational, PrecisionTooSmall
from btstab.quadext import make_extension, parse_extension
from btstab.ring import parse_base
from btstab.suites import check_barbs, check_dilation, check_galois
from btstab.tree import (ancestor, barb_diameter, children, distance, embed_F_vertex, export_dot,
                         export_json, galois_act_vertex, is_embedded_vertex, is_galois_fixed, is_rational,
                         level_of, meet_depth, normalize_point, quadratic_point, root, vertices_at_depth,
                         vertices_up_to)

F = parse_base("q2", 8)


def ext_of(spec, base=F):
    return make_extension(base, parse_extension(base, spec))


def test_vertex_counts():
    assert [len(vertices_at_depth(F, n)) for n in range(5)] == [1, 3, 6, 12, 24]
    E = ext_of("eis:0,1")
    assert [len(vertices_at_depth(E, n)) for n in range(4)] == [1, 3, 6, 12]
    U = ext_of("unram")
    assert [len(vertices_at_depth(U, n)) for n in range(3)] == [1, 5, 20]


def test_normalization():
    v = normalize_point(F(3), F(6), 3)
    assert v.label() == "1:2:3"
    assert normalize_point(F(2), F(5), 2).label() == "2:1:2"
    with pytest.raises(NotUnimodular):
        normalize_point(F(2), F(4), 2)
    with pytest.raises(PrecisionTooSmall):
        normalize_point(F(1), F(0), 9)


def test_children_are_neighbors():
    for v in vertices_up_to(F, 3):
        for c in children(v):
            assert distance(v, c) == 1
            assert ancestor(c, v.depth) == v


def test_metric_axioms():
    rng = random.Random(0)
    verts = vertices_up_to(F, 4)
    for _ in range(300):
        u, v, w = (rng.choice(verts) for _ in range(3))
        assert distance(u, v) == distance(v, u)
        assert (distance(u, v) == 0) == (u == v)
        assert distance(u, w) <= distance(u, v) + distance(v, w)
        assert meet_depth(u, v) <= min(u.depth, v.depth)


def test_rationality_and_level():
    E = ext_of("eis:0,7")  # x^2 = 2
    x = E.gen
    v = normalize_point(E.one, x, 2)
    assert not is_rational(v)
    assert level_of(v) == 2
    assert is_rational(normalize_point(E.one, E.embed(2), 3))
    assert is_embedded_vertex(normalize_point(E.one, E.embed(2), 4))
    assert not is_embedded_vertex(normalize_point(E.one, E.embed(2), 3))
    U = ext_of("unram")
    assert level_of(normalize_point(U.one, U.gen, 1)) == 1


def test_galois_fixed_points():
    E = ext_of("eis:0,7")
    x = E.gen
    assert is_galois_fixed(normalize_point(E.one, x, 3))
    assert not is_galois_fixed(normalize_point(E.one, x, 4))
    v = normalize_point(E.one, x, 4)
    assert galois_act_vertex(galois_act_vertex(v)) == v


def test_quadratic_point():
    E = ext_of("eis:0,1")
    p = quadratic_point(E.one, E.gen, E, 2)
    assert p.level == level_of(p.conj_rep)
    with pytest.raises(PointIsRational):
        quadratic_point(E.one, E.embed(3), E, 2)


@pytest.mark.parametrize("spec", ["unram", "eis:2,1", "eis:0,1"])
def test_dilation_and_galois(spec):
    E = ext_of(spec)
    assert check_dilation(E, 3)["holds"]
    assert check_galois(E, 3)["holds"]
    assert embed_F_vertex(root(F), E) == root(E)


@pytest.mark.parametrize("spec,want", [("unram", 0), ("eis:2,1", 1), ("eis:2,3", 1), ("eis:0,1", 2),
                                       ("eis:0,7", 2)])
def test_barbs_over_q2(spec, want):
    E = ext_of(spec)
    assert barb_diameter(E) == want
    rec = check_barbs(E, 4)
    assert rec["measured"] == want and rec["holds"]


def test_exports_are_deterministic():
    E = ext_of("eis:0,1")
    dot = export_dot(E, 3)
    assert dot == export_dot(E, 3)
    assert dot.count("[label=") == 22
    assert dot.count(" -- ") == 21
    js = export_json(E, 2)
    assert len(js["vertices"]) == 10 and len(js["edges"]) == 9
    assert js["vertices"][0]["rational"]
