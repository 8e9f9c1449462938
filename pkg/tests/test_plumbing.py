from fractions import Fraction
from math import gcd, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splicekit.diagrams import PlumbingGraph
from splicekit.plumbing import (
    DegenerateShapeError,
    SeifertData,
    SingularPlumbingError,
    classify_shape,
    extract_splice,
    homology,
    intersection_data,
    node_sign,
    orbifold_solid_torus_homology,
    seifert_homology_order,
    splice_edge_weight,
    splice_structure,
    star_plumbing,
    underlying,
    underlying_keeping_leaves,
)

from conftest import load, plumbing_fixtures


def test_poincare_sphere():
    p = load("poincare.plumbing")
    assert homology(p).order == 1
    assert homology(p).factors == ()
    g = extract_splice(p)
    assert sorted(g.weight("c", w) for w in g.leaves) == [2, 3, 5]
    assert g.sign("c") == 1
    assert classify_shape(p) == "seifert"


def test_star_orders():
    assert homology(load("star_29.plumbing")).order == 29
    p = load("star_orbifold.plumbing")
    assert homology(p).order == 29
    # column scaling by the arrow degree
    assert homology(p, orbifold=True).order == 58
    g = extract_splice(p)
    assert g.degree("y") == 2
    assert g.weight("c", "y") == 6


def test_negative_sign_star():
    p = load("star_negative.plumbing")
    assert homology(p).order == 61
    assert node_sign(p, "c") == -1


def test_lens_space_has_no_splice_diagram():
    p = load("lens_chain.plumbing")
    assert classify_shape(p) == "lens"
    assert homology(p).order == 3
    with pytest.raises(DegenerateShapeError) as info:
        extract_splice(p)
    assert info.value.kind == "lens"


def test_singular_plumbing_has_free_homology():
    q = PlumbingGraph({"a": 0}, ())
    assert homology(q).order is None
    assert homology(q).free_rank == 1


def test_singular_star_extraction_fails():
    p = star_plumbing(SeifertData(1, ((2, 1), (2, 1))))  # not a node: lens shape
    assert classify_shape(p) == "lens"
    flat = PlumbingGraph({"c": -2, "x": -2, "y": -2, "z": -2, "w": -2},
                         (("c", "x"), ("c", "y"), ("c", "z"), ("c", "w")))
    # affine D4 tilde: singular
    with pytest.raises(SingularPlumbingError):
        extract_splice(flat)


def test_splice_weights_are_far_side_determinants():
    p = load("constructed_75.plumbing")
    assert splice_edge_weight(p, "L", "R") == 23
    assert splice_edge_weight(p, "R", "L") == 15
    assert splice_edge_weight(p, "L", "L^") == 15
    g = extract_splice(p)
    assert g.weight("L", "L^") == 15
    assert g.degree("L^") == 15


def test_structure_branches():
    s = splice_structure(load("constructed_75.plumbing"))
    assert s.branches[("L", "a")] == ["a.1", "a"]
    assert s.branches[("L", "R")] == []
    assert s.leaf_vertex["L^"] == "L"


def test_orbifold_determinant_is_degree_product_times_manifold():
    for name in plumbing_fixtures():
        p = load(name)
        assert intersection_data(p, orbifold=True).det == (
            prod(p.degree(v) for v in p.vertices) * intersection_data(p).det)


def test_orbifold_solid_torus():
    assert orbifold_solid_torus_homology(6, 4) == (1, 2)
    assert orbifold_solid_torus_homology(5, 0) == (1, 5)


def test_underlying_plumbing_drops_arrows():
    p = load("star_orbifold.plumbing")
    assert underlying(p).arrows == {}
    u, rename = underlying_keeping_leaves(load("constructed_75.plumbing"))
    assert rename == {"L^": "L.blowup"}
    assert u.euler["L"] == -2
    g = extract_splice(u)
    assert g.weight("L", "L.blowup") == 1
    assert homology(u).order == 5


seifert_pairs = st.lists(
    st.tuples(st.integers(2, 12), st.integers(1, 11)).filter(lambda ab: gcd(*ab) == 1),
    min_size=1, max_size=4)


@settings(max_examples=150)
@given(st.integers(-4, 6), seifert_pairs)
def test_seifert_order_closed_form(b, pairs):
    s = SeifertData(b, tuple(pairs))
    expected = abs(prod(a for a, _ in pairs) * (b - sum(Fraction(be, a) for a, be in pairs)))
    assert seifert_homology_order(s) == expected == s.closed_form_order()
