import pytest
from hypothesis import given
from hypothesis import strategies as st

from splicekit.diagrams import (
    DiagramSyntaxError,
    DiagramValidationError,
    PlumbingGraph,
    SpliceDiagram,
    canonical_key,
    parse,
    parse_plumbing,
    parse_splice,
    same_diagram,
    serialize,
)

from conftest import FIXTURES, load

BRIESKORN = "splice\nnode v\nleaf x\nleaf y\nleaf z\nedge v x 2\nedge v y 3\nedge v z 5\n"


def test_parse_brieskorn():
    g = parse_splice(BRIESKORN)
    assert g.nodes == ["v"]
    assert g.leaves == ["x", "y", "z"]
    assert g.weight("v", "z") == 5
    assert g.sign("v") == 1
    assert g.degree("x") == 1


def test_all_fixtures_round_trip():
    for path in sorted(FIXTURES.iterdir()):
        doc = parse(path.read_text())
        again = parse(serialize(doc))
        assert serialize(again) == serialize(doc), path.name
        assert same_diagram(doc.payload, again.payload)


def test_syntax_error_has_location():
    with pytest.raises(DiagramSyntaxError) as info:
        parse_splice("splice\nnode v\nleaf x orb=two\n")
    assert info.value.line == 3
    assert info.value.column == 8
    assert "line 3, column 8" in str(info.value)


def test_unknown_keyword():
    with pytest.raises(DiagramSyntaxError) as info:
        parse_plumbing("plumbing\nvertex a euler=-2\nbridge a b\n")
    assert info.value.line == 3


@pytest.mark.parametrize("text, fragment", [
    ("splice\nnode v\nleaf x\nleaf y\nedge v x 2\nedge v y 3\n", "valence"),
    ("splice\nnode a\nnode b\nleaf x\nleaf y\nleaf z\nleaf w\nedge a x 2\nedge a y 3\n"
     "edge a b 5\nedge b z 2\nedge b w 3\n", "missing weight"),
    ("splice\nnode v\nleaf x\nleaf y\nleaf z\nedge v x 2\nedge v y 0\nedge v z 5\n", "positive"),
    ("splice\nnode v\nleaf x orb=4\nleaf y\nleaf z\nedge v x 2\nedge v y 3\nedge v z 5\n", "divide"),
    ("splice\nnode v\nleaf x\nleaf y\nleaf z\nleaf q\nedge v x 2\nedge v y 3\nedge v z 5\n", "valence 0"),
])
def test_splice_validation(text, fragment):
    with pytest.raises(DiagramValidationError) as info:
        parse_splice(text)
    assert fragment in str(info.value)


def test_plumbing_validation():
    with pytest.raises(DiagramValidationError):
        PlumbingGraph({"a": -2, "b": -2, "c": -2}, (("a", "b"), ("b", "c"), ("c", "a")))
    with pytest.raises(DiagramValidationError):
        PlumbingGraph({"a": -2}, (), {"a": 1})
    with pytest.raises(DiagramValidationError):
        parse_plumbing("plumbing\nvertex a euler=-2\narrow a degree=2\narrow a degree=3\n")


def test_plumbing_matrix_and_orbifold_columns():
    p = load("star_orbifold.plumbing")
    labels = p.vertices
    a = p.matrix(labels)
    am = p.matrix(labels, orbifold=True)
    j = labels.index("y")
    for i in range(len(labels)):
        assert am[i][j] == 2 * a[i][j]
        assert a[i][i] == p.euler[labels[i]]


relabel_map = st.permutations(["p", "q", "r"])


@given(relabel_map)
def test_canonical_key_ignores_names(names):
    g = parse_splice(BRIESKORN)
    h = g.relabel(dict(zip(["x", "y", "z"], names)))
    assert canonical_key(g) == canonical_key(h)
    assert same_diagram(g, h)


def test_canonical_key_sees_weights():
    g = parse_splice(BRIESKORN)
    h = parse_splice(BRIESKORN.replace("edge v z 5", "edge v z 7"))
    assert not same_diagram(g, h)


def test_far_leaves_and_path():
    g = load("three_node_obstructed.splice")
    assert g.far_leaves("B", "C") == ["c1", "w"]
    assert g.path("a1", "w") == ["a1", "A", "B", "C", "w"]
    assert g.node_weight_product("B") == 2 * 10 * 7
    assert isinstance(g, SpliceDiagram)
