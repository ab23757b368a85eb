import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphmorse.graph import (
    DisconnectedGraphError,
    Graph,
    GraphParseError,
    adjacency_matrix,
    connected_components,
    cycle_rank,
    incidence_matrix,
    parse_graph,
    spanning_tree,
    valence_matrix,
)
from graphmorse.linalg import RationalMatrix
from oracles import components_by_dfs
from strategies import graphs


def test_parse_k2():
    g = parse_graph("1 2")
    assert (g.n_vertices, g.n_edges) == (2, 1)
    assert g.edges == ((0, 1),)
    assert g.labels == (1, 2)


def test_parse_header_edgeless():
    g = parse_graph("vertices 3\n")
    assert (g.n_vertices, g.n_edges) == (3, 0)


def test_parse_two_loops(two_loops):
    assert (two_loops.n_vertices, two_loops.n_edges) == (6, 7)


def test_parse_first_appearance_order():
    g = parse_graph("7 3  # comment\n\n3 9\n")
    assert g.labels == (7, 3, 9)
    assert g.edges == ((0, 1), (1, 2))


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("1 2\n3\n", 2),
        ("1 1\n", 1),
        ("vertices 2\n0 1\n1 2\n", 3),
        ("1 2\nfoo bar\n", 2),
        ("1 -2\n", 1),
        ("1 2\nvertices 3\n", 2),
    ],
)
def test_parse_errors_name_the_line(text, lineno):
    with pytest.raises(GraphParseError) as err:
        parse_graph(text)
    assert err.value.lineno == lineno
    assert f"line {lineno}" in str(err.value)


def test_graph_rejects_self_loop():
    with pytest.raises(ValueError):
        Graph(2, [(1, 1)])


def test_adjacency(k2, k3, two_loops):
    assert adjacency_matrix(k2) == RationalMatrix([[0, 1], [1, 0]])
    assert adjacency_matrix(k3) == RationalMatrix([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    # e5 joins v5 and v6
    assert adjacency_matrix(two_loops)[4, 5] == 1


def test_adjacency_parallel_edges_stay_binary():
    g = Graph(2, [(0, 1), (1, 0)])
    assert adjacency_matrix(g) == RationalMatrix([[0, 1], [1, 0]])
    assert valence_matrix(g) == RationalMatrix.diagonal([2, 2])


def test_valence(k2, k3, two_loops):
    assert valence_matrix(k3) == RationalMatrix.diagonal([2, 2, 2])
    assert valence_matrix(k2) == RationalMatrix.diagonal([1, 1])
    assert valence_matrix(two_loops) == RationalMatrix.diagonal([2, 2, 2, 3, 3, 2])


def test_incidence(k2, k3):
    assert incidence_matrix(k2) == RationalMatrix([[-1], [1]])
    assert incidence_matrix(k3) == RationalMatrix([[0, -1, -1], [-1, 0, 1], [1, 1, 0]])
    assert incidence_matrix(Graph(3, [])).shape == (3, 0)


def test_components_and_cycle_rank(k3, two_loops):
    assert len(connected_components(k3)) == 1
    assert len(connected_components(Graph(3, [(0, 1)]))) == 2
    assert len(connected_components(two_loops)) == 1
    assert cycle_rank(two_loops) == 2
    assert cycle_rank(k3) == 1
    assert cycle_rank(Graph(4, [(0, 1), (1, 2), (1, 3)])) == 0


def test_spanning_tree_k3(k3):
    tree = spanning_tree(k3, 1)
    assert [tree.depth[v] for v in range(3)] == [1, 0, 1]
    # BFS from v2 scans e1 (v2->v3) before e3 (v1->v2)
    assert tree.edges == {0, 2}


def test_spanning_tree_path():
    g = Graph(5, [(0, 1), (2, 1), (2, 3), (3, 4)])
    tree = spanning_tree(g, 0)
    assert [tree.depth[v] for v in range(5)] == [0, 1, 2, 3, 4]
    assert tree.edges == {0, 1, 2, 3}


def test_spanning_tree_tree8(tree8):
    tree = spanning_tree(tree8, 0)
    assert [tree.depth[v] for v in range(8)] == [0, 1, 1, 1, 2, 2, 2, 2]


def test_spanning_tree_disconnected():
    g = parse_graph("vertices 3\n0 1\n")
    with pytest.raises(DisconnectedGraphError, match="vertex 2"):
        spanning_tree(g, 0)


@given(graphs())
def test_incidence_columns(g):
    inc = incidence_matrix(g)
    for l in range(g.n_edges):
        col = inc.column(l)
        assert sorted(col).count(1) == 1 and sorted(col).count(-1) == 1
        assert sum(col) == 0


@given(graphs())
def test_adjacency_and_valence_structure(g):
    a = adjacency_matrix(g)
    assert a.is_symmetric()
    assert all(a[i, i] == 0 for i in range(g.n_vertices))
    val = valence_matrix(g)
    for v in g.vertices:
        assert val[v, v] == sum((t == v) + (h == v) for t, h in g.edges)


@given(graphs())
def test_cycle_rank_and_forests(g):
    assert len(connected_components(g)) == components_by_dfs(g.n_vertices, g.edges)
    r = cycle_rank(g)
    assert r >= 0
    # a forest has as many components as |V| - |E|
    is_forest = g.n_edges == g.n_vertices - components_by_dfs(g.n_vertices, g.edges)
    assert (r == 0) == is_forest


@settings(max_examples=60)
@given(graphs(), st.data())
def test_spanning_tree_properties(g, data):
    if len(connected_components(g)) != 1:
        with pytest.raises(DisconnectedGraphError):
            spanning_tree(g, 0)
        return
    root = data.draw(st.integers(0, g.n_vertices - 1))
    tree = spanning_tree(g, root)
    assert len(tree.edges) == g.n_vertices - 1
    assert cycle_rank(Graph(g.n_vertices, [g.edges[l] for l in tree.edges])) == 0
    for v in g.vertices:
        if v == root:
            assert tree.parent[v] is None and tree.depth[v] == 0
        else:
            assert tree.depth[tree.parent[v]] == tree.depth[v] - 1
