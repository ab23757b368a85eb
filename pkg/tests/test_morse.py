import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import data_path
from graphmorse.errors import ContractError
from graphmorse.graph import Cell, Graph, connected_components, parse_graph, spanning_tree
from graphmorse.linalg import RationalMatrix
from graphmorse.morse import (
    GradientCurve,
    GradientField,
    InvalidMorseFunction,
    MorseFunction,
    MorseInputError,
    critical_cells,
    curve_multiplicity,
    flatten,
    flow_to_critical,
    gradient_curves,
    gradient_field,
    height_function,
    is_acyclic,
    is_flat,
    is_gradient_curve,
    morse_differential,
    morse_function_from_pairs,
    parse_morse_function,
    random_matching,
    random_morse,
    read_morse_function,
    tree_boundary_zero_check,
    validate_morse,
)
from graphmorse.spectral import betti_numbers
from strategies import graphs


def test_read_k2_example(k2):
    f = read_morse_function(data_path("k2_f.morse"), k2)
    assert f.vertex_values == (1, 0) and f.edge_values == (1,)
    assert validate_morse(k2, f).valid
    crit = critical_cells(k2, f)
    assert crit.vertices == (1,) and crit.edges == ()


def test_invalid_k2_names_the_edge(k2):
    f = read_morse_function(data_path("k2_invalid.morse"), k2)
    report = validate_morse(k2, f)
    assert not report.valid
    (v,) = report.violations
    assert v.cell == Cell("edge", 0) and v.condition == "MC2"
    assert set(v.offending) == {Cell("vertex", 0), Cell("vertex", 1)}
    with pytest.raises(InvalidMorseFunction):
        critical_cells(k2, f)


def test_mc1_violation():
    g = parse_graph("vertices 3\n0 1\n0 2\n")
    report = validate_morse(g, MorseFunction([2, 0, 0], [1, 1]))
    assert [(v.cell, v.condition) for v in report.violations] == [(Cell("vertex", 0), "MC1")]


def test_parse_rationals_and_comments(k2):
    f = parse_morse_function("# values\nV 1 3/2\nV 2 -1\nE 0 1/2  # edge\n", k2)
    assert f.vertex_values == (Fraction(3, 2), -1)
    assert f.edge_values == (Fraction(1, 2),)


@pytest.mark.parametrize(
    "text, message",
    [
        ("V 1 1\nV 2 0\n", "missing values for E 0"),
        ("V 1 1\nV 2 0\nE 0 1\nE 0 2\n", "line 4: duplicate"),
        ("V 1 1\nV 3 0\nE 0 1\n", "line 2: unknown vertex id 3"),
        ("V 1 1\nV 2 0\nE 1 1\n", "line 3: edge index 1 out of range"),
        ("V 1 0.5\n", "line 1"),
        ("X 1 1\n", "line 1"),
    ],
)
def test_parse_errors(k2, text, message):
    with pytest.raises(MorseInputError, match=message):
        parse_morse_function(text, k2)


def test_value_count_mismatch(k3):
    with pytest.raises(MorseInputError):
        validate_morse(k3, MorseFunction([0, 0], [1, 1, 1]))


def test_k3_f_structure(k3, k3_f):
    crit = critical_cells(k3, k3_f)
    assert crit.vertices == (1,) and crit.edges == (1,)
    assert gradient_field(k3, k3_f).pairs == ((0, 2), (2, 0))
    cx = morse_differential(k3, k3_f)
    assert cx.differential == RationalMatrix([[0]])
    assert cx.homology == (1, 1)


def test_k3_g_all_critical(k3, k3_g):
    crit = critical_cells(k3, k3_g)
    assert (crit.c0, crit.c1) == (3, 3)
    cx = morse_differential(k3, k3_g)
    # every edge is its own gradient-curve pair: the differential is the incidence matrix
    assert cx.differential == RationalMatrix([[0, -1, -1], [-1, 0, 1], [1, 1, 0]])
    assert cx.homology == (1, 1)


def test_gradient_curves_k3(k3, k3_f):
    (curve,) = gradient_curves(k3, k3_f, 0, 1)
    assert curve == GradientCurve((0, 1), (2,))
    assert is_gradient_curve(k3, k3_f, curve)
    assert curve_multiplicity(curve, k3) == 1
    assert gradient_curves(k3, k3_f, 1, 0) == []
    assert flow_to_critical(k3, k3_f, 2) == 1


def test_height_function_tree8(tree8):
    h = height_function(tree8, spanning_tree(tree8, 0))
    assert h.vertex_values == (0, 1, 1, 1, 2, 2, 2, 2)
    assert h.edge_values == (1, 1, 1, 2, 2, 2, 2)
    crit = critical_cells(tree8, h)
    assert crit.vertices == (0,) and crit.edges == ()
    assert morse_differential(tree8, h).homology == (1, 0)


@pytest.mark.parametrize("root", range(6))
def test_height_function_two_loops_every_root(two_loops, root):
    h = height_function(two_loops, spanning_tree(two_loops, root))
    crit = critical_cells(two_loops, h)
    assert crit.vertices == (root,)
    assert crit.c1 == 2
    assert tree_boundary_zero_check(two_loops, h)
    assert morse_differential(two_loops, h).homology == (1, 2)


def test_flatten_k3(k3, k3_f):
    flat = flatten(k3, k3_f)
    assert is_flat(k3, flat)
    # k3_f is already flat, but value 1 on every pair clashes with the critical edge
    assert is_flat(k3, k3_f)
    assert gradient_field(k3, flat) == gradient_field(k3, k3_f)


def test_flat_function_uses_fractional_values_when_needed():
    # path 0-1-2 with 0 matched to e0 and 1 matched to e1: value 1 everywhere would break MC1 at 1
    g = Graph(3, [(0, 1), (1, 2)])
    f = morse_function_from_pairs(g, [(0, 0), (1, 1)])
    assert validate_morse(g, f).valid
    assert gradient_field(g, f).pairs == ((0, 0), (1, 1))
    assert is_flat(g, f)


def test_cyclic_matching_rejected(k3):
    field_ = GradientField(((0, 2), (1, 0), (2, 1)))
    assert not is_acyclic(k3, field_)
    with pytest.raises(ContractError):
        morse_function_from_pairs(k3, field_.pairs)


def test_matching_reusing_a_cell_rejected():
    with pytest.raises(ContractError):
        GradientField(((0, 0), (1, 0)))


def test_scaled_function_same_structure(k3, k3_f):
    g2 = k3_f.scaled(3)
    assert critical_cells(k3, g2) == critical_cells(k3, k3_f)


def test_to_text_round_trip(tree8):
    h = height_function(tree8, spanning_tree(tree8, 0))
    assert parse_morse_function(h.to_text(tree8), tree8) == h


@settings(max_examples=80, deadline=None)
@given(graphs(max_vertices=7, max_edges=10), st.integers(0, 2**32 - 1))
def test_random_morse_properties(g, seed):
    f = random_morse(g, seed)
    report = validate_morse(g, f)
    assert report.valid and not report.exclusivity_failures
    crit = critical_cells(g, f)
    h0, h1 = betti_numbers(g)
    assert h0 <= crit.c0 and h1 <= crit.c1
    assert crit.c0 - crit.c1 == g.n_vertices - g.n_edges
    assert is_flat(g, f)
    assert morse_differential(g, f).homology == (h0, h1)


@settings(max_examples=60, deadline=None)
@given(graphs(max_vertices=7, max_edges=10), st.integers(0, 2**32 - 1))
def test_random_matching_is_acyclic_and_realised(g, seed):
    field_ = random_matching(g, random.Random(seed), density=1.0)
    assert is_acyclic(g, field_)
    f = morse_function_from_pairs(g, field_.pairs)
    assert gradient_field(g, f) == field_
    assert critical_cells(g, f) == field_.critical(g)


@settings(max_examples=40, deadline=None)
@given(graphs(max_vertices=7, max_edges=10, min_vertices=2), st.data())
def test_height_function_on_connected_graphs(g, data):
    if len(connected_components(g)) != 1:
        return
    root = data.draw(st.integers(0, g.n_vertices - 1))
    h = height_function(g, spanning_tree(g, root))
    crit = critical_cells(g, h)
    assert crit.c0 == 1 and crit.c1 == betti_numbers(g)[1]
    assert tree_boundary_zero_check(g, h)
