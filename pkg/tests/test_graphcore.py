from fractions import Fraction
from itertools import combinations

import pytest

from kcount import graphcore as gc


def test_critical_fugacity_values():
    assert gc.critical_fugacity(3) == 4
    assert gc.critical_fugacity(4) == Fraction(27, 16)
    assert gc.critical_fugacity(5) == Fraction(4**4, 3**5)
    with pytest.raises(ValueError):
        gc.critical_fugacity(2)


def test_critical_density():
    assert gc.critical_density(3) == Fraction(4, 17)
    assert gc.critical_density(4) == Fraction(27, 151)
    for d in range(3, 13):
        assert gc.critical_density(d) < Fraction(1, d + 1)


def test_shearer_radius():
    assert gc.shearer_radius(3) == Fraction(4, 27)
    assert gc.shearer_radius(2) == Fraction(1, 4)


def test_line_graph_examples():
    assert gc.line_graph(gc.complete(3)) == gc.complete(3)
    assert gc.line_graph(gc.path(3)).edges == ((0, 1),)
    assert gc.line_graph(gc.star(3)) == gc.complete(3)
    with pytest.raises(gc.GraphError):
        gc.line_graph(gc.empty(3))


@pytest.mark.parametrize("g", [gc.cycle(7), gc.grid(3, 4), gc.random_regular(12, 3, seed=2), gc.star(5)])
def test_line_graph_sizes(g):
    lg = gc.line_graph(g)
    assert lg.n == g.edge_count
    assert lg.edge_count == sum(d * (d - 1) // 2 for d in (g.degree(v) for v in range(g.n)))
    assert lg.max_degree <= 2 * (g.max_degree - 1)


def _distance(g, u, v):
    return gc.ball(g, u, g.n).get(v)


@pytest.mark.parametrize("g", [gc.path(9), gc.cycle(30), gc.grid(5, 5), gc.random_regular(40, 3, seed=1),
                               gc.complete(4), gc.Graph(1, [])])
def test_separated_set(g):
    s = gc.separated_set(g, 4)
    for u, v in combinations(s, 2):
        d = _distance(g, u, v)
        assert d is None or d >= 4
    d = g.max_degree
    assert len(s) >= g.n / (1 + d + d * (d - 1) + d * (d - 1) ** 2)


def test_separated_set_examples():
    assert gc.separated_set(gc.path(9), 4) == [0, 4, 8]
    assert len(gc.separated_set(gc.complete(4), 4)) == 1
    assert gc.separated_set(gc.Graph(1, []), 4) == [0]


def test_greedy_independent_set():
    assert gc.greedy_independent_set(gc.path(9), 3) == [0, 2, 4]
    assert gc.greedy_independent_set(gc.complete(4), 1) == [0]
    s = gc.greedy_independent_set(gc.cycle(6), 2)
    assert len(s) == 2 and gc.cycle(6).is_independent(s)
    with pytest.raises(gc.GraphError):
        gc.greedy_independent_set(gc.complete(4), 2)


def test_generators():
    c5 = gc.generate("cycle", n=5)
    assert c5.n == 5 and c5.edge_count == 5
    p1 = gc.generate("path", n=1)
    assert p1.n == 1 and p1.edge_count == 0
    g = gc.generate("random_regular", n=10, degree=3, seed=7)
    assert all(g.degree(v) == 3 for v in range(10))
    assert g == gc.generate("random_regular", n=10, degree=3, seed=7)
    with pytest.raises(gc.GraphError):
        gc.random_regular(5, 3, seed=0)


def test_random_regular_many_seeds():
    for seed in range(100):
        g = gc.random_regular(16, 3, seed=seed)
        assert all(g.degree(v) == 3 for v in range(16))
        assert len(set(g.edges)) == g.edge_count


def test_graph_invariants():
    g = gc.random_regular(20, 3, seed=3)
    for v in range(g.n):
        for u in g.neighbors(v):
            assert v in g.neighbors(u) and u != v
        assert list(g.neighbors(v)) == sorted(g.neighbors(v))
    assert g.max_degree == max(len(a) for a in g.adjacency)


def test_parse_and_serialize():
    k3 = gc.parse_edge_list("3 3\n0 1\n1 2\n0 2")
    assert k3 == gc.complete(3)
    text = "4 3\n2 3\n1 0\n1 2\n"
    g = gc.parse_edge_list(text)
    assert gc.parse_edge_list(gc.serialize(g)) == g
    assert gc.serialize(gc.parse_edge_list(gc.serialize(g))) == gc.serialize(g)
    assert gc.parse_graph('{"n": 3, "edges": [[0, 1], [1, 2], [0, 2]]}') == k3


@pytest.mark.parametrize("text, err", [
    ("2 1\n0 0", gc.SelfLoopError),
    ("2 2\n0 1\n1 0", gc.DuplicateEdgeError),
    ("2 1\n0 5", gc.VertexRangeError),
    ("3 2\n0 1", gc.MalformedGraphError),
])
def test_parse_errors(text, err):
    with pytest.raises(err):
        gc.parse_edge_list(text)


def test_claw_free():
    assert gc.is_claw_free(gc.line_graph(gc.random_regular(10, 3, seed=1)))
    assert not gc.is_claw_free(gc.star(3))
