import math
from collections import Counter
from fractions import Fraction
from itertools import product

import networkx as nx
import pytest

from kcount import cluster as cl, exact, graphcore as gc
from graph_fixtures import cubic


def test_ursell_examples():
    assert cl.ursell(gc.Graph(1, [])) == 1
    assert cl.ursell(gc.complete(2)) == Fraction(-1, 2)
    assert cl.ursell(gc.complete(3)) == Fraction(1, 3)
    assert cl.ursell(gc.path(3)) == Fraction(1, 6)
    assert cl.ursell(gc.empty(2)) == 0
    with pytest.raises(cl.ClusterGuardError):
        cl.ursell(gc.complete(11))


@pytest.mark.parametrize("g", [gc.complete(4), gc.cycle(5), gc.star(3), gc.grid(2, 3), gc.path(5)])
def test_ursell_recursion_matches_literal_sum(g):
    literal = cl.connected_signed_sum_literal(g.n, g.edges)
    assert cl.ursell(g) == Fraction(literal, math.factorial(g.n))


def test_single_site_taylor_identity():
    coeffs = cl.order_coefficients(gc.Graph(1, []), 8, "clusters")
    assert coeffs == [Fraction((-1) ** (j + 1), j) for j in range(1, 9)]
    for j in range(1, 9):
        assert cl.ursell(gc.complete(j)) == Fraction((-1) ** (j + 1), j)


def test_enumerate_examples():
    assert [str(c) for c in cl.enumerate_clusters(gc.Graph(1, []), 3)] == ["{0}", "{0^2}", "{0^3}"]
    k2 = sorted(str(c) for c in cl.enumerate_clusters(gc.complete(2), 2))
    assert k2 == sorted(["{0}", "{1}", "{0^2}", "{1^2}", "{0 1}"])
    g = gc.random_regular(10, 3, seed=1)
    assert sum(1 for c in cl.enumerate_clusters(g, 3) if c.size == 1) == 10


def test_cluster_invariants():
    g = gc.cycle(6)
    for c in cl.enumerate_clusters(g, 4):
        h = c.incompatibility_graph(g)
        assert len(gc.components(h)) == 1
        assert c.ordering_count * math.prod(math.factorial(m) for _, m in c.support) == math.factorial(c.size)


def _tuple_coefficients(g, t):
    """Brute force over ordered tuples: coefficient_m = Σ φ(H(tuple))."""
    out = []
    for m in range(1, t + 1):
        total = Fraction(0)
        for tup in product(range(g.n), repeat=m):
            edges = [(i, j) for i in range(m) for j in range(i + 1, m)
                     if tup[i] == tup[j] or tup[j] in g.neighbors(tup[i])]
            total += cl.ursell(gc.Graph(m, edges))
        out.append(total)
    return out


def _small_graphs():
    for h in nx.graph_atlas_g()[1:]:
        if h.number_of_nodes() <= 4:
            yield gc.Graph(h.number_of_nodes(), list(h.edges())), 4
    yield gc.cycle(6), 5
    yield gc.path(6), 5
    yield gc.star(5), 5


def test_multiset_sum_equals_tuple_sum():
    for g, t in _small_graphs():
        assert cl.order_coefficients(g, t, "clusters") == _tuple_coefficients(g, t)


@pytest.mark.parametrize("g", [gc.cycle(7), gc.random_regular(10, 3, seed=4), gc.grid(3, 3)])
def test_three_routes_agree(g):
    t = 6
    a = cl.order_coefficients(g, t, "clusters")
    assert a == cl.order_coefficients(g, t, "supports")
    assert a == cl.order_coefficients(g, t, "counts")
    assert a == exact.log_taylor_from_counts(exact.independence_polynomial(g).coeffs, t)


def test_cluster_count_matches_tuple_grouping():
    g = gc.path(4)
    for m in range(1, 5):
        groups = set()
        for tup in product(range(g.n), repeat=m):
            edges = [(i, j) for i in range(m) for j in range(i + 1, m)
                     if tup[i] == tup[j] or tup[j] in g.neighbors(tup[i])]
            if len(gc.components(gc.Graph(m, edges))) == 1:
                groups.add(tuple(sorted(Counter(tup).items())))
        assert groups == {c.support for c in cl.enumerate_clusters(g, m) if c.size == m}


def test_truncated_log_Z_examples():
    lam = 0.2
    res = cl.truncated_log_Z(gc.Graph(1, []), lam, 3)
    assert res.value == pytest.approx(lam - lam**2 / 2 + lam**3 / 3, abs=1e-15)
    res = cl.truncated_log_Z(gc.complete(2), 0.05, 8)
    assert abs(res.value - math.log(1.1)) <= res.kp_tail_bound
    c6 = exact.independence_polynomial(gc.cycle(6))
    truth = math.log(exact.evaluate_Z(c6, 0.05).real)
    for t in range(2, 9):
        res = cl.truncated_log_Z(gc.cycle(6), 0.05, t)
        assert res.kp_tail_bound == 6 * (0.05 * math.e * 3) ** t
        assert abs(res.value - truth) <= res.kp_tail_bound
        assert res.certified


def test_truncated_cumulant_examples():
    res = cl.truncated_cumulant(gc.Graph(1, []), 0.1, 1, 10)
    assert abs(res.value - 1 / 11) <= res.kp_tail_bound
    c8 = exact.independence_polynomial(gc.cycle(8))
    var = exact.size_distribution(c8, 0.04).variance
    res = cl.truncated_cumulant(gc.cycle(8), 0.04, 2, 8)
    assert abs(res.value - var) <= res.kp_tail_bound


def test_leading_order():
    g = cubic(12)
    for lam in (1e-2, 5e-3, 2.5e-3):
        k1 = cl.truncated_cumulant(g, lam, 1, 6).value
        k2 = cl.truncated_cumulant(g, lam, 2, 6).value
        assert abs((k1 / g.n - lam) / lam**2) < 2 * (g.max_degree + 1) ** 2
        assert abs((k2 / g.n - lam) / lam**2) < 4 * (g.max_degree + 1) ** 2


def test_certified_bracket_on_fixtures():
    for g in (gc.cycle(12), cubic(14), gc.path(20)):
        truth = math.log(exact.evaluate_Z(exact.independence_polynomial(g), 0.03).real)
        for t in range(2, 7):
            res = cl.truncated_log_Z(g, 0.03, t)
            assert res.certified and abs(res.value - truth) <= res.kp_tail_bound


def test_select_truncation_order():
    t = cl.select_truncation_order(0.05, 3, 1e-3, 100, 1)
    target = 1e-3 * 0.05 * 100
    assert cl.cumulant_tail_bound(100, 0.05, 3, t, 1) <= target < cl.cumulant_tail_bound(100, 0.05, 3, t - 1, 1)
    orders = [cl.select_truncation_order(0.05, 3, eps, 100, 1) for eps in (0.9, 0.1, 0.01, 1e-3, 1e-4)]
    assert orders == sorted(orders)
    assert cl.select_truncation_order(0.05, 3, 1e-3, 200, 1) - t <= 2
    with pytest.raises(cl.NotCertifiableError):
        cl.select_truncation_order(0.1, 3, 1e-3, 100)


def test_uncertified_flag():
    res = cl.truncated_log_Z(gc.cycle(6), 0.2, 3)
    assert not res.certified
