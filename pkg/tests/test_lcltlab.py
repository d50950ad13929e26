import math
from fractions import Fraction

import pytest

from kcount import graphcore as gc, lcltlab as L
from graph_fixtures import small_fixtures

VERTEX = gc.Graph(1, [])


def test_single_vertex_lclt():
    rep = L.lclt_error(VERTEX, 1.0)
    assert rep.sup_error == pytest.approx(abs(2 * L.normal_density(1.0) - 0.5), abs=1e-12)
    assert rep.sup_error == pytest.approx(0.0161, abs=1e-4)
    assert rep.sigma2 == 0.25


def test_single_vertex_kolmogorov():
    res = L.clt_distance(VERTEX, 1.0)
    first_x, left, right = res.jumps[0]
    assert first_x == -1.0
    assert left == pytest.approx(L.normal_cdf(-1.0))
    assert left == pytest.approx(0.1587, abs=1e-4)
    # the supremum is attained just after the first jump
    assert res.statistic == pytest.approx(0.5 - L.normal_cdf(-1.0))
    assert 0 <= res.statistic <= 1


def test_cycle_sweep_normalized_bounded():
    rows = L.sweep("cycle", [100, 200, 400, 800], 1.0)
    normalized = [r.normalized for r, _ in rows]
    assert max(normalized) <= 2 * normalized[0]
    kolmogorov = [r.clt_kolmogorov for r, _ in rows]
    assert kolmogorov == sorted(kolmogorov, reverse=True)
    for r, _ in rows:
        assert r.sup_error >= 0


def test_fourier_profile():
    prof = L.fourier_profile(("cycle", 100), 0.5)
    assert prof.fitted_c > 0
    table = {round(t, 12): m for t, m, _ in prof.rows}
    assert table[0.0] == pytest.approx(1.0)
    for t, m, bound in prof.rows:
        assert table[round(-t, 12)] == pytest.approx(m, abs=1e-12)
        assert m <= bound + 1e-12


def test_low_phase_profile_runs():
    rows = L.low_phase_profile(("cycle", 200), 1.0, [0.0, 0.5, 1.0, 2.0])
    assert rows[0][1] == pytest.approx(0.0, abs=1e-12)


def test_variance_bound():
    res = L.variance_bound_check(VERTEX, 1, max_degree=3)
    assert res.passed and res.lower_bound == Fraction(1, 128) and res.variance == 0.25
    for _, g in small_fixtures():
        for lam in (Fraction(1, 10), Fraction(1, 2), 1, 3):
            assert L.variance_bound_check(g, lam).passed
    ratios = [L.variance_bound_check(("cycle", n), 1).ratio for n in (50, 100, 200, 400)]
    assert max(ratios) <= 2 * min(ratios)


def test_csv_output_is_deterministic():
    a = L.to_csv(L.sweep("path", [20, 40], 0.5))
    b = L.to_csv(L.sweep("path", [20, 40], 0.5))
    assert a == b
    assert a.splitlines()[0] == ",".join(L.CSV_HEADER)
    assert len(a.splitlines()) == 3


def test_unknown_family():
    with pytest.raises(Exception):
        L.family_source("grid", 10)
