import math
from collections import Counter

import numpy as np
import pytest
from scipy import stats

from kcount import exact, graphcore as gc, sampling as sp
from kcount.errors import PreconditionError


def _tv(samples, support):
    counts = Counter(samples)
    total = len(samples)
    inside = sum(abs(counts.get(s, 0) / total - 1 / len(support)) for s in support)
    outside = sum(v / total for s, v in counts.items() if s not in set(support))
    return 0.5 * (inside + outside)


def test_glauber_k2():
    g = gc.complete(2)
    states = sp.glauber_batch(g, 1.0, 200, 30000, sp.make_rng(1))
    freq = Counter(sp.rows_to_sets(states))
    for s in [(), (0,), (1,)]:
        assert abs(freq[s] / 30000 - 1 / 3) <= 0.02


def test_glauber_single_chain():
    g = gc.cycle(6)
    rng = sp.make_rng(2)
    state = set()
    for _ in range(2000):
        before = set(state)
        v_blocked = {v for v in range(g.n) if any(u in before for u in g.neighbors(v))}
        sp.glauber_step(g, state, 2.0, rng)
        assert g.is_independent(state)
        assert not (state - before) & v_blocked
    with pytest.raises(PreconditionError):
        sp.glauber_run(g, 0.0, 10, rng)


@pytest.mark.parametrize("g", [gc.path(5), gc.cycle(6), gc.star(3), gc.complete(4), gc.random_regular(8, 3, seed=1)])
def test_glauber_matches_hard_core(g):
    lam = 1.3
    states = sp.glauber_batch(g, lam, sp.burn_in_steps(g.n, 1e-3), 100_000, sp.make_rng(3))
    sets = sp.rows_to_sets(states)
    poly = exact.independence_polynomial(g)
    z = exact.evaluate_Z(poly, lam).real
    counts = Counter(sets)
    all_sets = [s for k in range(len(poly)) for s in exact.list_size_k(g, k)]
    tv = 0.5 * sum(abs(counts.get(s, 0) / len(sets) - lam ** len(s) / z) for s in all_sets)
    assert tv <= 0.02


def test_down_up_basics():
    g = gc.cycle(5)
    rng = sp.make_rng(4)
    state = {0, 2}
    for _ in range(500):
        sp.down_up_step(g, 2, state, rng)
        assert len(state) == 2 and g.is_independent(state)
    chain = [sp.down_up_run(g, 2, 1, rng, initial=(0, 2))]
    for _ in range(100_000 - 1):
        chain.append(tuple(sorted(sp.down_up_step(g, 2, set(chain[-1]), rng))))
    assert _tv(chain, exact.list_size_k(g, 2)) <= 0.02
    with pytest.raises(PreconditionError):
        sp.down_up_step(g, 3, {0, 2}, rng)


def test_transition_matrices():
    for g in (gc.path(4), gc.cycle(5), gc.star(4), gc.complete(3), gc.random_regular(6, 3, seed=2)):
        states, P = sp.glauber_transition_matrix(g, 0.7)
        pi = sp.hard_core_vector(states, 0.7)
        assert np.abs(pi @ P - pi).sum() <= 1e-12
        assert np.allclose(P.sum(axis=1), 1)
        for k in range(1, 3):
            st, Q = sp.down_up_transition_matrix(g, k)
            if st:
                u = np.full(len(st), 1 / len(st))
                assert np.abs(u @ Q - u).sum() <= 1e-12


def test_detailed_balance_ratio():
    g = gc.path(4)
    lam = 1.7
    states, P = sp.glauber_transition_matrix(g, lam)
    idx = {s: i for i, s in enumerate(states)}
    for s in states:
        for v in range(g.n):
            bigger = tuple(sorted(set(s) | {v}))
            if v not in s and bigger in idx:
                assert P[idx[s], idx[bigger]] / P[idx[bigger], idx[s]] == pytest.approx(lam)


def test_find_fugacity_randomized():
    rng = sp.make_rng(5)
    assert sp.find_fugacity_randomized(gc.cycle(20), 4, 0.05, rng) == 4 / 20
    g = gc.empty(40)
    lam = sp.find_fugacity_randomized(g, 12, 0.05, rng)
    sigma = math.sqrt(40 * lam / (1 + lam) ** 2)
    assert abs(40 * lam / (1 + lam) - 12) <= sigma


def test_find_fugacity_randomized_c20():
    g = gc.cycle(20)
    poly = exact.independence_polynomial(g)
    good = 0
    for seed in range(100):
        lam = sp.find_fugacity_randomized(g, 5, 0.05, sp.make_rng(seed), runs=9, steps=600)
        d = exact.size_distribution(poly, lam)
        good += abs(d.mean - 5) <= math.sqrt(d.variance)
    assert good >= 95


def test_rejection_sampling():
    g = gc.Graph(3, [(0, 1), (1, 2)])
    res = sp.rejection_sample_k(g, 1.0, 2, sp.make_rng(6))
    assert res.sample == (0, 2)
    g = gc.cycle(12)
    lam = sp.find_fugacity_randomized(g, 3, 0.05, sp.make_rng(7))
    states = sp.glauber_batch(g, lam, sp.burn_in_steps(12, 0.01), 100_000, sp.make_rng(8))
    freq = (states.sum(axis=1) == 3).mean()
    truth = exact.size_distribution(exact.independence_polynomial(g), lam).probs[3]
    assert abs(freq - truth) <= 0.01
    batch = sp.rejection_batch(g, lam, 3, 100_000, sp.make_rng(9))
    assert _tv(batch.samples, exact.list_size_k(g, 3)) <= 0.05


def test_fast_sampler_tables_and_q():
    g = gc.cycle(30)
    fs = sp.FastSampler(g, 8, 0.05, 0.6, sp.FastSamplerConfig())
    assert fs.q_lo > 0
    batch = fs.sample(2000, sp.make_rng(10))
    assert batch.diagnostics["table_error"] <= 1e-12
    for s in batch.samples:
        assert len(s) == 8 and g.is_independent(s)
    cfg = sp.FastSamplerConfig()
    assert cfg.modulus(30, 0.05) >= 1
    assert cfg.repeat_cap(0.05) == math.ceil(8 * math.log(20) ** 1.5)


def test_fast_sampler_regimes():
    g = gc.cycle(12)
    assert sp.sample_k_batch(g, 1, 0.05, 5, sp.make_rng(11)).method == "downup"
    assert sp.sample_k_batch(g, 3, 0.05, 5, sp.make_rng(11)).method == "fast"
    assert sp.sample_k_batch(g, 3, 1e-7, 5, sp.make_rng(11)).method == "rejection"
    with pytest.raises(PreconditionError):
        sp.sample_k_batch(g, 7, 0.05, 5, sp.make_rng(11))


def test_hypergeometric_substep_uniform():
    # a 6-element S* with k' = 3: every 3-subset equally likely
    rng = sp.make_rng(12)
    draws = 40_000
    undecided = np.zeros((draws, 9), dtype=bool)
    undecided[:, [0, 2, 3, 5, 7, 8]] = True
    picks = sp.choose_undecided(undecided, np.full(draws, 3), rng)
    counts = Counter(tuple(sorted(int(x) for x in p)) for p in picks)
    assert all(set(c) <= {0, 2, 3, 5, 7, 8} for c in counts)
    observed = [counts[c] for c in sorted(counts)]
    assert len(observed) == 20
    assert stats.chisquare(observed).pvalue > 0.001


def test_mod_p_flattening_c12():
    g = gc.cycle(12)
    lam = sp.find_fugacity_randomized(g, 3, 0.05, sp.make_rng(13))
    fs = sp.FastSampler(g, 3, 0.05, lam, sp.FastSamplerConfig())
    assert fs.residue_deviation() <= 0.02


def test_mod_p_flattening_improves_with_n():
    devs = []
    for n in (12, 24, 48):
        k = n // 4
        fs = sp.FastSampler(gc.cycle(n), k, 0.05, k / n, sp.FastSamplerConfig())
        devs.append(fs.residue_deviation())
    assert devs[-1] < devs[0]


def test_matching_sampler():
    rng = sp.make_rng(14)
    batch = sp.sample_matchings_batch(gc.path(6), 2, 0.05, 20_000, rng)
    support = []
    edges = gc.path(6).edges
    for i, a in enumerate(edges):
        for b in edges[i + 1:]:
            if not set(a) & set(b):
                support.append((a, b))
    assert len(support) == 6
    for m in batch.samples:
        ends = [v for e in m for v in e]
        assert len(ends) == len(set(ends))
    assert _tv(batch.samples, support) <= 0.05


def test_fpras_edgeless_and_cases():
    res = sp.fpras_count(gc.empty(30), 4, 0.1, sp.make_rng(15))
    assert res.case == "I" and res.successes == res.samples
    assert res.log_estimate == pytest.approx(math.log(math.comb(30, 4)))
    res = sp.fpras_count(gc.cycle(20), 6, 0.1, sp.make_rng(16))
    assert res.case == "II"
    assert abs(res.log_estimate - math.log(exact.cycle_count(20, 6))) <= 0.1
