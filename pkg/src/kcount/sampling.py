"""Randomized algorithms: Glauber dynamics, the down-up walk, fugacity search,
the neighbourhood-resampling sampler for uniform size-k independent sets, and
the FPRAS for i_k.

Chains are run either one at a time on Python sets (for clarity and tests) or
as numpy batches of shape (chains, n) that advance in lockstep.  All randomness
comes from numpy Generators built from integer seeds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import exact
from .errors import BudgetExhaustedError, PreconditionError
from .graphcore import (Graph, critical_fugacity, greedy_independent_set, is_claw_free, line_graph,
                        separated_set)

DEFAULT_DELTA = 0.1
BURN_IN_CONSTANT = 10.0


def make_rng(seed: int | None) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def burn_in_steps(n: int, eps: float, const: float = BURN_IN_CONSTANT) -> int:
    """const·n·ln(n/ε) single-site updates."""
    return max(1, math.ceil(const * n * math.log(max(n, 2) / eps)))


# --- single chains ---------------------------------------------------------------

@dataclass
class ChainState:
    graph: Graph
    current: set[int]
    rng: np.random.Generator
    steps_taken: int = 0

    def glauber_step(self, lam: float):
        self.current = glauber_step(self.graph, self.current, lam, self.rng)
        self.steps_taken += 1

    def down_up_step(self):
        self.current = down_up_step(self.graph, len(self.current), self.current, self.rng)
        self.steps_taken += 1


def glauber_step(g: Graph, state: set[int], lam: float, rng: np.random.Generator) -> set[int]:
    """Heat-bath update at a uniform vertex."""
    v = int(rng.integers(g.n))
    occupy = rng.random() < lam / (1 + lam)
    if any(u in state for u in g.neighbors(v)) or not occupy:
        state.discard(v)
    else:
        state.add(v)
    return state


def glauber_run(g: Graph, lam: float, steps: int, rng: np.random.Generator,
                initial=None) -> tuple[int, ...]:
    if lam <= 0:
        raise PreconditionError("λ must be positive")
    state = set(initial or ())
    for _ in range(steps):
        glauber_step(g, state, lam, rng)
    return tuple(sorted(state))


def down_up_step(g: Graph, k: int, state: set[int], rng: np.random.Generator) -> set[int]:
    """Swap a uniform member v of I for a uniform vertex w when the result stays independent."""
    if len(state) != k:
        raise PreconditionError(f"state has size {len(state)}, expected {k}")
    members = sorted(state)
    v = members[int(rng.integers(k))]
    w = int(rng.integers(g.n))
    if w == v:
        return state
    if w in state or any(u in state and u != v for u in g.neighbors(w)):
        return state
    state.discard(v)
    state.add(w)
    return state


def down_up_run(g: Graph, k: int, steps: int, rng: np.random.Generator, initial=None) -> tuple[int, ...]:
    state = set(initial if initial is not None else greedy_independent_set(g, k))
    for _ in range(steps):
        down_up_step(g, k, state, rng)
    return tuple(sorted(state))


# --- batched chains --------------------------------------------------------------------

def glauber_batch(g: Graph, lam: float, steps: int, count: int, rng: np.random.Generator,
                  initial: np.ndarray | None = None) -> np.ndarray:
    """`count` independent Glauber chains; returns a (count, n) boolean occupancy array."""
    if lam <= 0:
        raise PreconditionError("λ must be positive")
    n = g.n
    state = np.zeros((count, n + 1), dtype=bool)  # last column is the padding sink
    if initial is not None:
        state[:, :n] = initial
    if n == 0 or count == 0:
        return state[:, :n]
    nbrs = g.padded_neighbors
    rows = np.arange(count)
    p_occ = lam / (1 + lam)
    for _ in range(steps):
        v = rng.integers(n, size=count)
        u = rng.random(count)
        blocked = state[rows[:, None], nbrs[v]].any(axis=1)
        state[rows, v] = (u < p_occ) & ~blocked
    return state[:, :n]


def down_up_batch(g: Graph, k: int, steps: int, count: int, rng: np.random.Generator,
                  initial=None) -> np.ndarray:
    """`count` down-up chains on I_k(G) started from `initial` (greedy by default)."""
    n = g.n
    start = list(initial) if initial is not None else greedy_independent_set(g, k)
    if len(start) != k or not g.is_independent(start):
        raise PreconditionError("initial state must be an independent set of size k")
    occ = np.zeros((count, n + 1), dtype=bool)
    occ[:, start] = True
    members = np.tile(np.array(start, dtype=np.int64), (count, 1))
    nbrs = g.padded_neighbors
    rows = np.arange(count)
    for _ in range(steps):
        i = rng.integers(k, size=count)
        w = rng.integers(n, size=count)
        v = members[rows, i]
        occ[rows, v] = False
        blocked = occ[rows, w] | occ[rows[:, None], nbrs[w]].any(axis=1)
        move = ~blocked
        members[rows, i] = np.where(move, w, v)
        occ[rows, np.where(move, w, v)] = True
    return occ[:, :n]


def rows_to_sets(states: np.ndarray) -> list[tuple[int, ...]]:
    return [tuple(int(x) for x in np.flatnonzero(r)) for r in states]


# --- exact transition matrices (small graphs) -------------------------------------------

def _all_independent_sets(g: Graph) -> list[tuple[int, ...]]:
    out = []
    for k in range(g.n + 1):
        found = exact.list_size_k(g, k)
        if not found:
            break
        out.extend(found)
    return out


def glauber_transition_matrix(g: Graph, lam: float) -> tuple[list[tuple[int, ...]], np.ndarray]:
    states = _all_independent_sets(g)
    index = {s: i for i, s in enumerate(states)}
    P = np.zeros((len(states), len(states)))
    p_occ = lam / (1 + lam)
    for i, s in enumerate(states):
        cur = set(s)
        for v in range(g.n):
            without = tuple(sorted(cur - {v}))
            if any(u in cur for u in g.neighbors(v)):
                P[i, index[without]] += 1 / g.n
            else:
                P[i, index[tuple(sorted(cur | {v}))]] += p_occ / g.n
                P[i, index[without]] += (1 - p_occ) / g.n
    return states, P


def hard_core_vector(states, lam: float) -> np.ndarray:
    w = np.array([lam ** len(s) for s in states], dtype=float)
    return w / w.sum()


def down_up_transition_matrix(g: Graph, k: int) -> tuple[list[tuple[int, ...]], np.ndarray]:
    states = exact.list_size_k(g, k)
    index = {s: i for i, s in enumerate(states)}
    P = np.zeros((len(states), len(states)))
    for i, s in enumerate(states):
        cur = set(s)
        for v in s:
            for w in range(g.n):
                nxt = (cur - {v}) | {w}
                key = tuple(sorted(nxt))
                j = index.get(key) if len(nxt) == k else None
                P[i, i if j is None else j] += 1 / (k * g.n)
    return states, P


# --- fugacity search ----------------------------------------------------------------------

def _median_size(g: Graph, lam: float, runs: int, steps: int, rng) -> float:
    sizes = glauber_batch(g, lam, steps, runs, rng).sum(axis=1)
    return float(np.median(sizes))


def find_fugacity_randomized(g: Graph, k: int, eps: float, rng: np.random.Generator, *,
                             delta: float = DEFAULT_DELTA, runs: int | None = None,
                             steps: int | None = None) -> float:
    """λ with |E_λ Y - k| ≤ σ_λ with probability ≥ 1-ε.

    k ≤ √n returns k/n.  Otherwise binary search over the grid ℤ/n² ∩
    [n^{-1/3}, (1-δ)λ_c] (unbounded above for claw-free graphs) comparing the
    median chain size with k.
    """
    n = g.n
    if not 1 <= k <= n:
        raise PreconditionError(f"k = {k} outside 1..n")
    if k <= math.sqrt(n):
        return k / n
    runs = runs or 2 * math.ceil(2 * math.log(n / eps)) + 1
    steps = steps or burn_in_steps(n, eps)
    lo = math.ceil(n ** (2 - 1 / 3))
    if is_claw_free(g) or g.max_degree < 3:
        hi = lo
        while _median_size(g, hi / n**2, runs, steps, rng) < k:
            hi *= 2
            if hi > n**2 * 1e6:
                raise BudgetExhaustedError("fugacity search did not reach the target size")
    else:
        hi = math.floor((1 - delta) * float(critical_fugacity(g.max_degree)) * n**2)
        if hi < lo or _median_size(g, hi / n**2, runs, steps, rng) < k:
            raise BudgetExhaustedError(f"median size at the top of the fugacity range stays below k = {k}")
    while lo < hi:
        mid = (lo + hi) // 2
        if _median_size(g, mid / n**2, runs, steps, rng) >= k:
            hi = mid
        else:
            lo = mid + 1
    return lo / n**2


# --- rejection sampling ------------------------------------------------------------------------

@dataclass
class RejectionResult:
    sample: tuple[int, ...] | None
    tries: int


def rejection_sample_k(g: Graph, lam: float, k: int, rng: np.random.Generator, max_tries: int = 10_000,
                       steps: int | None = None) -> RejectionResult:
    """Fresh Glauber samples until one has size k."""
    steps = steps or burn_in_steps(g.n, 0.01)
    for t in range(1, max_tries + 1):
        s = glauber_run(g, lam, steps, rng)
        if len(s) == k:
            return RejectionResult(s, t)
    return RejectionResult(None, max_tries)


@dataclass
class SampleBatch:
    samples: list[tuple[int, ...]]
    method: str
    diagnostics: dict = field(default_factory=dict)


def rejection_batch(g: Graph, lam: float, k: int, count: int, rng: np.random.Generator, *,
                    steps: int | None = None, max_rounds: int = 1000) -> SampleBatch:
    steps = steps or burn_in_steps(g.n, 0.01)
    out: list[np.ndarray] = []
    tries = 0
    for _ in range(max_rounds):
        need = count - sum(len(x) for x in out)
        if need <= 0:
            break
        batch = glauber_batch(g, lam, steps, need, rng)
        tries += need
        out.append(batch[batch.sum(axis=1) == k])
    got = np.concatenate(out) if out else np.zeros((0, g.n), dtype=bool)
    if len(got) < count:
        raise BudgetExhaustedError(f"rejection sampling produced {len(got)} of {count} samples")
    return SampleBatch(rows_to_sets(got[:count]), "rejection", {"tries": tries, "acceptance_rate": count / tries})


# --- neighbourhood-resampling sampler --------------------------------------------------------------

@dataclass(frozen=True)
class FastSamplerConfig:
    c: float = 1.0
    c_prime: float | None = None  # None: threshold from the |S*| lower tail at level threshold_level·ε
    c_rep: float = 8.0
    c_eps: float = 1.0  # plain rejection when ε < exp(-n/c_eps)
    burn_in_const: float = BURN_IN_CONSTANT
    threshold_level: float = 0.01
    lam: float | None = None

    def modulus(self, n: int, eps: float) -> int:
        return max(1, math.ceil(self.c * math.sqrt(n / math.log(1 / eps))))

    def repeat_cap(self, eps: float) -> int:
        return math.ceil(self.c_rep * math.log(1 / eps) ** 1.5)


def _log_comb(m: int, j: int) -> float:
    return math.lgamma(m + 1) - math.lgamma(j + 1) - math.lgamma(m - j + 1)


def _binmax(m: int) -> float:
    """max_j C(m,j)·2^{-m}."""
    return math.comb(m, m // 2) / 2**m if m < 1000 else math.exp(_log_comb(m, m // 2) - m * math.log(2))


def _binom_cdf_below(m: int, trials: int, prob: float) -> float:
    """P(Bin(trials, prob) < m)."""
    return sum(math.comb(trials, j) * prob**j * (1 - prob) ** (trials - j) for j in range(min(m, trials + 1)))


def choose_undecided(undecided: np.ndarray, sizes: np.ndarray, rng: np.random.Generator) -> list[np.ndarray]:
    """Per row, a uniform subset of the True positions with the requested size."""
    keys = rng.random(undecided.shape)
    keys[~undecided] = np.inf
    order = np.argsort(keys, axis=1)
    return [order[i, : max(int(sizes[i]), 0)] for i in range(len(order))]


class _Block:
    """Closed neighbourhood of a separated vertex and its independent subsets."""

    def __init__(self, g: Graph, v: int, lam: float):
        self.v = v
        self.vertices = [v] + list(g.neighbors(v))
        local = {u: i for i, u in enumerate(self.vertices)}
        size = len(self.vertices)
        sets = []
        for mask in range(1 << size):
            chosen = [self.vertices[i] for i in range(size) if mask >> i & 1]
            if g.is_independent(chosen):
                sets.append(chosen)
        # order: ∅, {v}, then the rest
        sets.sort(key=lambda s: (s != [], s != [v], len(s), s))
        self.sets = sets
        self.sizes = np.array([len(s) for s in sets])
        self.base = np.array([lam ** len(s) for s in sets])
        # incidence of each set with the non-centre vertices (which may be blocked by J)
        self.uses = np.zeros((len(sets), size - 1), dtype=bool)
        for i, s in enumerate(sets):
            for u in s:
                if u != v:
                    self.uses[i, local[u] - 1] = True

    def probabilities(self, blocked: np.ndarray) -> np.ndarray:
        """p_{v,K} for each chain; blocked is (chains, deg) for the neighbours of v."""
        ok = ~(blocked[:, None, :] & self.uses[None, :, :]).any(axis=2)
        w = ok * self.base[None, :]
        return w / w.sum(axis=1, keepdims=True)

    def q_lower(self) -> float:
        """min over every blocking pattern of min(p_∅, p_{v})."""
        deg = self.uses.shape[1]
        patterns = np.array([[b >> i & 1 for i in range(deg)] for b in range(1 << deg)], dtype=bool)
        p = self.probabilities(patterns) if deg else self.base[None, :] / self.base.sum()
        return float(np.minimum(p[:, 0], p[:, 1]).min())


class FastSampler:
    """Uniform size-k independent sets by resampling the neighbourhoods of a separated set.

    Each round runs Glauber dynamics at fugacity λ, keeps J = I ∩ T and resamples
    the closed neighbourhood of every separated vertex v given J.  A shared
    probability 2q of "undecided" is split off each neighbourhood distribution;
    undecided neighbourhoods are later filled with k' centres chosen uniformly,
    which is accepted with probability p·C(m,k')·2^{-m}.  Conditional on
    acceptance the output is distributed as the hard-core measure restricted to
    size k, i.e. uniform, up to the chain's burn-in bias and the |S*| threshold.
    """

    def __init__(self, g: Graph, k: int, eps: float, lam: float, config: FastSamplerConfig):
        self.graph, self.k, self.eps, self.lam, self.config = g, k, eps, lam, config
        self.S = separated_set(g, 4)
        near = np.zeros(g.n, dtype=bool)
        for v in self.S:
            near[v] = True
            near[list(g.neighbors(v))] = True
        self.T = ~near
        self.blocks = [_Block(g, v, lam) for v in self.S]
        self.q_lo = min((b.q_lower() for b in self.blocks), default=0.0)
        if self.S and self.q_lo <= 0:
            raise AssertionError("q must be positive")
        s_size = len(self.S)
        if config.c_prime is not None:
            self.m_min = math.floor(config.c_prime * g.n) + 1
        else:
            level = config.threshold_level * eps
            m = 0
            while m < s_size and _binom_cdf_below(m + 1, s_size, 2 * self.q_lo) <= level:
                m += 1
            self.m_min = m
        self.modulus = config.modulus(g.n, eps)
        self.p_eff = min(self.modulus, 1 / _binmax(self.m_min))
        self.repeat_cap = config.repeat_cap(eps)
        self.steps = burn_in_steps(g.n, eps, config.burn_in_const)
        self.fallback = tuple(sorted(greedy_independent_set(g, k)))
        self.table_error = 0.0

    def _round(self, count: int, rng: np.random.Generator):
        g, k = self.graph, self.k
        states = glauber_batch(g, self.lam, self.steps, count, rng)
        J = states & self.T[None, :]
        out = J.copy()
        size = J.sum(axis=1)
        undecided = np.zeros((count, len(self.S)), dtype=bool)
        probs_all = []
        q = np.full(count, np.inf)
        Jpad = np.concatenate([J, np.zeros((count, 1), dtype=bool)], axis=1)
        nbrs = g.padded_neighbors
        for b in self.blocks:
            outer = b.vertices[1:]
            blocked = Jpad[:, nbrs[outer]].any(axis=2) if outer else np.zeros((count, 0), dtype=bool)
            p = b.probabilities(blocked)
            self.table_error = max(self.table_error, float(np.abs(p.sum(axis=1) - 1).max()))
            probs_all.append(p)
            q = np.minimum(q, np.minimum(p[:, 0], p[:, 1]))
        for i, (b, p) in enumerate(zip(self.blocks, probs_all)):
            w = p.copy()
            w[:, 0] -= q
            w[:, 1] -= q
            cum = np.cumsum(np.concatenate([2 * q[:, None], w], axis=1), axis=1)
            u = rng.random(count)[:, None] * cum[:, -1:]
            choice = (u >= cum).sum(axis=1)  # 0 means undecided, j ≥ 1 is set j-1
            undecided[:, i] = choice == 0
            picked = np.maximum(choice - 1, 0)
            decided = ~undecided[:, i]
            for j, s in enumerate(b.sets):
                rows = decided & (picked == j)
                if s and rows.any():
                    out[np.ix_(rows, s)] = True
            size += np.where(decided, b.sizes[picked], 0)
        m = undecided.sum(axis=1)
        kp = k - size
        feasible = (m >= self.m_min) & (kp >= 0) & (kp <= m)
        accept_prob = np.zeros(count)
        for idx in np.flatnonzero(feasible):
            mm, jj = int(m[idx]), int(kp[idx])
            accept_prob[idx] = self.p_eff * math.exp(_log_comb(mm, jj) - mm * math.log(2))
        if (accept_prob > 1 + 1e-12).any():
            raise AssertionError("acceptance probability above 1")
        accepted = rng.random(count) < accept_prob
        picks = choose_undecided(undecided, kp, rng)
        centres = np.array(self.S, dtype=np.int64)
        for idx in np.flatnonzero(accepted):
            out[idx, centres[picks[idx]]] = True
        return out, accepted, m

    def residue_deviation(self, modulus: int | None = None) -> float:
        """max over J and t of |P[Y ≡ t mod p | I∩T = J] - 1/p|, by exact enumeration.

        Only the separated neighbourhoods vary given J, so the conditional law of Y
        is |J| plus the convolution of the per-block size distributions.
        """
        g = self.graph
        p = modulus or self.modulus
        tverts = [int(v) for v in np.flatnonzero(self.T)]
        if len(tverts) > 20:
            raise PreconditionError("exhaustive conditioning limited to |T| ≤ 20")
        sub, ids = g.induced_subgraph(tverts)
        worst = 0.0
        for size in range(sub.n + 1):
            found = exact.list_size_k(sub, size)
            if not found and size:
                break
            for local in found:
                J = np.zeros((1, g.n + 1), dtype=bool)
                J[0, [ids[i] for i in local]] = True
                dist = np.zeros(p)
                dist[size % p] = 1.0
                for b in self.blocks:
                    outer = b.vertices[1:]
                    blocked = J[:, g.padded_neighbors[outer]].any(axis=2) if outer else np.zeros((1, 0), dtype=bool)
                    probs = b.probabilities(blocked)[0]
                    step = np.zeros(p)
                    for sz, pr in zip(b.sizes, probs):
                        step[sz % p] += pr
                    dist = np.array([sum(dist[i] * step[(t - i) % p] for i in range(p)) for t in range(p)])
                worst = max(worst, float(np.abs(dist - 1 / p).max()))
        return worst

    def sample(self, count: int, rng: np.random.Generator) -> SampleBatch:
        results: list[np.ndarray | None] = [None] * count
        pending = np.arange(count)
        rounds = 0
        attempts = 0
        undecided_total = 0
        while len(pending) and rounds < self.repeat_cap:
            out, accepted, m = self._round(len(pending), rng)
            attempts += len(pending)
            undecided_total += int(m.sum())
            for slot, row in zip(pending[accepted], out[accepted]):
                results[slot] = row
            pending = pending[~accepted]
            rounds += 1
        samples = []
        for r in results:
            samples.append(self.fallback if r is None else tuple(int(x) for x in np.flatnonzero(r)))
        diag = {
            "lambda": self.lam, "separated": len(self.S), "q_lower": self.q_lo, "m_min": self.m_min,
            "modulus": self.modulus, "p_eff": self.p_eff, "repeat_cap": self.repeat_cap,
            "burn_in": self.steps, "rounds": rounds, "attempts": attempts,
            "acceptance_rate": (count - len(pending)) / attempts if attempts else 0.0,
            "repeat_cap_hits": int(len(pending)), "mean_undecided": undecided_total / attempts if attempts else 0.0,
            "table_error": self.table_error,
        }
        return SampleBatch(samples, "fast", diag)


def _k_bound(g: Graph, delta: float) -> int:
    from .counting import max_valid_k
    return max_valid_k(g, delta)


def sample_k_batch(g: Graph, k: int, eps: float, count: int, rng: np.random.Generator, *,
                   method: str = "auto", config: FastSamplerConfig | None = None,
                   delta: float = DEFAULT_DELTA, check_range: bool = True, max_rounds: int = 1000) -> SampleBatch:
    """`count` approximately uniform members of I_k(G).

    method "auto" follows the regimes of the neighbourhood sampler: the down-up
    walk for k ≤ n/(3Δ+1), plain rejection for ε < exp(-n/c_eps), and the
    neighbourhood sampler otherwise.
    """
    config = config or FastSamplerConfig()
    if not 0 < eps < 1:
        raise PreconditionError("ε must lie in (0, 1)")
    if check_range:
        bound = _k_bound(g, delta)
        if not 1 <= k <= bound:
            raise PreconditionError(f"k = {k} outside the supported range 1..{bound}")
    d = max(g.max_degree, 1)
    if method == "auto":
        if k <= g.n / (3 * d + 1):
            method = "downup"
        elif eps < math.exp(-g.n / config.c_eps):
            method = "rejection"
        else:
            method = "fast"
    if method == "downup":
        states = down_up_batch(g, k, burn_in_steps(g.n, eps, config.burn_in_const), count, rng)
        return SampleBatch(rows_to_sets(states), "downup", {"steps": burn_in_steps(g.n, eps, config.burn_in_const)})
    lam = config.lam if config.lam is not None else find_fugacity_randomized(g, k, eps, rng, delta=delta)
    if method == "rejection":
        res = rejection_batch(g, lam, k, count, rng, steps=burn_in_steps(g.n, eps, config.burn_in_const),
                              max_rounds=max_rounds)
        res.diagnostics["lambda"] = lam
        return res
    if method != "fast":
        raise PreconditionError(f"unknown sampling method {method!r}")
    batch = FastSampler(g, k, eps, lam, config).sample(count, rng)
    if g.n / (3 * d + 1) < k <= g.n / (3 * d):
        batch.diagnostics["regime_note"] = "k between n/(3Δ+1) and n/(3Δ)"
    return batch


def fast_sample_k(g: Graph, k: int, eps: float, rng: np.random.Generator,
                  config: FastSamplerConfig | None = None) -> tuple[int, ...]:
    return sample_k_batch(g, k, eps, 1, rng, config=config).samples[0]


def sample_matchings_batch(g: Graph, k: int, eps: float, count: int, rng: np.random.Generator, *,
                           method: str = "auto", config: FastSamplerConfig | None = None,
                           delta: float = DEFAULT_DELTA, max_rounds: int = 1000) -> SampleBatch:
    from .counting import max_valid_matching_k
    bound, m_star = max_valid_matching_k(g, delta)
    if not 1 <= k <= bound:
        raise PreconditionError(f"k = {k} outside 1..{bound} (m* = {m_star})")
    lg = line_graph(g)
    batch = sample_k_batch(lg, k, eps, count, rng, method=method, config=config, delta=delta, check_range=False,
                           max_rounds=max_rounds)
    edges = g.edges
    batch.samples = [tuple(edges[i] for i in s) for s in batch.samples]
    batch.diagnostics["m_star"] = m_star
    return batch


def sample_matching_k(g: Graph, k: int, eps: float, rng: np.random.Generator,
                      config: FastSamplerConfig | None = None) -> tuple[tuple[int, int], ...]:
    return sample_matchings_batch(g, k, eps, 1, rng, config=config).samples[0]


# --- FPRAS ---------------------------------------------------------------------------------------

@dataclass(frozen=True)
class FprasEstimate:
    k: int
    log_estimate: float
    case: str
    samples: int
    successes: int
    lam: float | None

    @property
    def estimate(self) -> float:
        return math.exp(self.log_estimate)


def _independent_rows(g: Graph, picks: np.ndarray) -> np.ndarray:
    """Rows of a (count, k) vertex array that form independent sets of distinct vertices."""
    count, k = picks.shape
    ok = np.ones(count, dtype=bool)
    adj = np.zeros((g.n, g.n), dtype=bool)
    for u, v in g.edges:
        adj[u, v] = adj[v, u] = True
    for a in range(k):
        for b in range(a + 1, k):
            ok &= (picks[:, a] != picks[:, b]) & ~adj[picks[:, a], picks[:, b]]
    return ok


def fpras_count(g: Graph, k: int, eps: float, rng: np.random.Generator, *, delta: float = DEFAULT_DELTA,
                case: str | None = None, check_range: bool = True) -> FprasEstimate:
    """Estimate of i_k within e^{±ε} with probability at least 3/4.

    Case I (k ≤ √n): C(n,k) times the fraction of uniform k-subsets that are
    independent.  Case II: Glauber frequency of size k times Ẑ(λ)·λ^{-k}.
    """
    n = g.n
    if check_range:
        bound = _k_bound(g, delta)
        if not 1 <= k <= bound:
            raise PreconditionError(f"k = {k} outside the supported range 1..{bound}")
    if not 0 < eps < 1:
        raise PreconditionError("ε must lie in (0, 1)")
    if case is None:
        case = "I" if k <= math.sqrt(n) else "II"
    if case == "I":
        d = g.max_degree
        p_lo = 1.0
        for i in range(1, k):
            p_lo *= max(1 - i * d / (n - i), 0.0)
        if p_lo <= 0:
            raise PreconditionError("Case I needs a positive lower bound on the independent fraction")
        ell = math.ceil(16 / (eps * eps * p_lo))
        picks = np.argsort(rng.random((ell, n)), axis=1)[:, :k] if n <= 64 else _distinct_picks(n, k, ell, rng)
        hits = int(_independent_rows(g, picks).sum())
        if hits == 0:
            raise BudgetExhaustedError("no independent k-subset drawn")
        log_est = math.log(math.comb(n, k)) + math.log(hits / ell)
        return FprasEstimate(k, log_est, "I", ell, hits, None)
    from .interpolation import region_evaluate_Z
    lam = find_fugacity_randomized(g, k, eps, rng, delta=delta)
    ell = math.ceil(16 * math.sqrt(max(n * lam, 1.0)) / (eps * eps))
    states = glauber_batch(g, lam, burn_in_steps(n, eps), ell, rng)
    hits = int((states.sum(axis=1) == k).sum())
    if hits == 0:
        raise BudgetExhaustedError("no sample of size k")
    z = region_evaluate_Z(g, lam, eps / 4)
    log_est = z.log_value.real - k * math.log(lam) + math.log(hits / ell)
    return FprasEstimate(k, log_est, "II", ell, hits, lam)


def _distinct_picks(n: int, k: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform k-subsets by sequential draws without replacement (vectorized over rows)."""
    picks = np.empty((count, k), dtype=np.int64)
    for j in range(k):
        # draw among n - j remaining values, then shift past the earlier picks
        r = rng.integers(n - j, size=count)
        prev = np.sort(picks[:, :j], axis=1)
        for c in range(j):
            r = r + (r >= prev[:, c])
        picks[:, j] = r
    return picks
