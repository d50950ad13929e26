"""Cluster expansion of log Z for the hard-core model with KP tail certificates."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Iterator

from . import exact
from .errors import CertificationError, PreconditionError
from .graphcore import Graph

DEFAULT_GUARD = 10
SUPPORT_GUARD = 12


class ClusterGuardError(PreconditionError):
    pass


class NotCertifiableError(CertificationError):
    """Requested certificate needs λe(Δ+1) < 1."""


# --- Ursell function ----------------------------------------------------------

def _edge_masks(n: int, edges) -> list[int]:
    masks = [0] * n
    for u, v in edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return masks


@lru_cache(maxsize=None)
def _connected_signed_sum(n: int, edges: tuple[tuple[int, int], ...]) -> int:
    """Σ over connected spanning edge subsets A of (-1)^|A|.

    Over a vertex set S the unrestricted sum Σ_{A⊆E(S)} (-1)^|A| is 1 when S
    spans no edge and 0 otherwise; peeling off the block containing the lowest
    vertex inverts that into the connected sum.
    """
    if n == 0:
        return 0
    masks = _edge_masks(n, edges)
    size = 1 << n
    stable = [True] * size
    for s in range(1, size):
        low = (s & -s).bit_length() - 1
        rest = s & (s - 1)
        stable[s] = stable[rest] and not (masks[low] & rest)
    conn = [0] * size
    for s in range(1, size):
        low = s & -s
        acc = 1 if stable[s] else 0
        rest = s ^ low
        sub = rest
        # proper subsets T of s that contain the lowest vertex: T = low | sub, sub ⊊ rest
        while True:
            sub = (sub - 1) & rest
            if sub == rest:
                break
            t = low | sub
            if conn[t] and stable[s ^ t]:
                acc -= conn[t]
            if sub == 0:
                break
        conn[s] = acc
    return conn[size - 1]


def connected_signed_sum_literal(n: int, edges) -> int:
    """Same quantity by direct summation over all edge subsets (test oracle)."""
    edges = list(edges)
    if len(edges) > 22:
        raise ClusterGuardError("literal edge-subset sum limited to 22 edges")
    total = 0
    for bits in range(1 << len(edges)):
        chosen = [e for i, e in enumerate(edges) if bits >> i & 1]
        if _spans_connected(n, chosen):
            total += -1 if len(chosen) % 2 else 1
    return total


def _spans_connected(n: int, edges) -> bool:
    if n == 0:
        return False
    masks = _edge_masks(n, edges)
    seen = 1
    frontier = 1
    while frontier:
        v = (frontier & -frontier).bit_length() - 1
        frontier &= frontier - 1
        new = masks[v] & ~seen
        seen |= new
        frontier |= new
    return seen == (1 << n) - 1


def ursell(h: Graph, guard: int = DEFAULT_GUARD) -> Fraction:
    """φ(H) = (1/|V|!) Σ_{A ⊆ E(H) connected spanning} (-1)^|A|."""
    if h.n > guard:
        raise ClusterGuardError(f"Ursell function limited to {guard} vertices, got {h.n}")
    if h.n == 0:
        return Fraction(0)
    return Fraction(_connected_signed_sum(h.n, tuple(h.edges)), factorial(h.n))


# --- clusters -------------------------------------------------------------------

@dataclass(frozen=True)
class Cluster:
    """Connected vertex multiset; weight = ordering_count·φ(H)."""

    support: tuple[tuple[int, int], ...]  # (vertex, multiplicity), ascending vertex
    weight: Fraction = field(compare=False)

    @property
    def size(self) -> int:
        return sum(m for _, m in self.support)

    @property
    def ordering_count(self) -> int:
        return factorial(self.size) // prod(factorial(m) for _, m in self.support)

    def incompatibility_graph(self, g: Graph) -> Graph:
        return _incompatibility_graph(g, self.support)

    def __str__(self) -> str:
        parts = [f"{v}" if m == 1 else f"{v}^{m}" for v, m in self.support]
        return "{" + " ".join(parts) + "}"


def _incompatibility_graph(g: Graph, support) -> Graph:
    copies = [v for v, m in support for _ in range(m)]
    edges = []
    for i in range(len(copies)):
        for j in range(i + 1, len(copies)):
            a, b = copies[i], copies[j]
            if a == b or (g.masks[a] >> b) & 1:
                edges.append((i, j))
    return Graph(len(copies), edges)


def connected_subsets(g: Graph, max_size: int) -> Iterator[tuple[int, ...]]:
    """Each connected vertex subset of size ≤ max_size exactly once.

    Extension-set enumeration anchored at the smallest vertex of each subset.
    """
    masks = g.masks

    def extend(sub: int, ext: int, anchor: int, closed: int, size: int):
        yield sub
        if size == max_size:
            return
        while ext:
            w = (ext & -ext).bit_length() - 1
            ext &= ext - 1
            fresh = masks[w] & ~closed & ~((1 << (anchor + 1)) - 1)
            yield from extend(sub | (1 << w), ext | fresh, anchor, closed | masks[w] | (1 << w), size + 1)

    for v in range(g.n):
        ext = masks[v] & ~((1 << (v + 1)) - 1)
        for sub in extend(1 << v, ext, v, masks[v] | (1 << v), 1):
            yield tuple(_bits(sub))


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        out.append((mask & -mask).bit_length() - 1)
        mask &= mask - 1
    return out


def _compositions(total_extra: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Non-negative integer vectors of length `parts` summing to total_extra."""
    if parts == 1:
        yield (total_extra,)
        return
    for first in range(total_extra + 1):
        for rest in _compositions(total_extra - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _multiset_weight(structure: tuple[tuple[int, int], ...], mults: tuple[int, ...]) -> Fraction:
    # structure: induced edges of the support in local indices
    copies = [i for i, m in enumerate(mults) for _ in range(m)]
    edges = []
    adj = set(structure)
    for a in range(len(copies)):
        for b in range(a + 1, len(copies)):
            x, y = copies[a], copies[b]
            if x == y or (min(x, y), max(x, y)) in adj:
                edges.append((a, b))
    signed = _connected_signed_sum(len(copies), tuple(edges))
    return Fraction(signed, prod(factorial(m) for m in mults))


def enumerate_clusters(g: Graph, t: int, guard: int = DEFAULT_GUARD) -> Iterator[Cluster]:
    """Every connected multiset of size ≤ t with weight ordering_count·φ(H)."""
    if t > guard:
        raise ClusterGuardError(f"cluster enumeration limited to t ≤ {guard}, got {t}")
    for sub in connected_subsets(g, t):
        index = {v: i for i, v in enumerate(sub)}
        structure = tuple(sorted((index[u], index[w]) for u in sub for w in g.neighbors(u) if w in index and u < w))
        for size in range(len(sub), t + 1):
            for extra in _compositions(size - len(sub), len(sub)):
                mults = tuple(1 + e for e in extra)
                weight = _multiset_weight(structure, mults)
                if weight:
                    yield Cluster(tuple(zip(sub, mults)), weight)


# --- per-order aggregates -------------------------------------------------------

def _coefficients_from_clusters(g: Graph, t: int) -> list[Fraction]:
    out = [Fraction(0)] * t
    for c in enumerate_clusters(g, t):
        out[c.size - 1] += c.weight
    return out


def _coefficients_from_supports(g: Graph, t: int) -> list[Fraction]:
    """Group clusters by support and resum each group exactly.

    The clusters supported exactly on S sum to the Möbius transform
    Σ_{K⊆S connected, N_S[K]=S} (-1)^{|S|-|K|} log Z_{G[K]}; exchanging the
    sums leaves one log-Taylor expansion per connected K, weighted by a
    truncated alternating binomial sum over its outer boundary.
    """
    if t > SUPPORT_GUARD:
        raise ClusterGuardError(f"support resummation limited to t ≤ {SUPPORT_GUARD}")
    out = [Fraction(0)] * t
    for sub in connected_subsets(g, t):
        inside = set(sub)
        boundary = {w for v in sub for w in g.neighbors(v)} - inside
        b = len(boundary)
        h, _ = g.induced_subgraph(sub)
        logz = exact.log_taylor_from_counts(exact.independent_set_counts(h, t), t)
        for j in range(len(sub), t + 1):
            room = j - len(sub)
            # Σ_{d≤min(b,room)} (-1)^d C(b,d), which telescopes
            if b == 0:
                factor = 1
            elif room >= b:
                factor = 0
            else:
                factor = (-1) ** room * comb(b - 1, room)
            if factor:
                out[j - 1] += factor * logz[j - 1]
    return out


def _coefficients_from_counts(g: Graph, t: int) -> list[Fraction]:
    return exact.log_taylor_from_counts(exact.independent_set_counts(g, t), t)


def order_coefficients(g: Graph, t: int, method: str = "auto") -> list[Fraction]:
    """Aggregate Σ_{|Γ|=j} ordering_count·φ(H(Γ)) for j = 1..t (exact)."""
    if method == "auto":
        method = "supports" if t <= DEFAULT_GUARD else "counts"
    if method == "clusters":
        return _coefficients_from_clusters(g, t)
    if method == "supports":
        return _coefficients_from_supports(g, t)
    if method == "counts":
        return _coefficients_from_counts(g, t)
    raise ValueError(f"unknown method {method!r}")


# --- truncated sums with certificates ----------------------------------------------

def kp_ratio(lam: float, max_degree: int) -> float:
    return lam * math.e * (max_degree + 1)


def kp_tail_bound(n: int, lam: float, max_degree: int, t: int) -> float:
    return n * kp_ratio(lam, max_degree) ** t


def cumulant_tail_bound(n: int, lam: float, max_degree: int, t: int, k: int) -> float:
    """n·Σ_{j≥t} j^k x^j with x = λe(Δ+1) < 1, summed until the remainder is negligible."""
    x = kp_ratio(lam, max_degree)
    if x >= 1:
        return math.inf
    total = 0.0
    j = max(t, 1)
    peak = k / -math.log(x) if x > 0 else 0.0
    while True:
        term = j**k * x**j
        total += term
        if j > peak + 1:
            r = ((j + 1) / j) ** k * x
            if r < 1 and term * r / (1 - r) <= 1e-16 * max(total, 1e-300):
                total += term * r / (1 - r)
                break
        j += 1
    return n * total


@dataclass(frozen=True)
class ClusterSum:
    value: float
    order_terms: tuple[float, ...]
    truncation_order: int
    kp_tail_bound: float
    certified: bool
    ratio: float

    def cumulative(self) -> list[float]:
        out, acc = [], 0.0
        for x in self.order_terms:
            acc += x
            out.append(acc)
        return out


def _certified(lam: float, max_degree: int, delta: float) -> bool:
    return kp_ratio(lam, max_degree) <= 1 - delta


def truncated_log_Z(g: Graph, lam: float, t: int, *, max_degree: int | None = None, delta: float = 0.1,
                    method: str = "auto") -> ClusterSum:
    """Σ over clusters of size ≤ t of ordering_count·φ(H)·λ^|Γ|."""
    if lam <= 0:
        raise ValueError("λ must be positive")
    d = g.max_degree if max_degree is None else max_degree
    coeffs = order_coefficients(g, t, method)
    terms = tuple(float(c) * lam ** (j + 1) for j, c in enumerate(coeffs))
    return ClusterSum(math.fsum(terms), terms, t, kp_tail_bound(g.n, lam, d, t), _certified(lam, d, delta),
                      kp_ratio(lam, d))


def truncated_cumulant(g: Graph, lam: float, k: int, t: int, *, max_degree: int | None = None,
                       delta: float = 0.1, method: str = "auto") -> ClusterSum:
    """κ_k ≈ Σ_{|Γ|≤t} |Γ|^k·ordering_count·φ(H)·λ^|Γ|."""
    if k < 1:
        raise ValueError("cumulant order must be at least 1")
    d = g.max_degree if max_degree is None else max_degree
    coeffs = order_coefficients(g, t, method)
    terms = tuple((j + 1) ** k * float(c) * lam ** (j + 1) for j, c in enumerate(coeffs))
    return ClusterSum(math.fsum(terms), terms, t, cumulant_tail_bound(g.n, lam, d, t, k),
                      _certified(lam, d, delta), kp_ratio(lam, d))


def select_truncation_order(lam: float, max_degree: int, eps: float, n: int, k: int = 0,
                            t_max: int = 10_000) -> int:
    """Smallest t whose tail bound is ≤ ε·λ·n (k = 0 bounds log Z itself)."""
    if kp_ratio(lam, max_degree) >= 1:
        raise NotCertifiableError(f"λe(Δ+1) = {kp_ratio(lam, max_degree):.4g} ≥ 1; cluster expansion not certified")
    target = eps * lam * n
    for t in range(1, t_max + 1):
        tail = kp_tail_bound(n, lam, max_degree, t) if k == 0 else cumulant_tail_bound(n, lam, max_degree, t, k)
        if tail <= target:
            return t
    raise NotCertifiableError(f"no truncation order up to {t_max} meets the target")
