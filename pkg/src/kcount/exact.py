"""Exact oracles: independence and matching polynomials, size distributions."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import PreconditionError
from .graphcore import Graph, line_graph

DEFAULT_GUARD = 40


class GuardExceededError(PreconditionError):
    """Exact enumeration requested on a graph above the configured size guard."""


@dataclass(frozen=True)
class DensePolynomial:
    """Exact integer coefficient vector; coeffs[k] counts the size-k sets."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs or self.coeffs[0] != 1:
            raise ValueError("constant coefficient must be 1")
        if any(c < 0 for c in self.coeffs):
            raise ValueError("coefficients must be non-negative")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def total(self) -> int:
        return sum(self.coeffs)


# --- polynomial helpers on plain lists ---------------------------------------

def _add(a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return out


def _mul(a: list[int], b: list[int], cap: int | None) -> list[int]:
    size = len(a) + len(b) - 1
    if cap is not None:
        size = min(size, cap + 1)
    out = [0] * size
    for i, x in enumerate(a):
        if not x:
            continue
        for j in range(min(len(b), size - i)):
            out[i + j] += x * b[j]
    return out


def _split_components(mask: int, masks: Sequence[int]) -> list[int]:
    parts = []
    rest = mask
    while rest:
        low = rest & -rest
        comp = low
        frontier = low
        while frontier:
            v = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            new = masks[v] & rest & ~comp
            comp |= new
            frontier |= new
        parts.append(comp)
        rest &= ~comp
    return parts


def independent_set_counts(g: Graph, max_size: int | None = None) -> list[int]:
    """Counts of independent sets by size, optionally truncated at max_size.

    Branching recursion Z(G) = Z(G-v) + x·Z(G-N[v]) on vertex bitmasks,
    splitting into connected components and memoising each component.
    """
    masks = g.masks
    memo: dict[int, list[int]] = {}

    def solve(mask: int) -> list[int]:
        if mask == 0:
            return [1]
        hit = memo.get(mask)
        if hit is not None:
            return hit
        parts = _split_components(mask, masks)
        if len(parts) > 1:
            out = [1]
            for part in parts:
                out = _mul(out, solve(part), max_size)
            memo[mask] = out
            return out
        verts = []
        best = -1
        m = mask
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            d = bin(masks[v] & mask).count("1")
            if d > best:
                best, verts = d, [v]
            elif d == best:
                verts.append(v)
        v = verts[len(verts) // 2]
        without = solve(mask & ~(1 << v))
        with_v = solve(mask & ~(1 << v) & ~masks[v])
        shifted = [0] + with_v
        if max_size is not None:
            shifted = shifted[: max_size + 1]
        out = _add(without, shifted)
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        memo[mask] = out
        return out

    import sys

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10_000))
    try:
        return list(solve((1 << g.n) - 1))
    finally:
        sys.setrecursionlimit(old)


def independence_polynomial(g: Graph, guard: int = DEFAULT_GUARD) -> DensePolynomial:
    if g.n > guard:
        raise GuardExceededError(f"exact independence polynomial limited to n ≤ {guard}, got n = {g.n}")
    return DensePolynomial(tuple(independent_set_counts(g)))


def matching_counts(g: Graph, guard: int = DEFAULT_GUARD) -> DensePolynomial:
    if g.edge_count == 0:
        return DensePolynomial((1,))
    return independence_polynomial(line_graph(g), guard)


def enumerate_counts(g: Graph) -> list[int]:
    """Direct 2^n subset loop; the slow, obviously-correct oracle."""
    if g.n > 22:
        raise GuardExceededError("subset enumeration limited to n ≤ 22")
    masks = g.masks
    counts = [0] * (g.n + 1)
    for s in range(1 << g.n):
        ok = True
        m = s
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            if masks[v] & s:
                ok = False
                break
        if ok:
            counts[bin(s).count("1")] += 1
    while len(counts) > 1 and counts[-1] == 0:
        counts.pop()
    return counts


def count_size_k(g: Graph, k: int) -> int:
    """Number of independent sets of size exactly k by bounded-depth search."""
    if k == 0:
        return 1
    masks = g.masks
    full = (1 << g.n) - 1

    def rec(avail: int, need: int) -> int:
        if need == 0:
            return 1
        if bin(avail).count("1") < need:
            return 0
        total = 0
        m = avail
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            # only vertices above v remain eligible, avoiding double counting
            total += rec(m & ~masks[v], need - 1)
        return total

    return rec(full, k)


def list_size_k(g: Graph, k: int) -> list[tuple[int, ...]]:
    """All independent sets of size k as sorted tuples (small graphs)."""
    out: list[tuple[int, ...]] = []
    masks = g.masks

    def rec(avail: int, chosen: list[int]):
        if len(chosen) == k:
            out.append(tuple(chosen))
            return
        m = avail
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            chosen.append(v)
            rec(m & ~masks[v], chosen)
            chosen.pop()

    rec((1 << g.n) - 1, [])
    return out


# --- closed forms and transfer recurrences for paths and cycles ---------------

def path_count(n: int, k: int) -> int:
    return comb(n - k + 1, k) if 0 <= k else 0


def cycle_count(n: int, k: int) -> int:
    if k == 0:
        return 1
    if k >= n:
        return 0
    return n * comb(n - k, k) // (n - k)


def path_matching_count(n: int, k: int) -> int:
    return comb(n - k, k) if 0 <= k <= n else 0


def cycle_matching_count(n: int, k: int) -> int:
    return cycle_count(n, k)


def path_polynomial(n: int) -> list[int]:
    """Z(P_n) from the two-term transfer recurrence."""
    prev, cur = [1], [1]  # P_{-1} treated as the empty graph, P_0
    for _ in range(n):
        prev, cur = cur, _add(cur, [0] + prev)
    return cur


def cycle_polynomial(n: int) -> list[int]:
    if n < 3:
        raise ValueError("cycle needs n ≥ 3")
    return _add(path_polynomial(n - 1), [0] + path_polynomial(n - 3))


# --- evaluation and distributions ------------------------------------------

def evaluate_Z(p: DensePolynomial | Sequence[int], lam: complex) -> complex:
    coeffs = p.coeffs if isinstance(p, DensePolynomial) else tuple(p)
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * lam + c
    return acc


def log_weights(coeffs: Sequence[int], lam: float) -> list[float]:
    """log(i_k λ^k) for each k with i_k > 0 (-inf otherwise); safe for huge integers."""
    ll = math.log(lam)
    return [math.log(c) + k * ll if c else -math.inf for k, c in enumerate(coeffs)]


@dataclass(frozen=True)
class SizeDistribution:
    lam: float
    probs: tuple[float, ...]
    mean: float
    variance: float
    kappa3: float
    kappa4: float
    log_Z: float

    def cumulant(self, k: int) -> float:
        return (self.mean, self.variance, self.kappa3, self.kappa4)[k - 1]


def size_distribution(p: DensePolynomial | Sequence[int], lam: float) -> SizeDistribution:
    if lam <= 0:
        raise ValueError("λ must be positive")
    coeffs = p.coeffs if isinstance(p, DensePolynomial) else tuple(p)
    lw = log_weights(coeffs, lam)
    top = max(lw)
    w = [math.exp(x - top) for x in lw]
    total = math.fsum(w)
    probs = tuple(x / total for x in w)
    ks = range(len(probs))
    mean = math.fsum(k * q for k, q in zip(ks, probs))
    c2 = math.fsum((k - mean) ** 2 * q for k, q in zip(ks, probs))
    c3 = math.fsum((k - mean) ** 3 * q for k, q in zip(ks, probs))
    c4 = math.fsum((k - mean) ** 4 * q for k, q in zip(ks, probs))
    return SizeDistribution(lam, probs, mean, c2, c3, c4 - 3 * c2 * c2, top + math.log(total))


def exact_cumulants(p: DensePolynomial | Sequence[int], lam: Fraction | int) -> list[Fraction]:
    """κ_1..κ_4 as exact rationals for a rational fugacity."""
    coeffs = p.coeffs if isinstance(p, DensePolynomial) else tuple(p)
    lam = Fraction(lam)
    w = [c * lam**k for k, c in enumerate(coeffs)]
    z = sum(w)
    m = [sum(Fraction(k) ** r * x for k, x in enumerate(w)) / z for r in range(5)]
    k1 = m[1]
    k2 = m[2] - m[1] ** 2
    k3 = m[3] - 3 * m[2] * m[1] + 2 * m[1] ** 3
    k4 = m[4] - 4 * m[3] * m[1] - 3 * m[2] ** 2 + 12 * m[2] * m[1] ** 2 - 6 * m[1] ** 4
    return [k1, k2, k3, k4]


def characteristic_function(p: DensePolynomial | Sequence[int], lam: float, t: float) -> complex:
    """E[exp(itY)] = Z(λe^{it})/Z(λ) under the hard-core measure."""
    dist = size_distribution(p, lam)
    return sum(q * cmath.exp(1j * t * k) for k, q in enumerate(dist.probs))


# --- power sums and log-Taylor coefficients ---------------------------------

def power_sums(coeffs: Sequence[int], order: int) -> list[int]:
    """p_j = Σ r_i^j over inverse roots r_i of Z, j = 0..order (p_0 = degree).

    Newton's identities with e_t = (-1)^t i_t. Only i_1..i_order are read, so a
    truncated coefficient list suffices; p_0 is then only a lower bound.
    """
    c = list(coeffs) + [0] * max(0, order + 1 - len(coeffs))
    p = [len(coeffs) - 1] + [0] * order
    for j in range(1, order + 1):
        acc = -j * c[j]
        for t in range(1, j):
            if c[t]:
                acc -= c[t] * p[j - t]
        p[j] = acc
    return p


def log_taylor_from_counts(coeffs: Sequence[int], order: int) -> list[Fraction]:
    """Taylor coefficients a_1..a_order of log Z at 0 (index 0 holds a_1)."""
    p = power_sums(coeffs, order)
    return [Fraction(-p[j], j) for j in range(1, order + 1)]
