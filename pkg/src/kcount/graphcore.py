"""Graph representation, generators and greedy combinatorial helpers."""
from __future__ import annotations

import json
from collections import deque
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Invalid graph construction or infeasible generator parameters."""


class ParseError(GraphError):
    pass


class MalformedGraphError(ParseError):
    pass


class DuplicateEdgeError(ParseError):
    pass


class SelfLoopError(ParseError):
    pass


class VertexRangeError(ParseError):
    pass


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1."""

    __slots__ = ("_n", "_adj", "_max_degree", "__dict__")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise GraphError(f"vertex count must be non-negative, got {n}")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise VertexRangeError(f"edge ({u}, {v}) has a vertex outside 0..{n - 1}")
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}")
            if v in nbrs[u]:
                raise DuplicateEdgeError(f"duplicate edge ({min(u, v)}, {max(u, v)})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self._n = n
        self._adj = tuple(tuple(sorted(s)) for s in nbrs)
        self._max_degree = max((len(a) for a in self._adj), default=0)

    @property
    def n(self) -> int:
        return self._n

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return self._adj

    @property
    def max_degree(self) -> int:
        return self._max_degree

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges (u, v) with u < v in lexicographic order."""
        return tuple((u, v) for u in range(self._n) for v in self._adj[u] if u < v)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighbourhood bitmasks, bit v set in masks[u] iff uv is an edge."""
        out = []
        for a in self._adj:
            m = 0
            for w in a:
                m |= 1 << w
            out.append(m)
        return tuple(out)

    @cached_property
    def padded_neighbors(self) -> np.ndarray:
        """n x max(Δ,1) array of neighbours padded with the sentinel n."""
        width = max(self._max_degree, 1)
        arr = np.full((self._n, width), self._n, dtype=np.int64)
        for v, a in enumerate(self._adj):
            arr[v, : len(a)] = a
        return arr

    def is_independent(self, vertices: Iterable[int]) -> bool:
        s = set(vertices)
        return all(w not in s for v in s for w in self._adj[v])

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph relabelled 0..m-1 plus the old id of each new vertex."""
        verts = sorted(set(vertices))
        index = {v: i for i, v in enumerate(verts)}
        edges = [(index[u], index[w]) for u in verts for w in self._adj[u] if w in index and u < w]
        return Graph(len(verts), edges), verts

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._n == other._n and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self._n, self._adj))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.edge_count}, max_degree={self._max_degree})"


# --- thresholds -------------------------------------------------------------

def critical_fugacity(max_degree: int) -> Fraction:
    """Uniqueness threshold (Δ-1)^(Δ-1)/(Δ-2)^Δ of the infinite Δ-regular tree."""
    d = int(max_degree)
    if d < 3:
        raise ValueError(f"critical fugacity needs Δ ≥ 3, got {d}")
    return Fraction((d - 1) ** (d - 1), (d - 2) ** d)


def critical_density(max_degree: int) -> Fraction:
    lam = critical_fugacity(max_degree)
    return lam / (1 + (max_degree + 1) * lam)


def shearer_radius(max_degree: int) -> Fraction:
    """Radius (Δ-1)^(Δ-1)/Δ^Δ of the zero-free disk around the origin.

    Degrees below 2 are clamped to 2; the raw formula at Δ=1 would claim
    radius 1 while a single edge already has a root at -1/2.
    """
    d = max(int(max_degree), 2)
    return Fraction((d - 1) ** (d - 1), d**d)


# --- derived graphs ---------------------------------------------------------

def line_graph(g: Graph) -> Graph:
    """Line graph; vertex i corresponds to g.edges[i]."""
    if g.edge_count == 0:
        raise GraphError("line graph of an edgeless graph is empty")
    incident: list[list[int]] = [[] for _ in range(g.n)]
    for i, (u, v) in enumerate(g.edges):
        incident[u].append(i)
        incident[v].append(i)
    pairs = set()
    for inc in incident:
        for a, b in combinations(inc, 2):
            pairs.add((a, b))
    return Graph(g.edge_count, sorted(pairs))


def ball(g: Graph, source: int, radius: int) -> dict[int, int]:
    """Vertices within graph distance `radius` of `source`, mapped to their distance."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        if dist[v] == radius:
            continue
        for w in g.neighbors(v):
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def separated_set(g: Graph, min_distance: int = 4) -> list[int]:
    """Greedy set of vertices pairwise at distance ≥ min_distance (ascending-id order)."""
    removed = [False] * g.n
    chosen = []
    for v in range(g.n):
        if removed[v]:
            continue
        chosen.append(v)
        for w in ball(g, v, min_distance - 1):
            removed[w] = True
    return chosen


def greedy_independent_set(g: Graph, k: int) -> list[int]:
    """First k vertices picked by ascending-id greedy, deleting closed neighbourhoods."""
    if k < 0:
        raise ValueError("k must be non-negative")
    blocked = [False] * g.n
    chosen: list[int] = []
    for v in range(g.n):
        if len(chosen) == k:
            break
        if blocked[v]:
            continue
        chosen.append(v)
        blocked[v] = True
        for w in g.neighbors(v):
            blocked[w] = True
    if len(chosen) < k:
        raise GraphError(f"greedy found only {len(chosen)} independent vertices, needed {k}")
    return chosen


def is_claw_free(g: Graph) -> bool:
    """True when no vertex has three pairwise non-adjacent neighbours."""
    for v in range(g.n):
        nb = g.neighbors(v)
        if len(nb) < 3:
            continue
        for a, b, c in combinations(nb, 3):
            ma = g.masks[a]
            if not (ma >> b) & 1 and not (ma >> c) & 1 and not (g.masks[b] >> c) & 1:
                return False
    return True


def components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        comp = list(ball(g, s, g.n))
        for v in comp:
            seen[v] = True
        out.append(sorted(comp))
    return out


def independence_number_low_degree(g: Graph) -> int:
    """Exact independence number of a graph with Δ ≤ 2 (disjoint paths and cycles)."""
    if g.max_degree > 2:
        raise GraphError("only defined for maximum degree at most 2")
    total = 0
    for comp in components(g):
        size = len(comp)
        edges = sum(g.degree(v) for v in comp) // 2
        total += size // 2 if edges == size else (size + 1) // 2
    return total


def maximum_matching_size(g: Graph) -> int:
    import networkx as nx

    return len(nx.max_weight_matching(to_networkx(g), maxcardinality=True))


def to_networkx(g: Graph):
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


# --- generators -------------------------------------------------------------

def path(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs at least one vertex")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs at least three vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def empty(n: int) -> Graph:
    return Graph(n)


def star(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def grid(rows: int, cols: int) -> Graph:
    if rows < 1 or cols < 1:
        raise GraphError("grid dimensions must be positive")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, edges)


def random_regular(n: int, degree: int, seed: int | None = None, max_tries: int = 10_000) -> Graph:
    """Uniform pairing model, rejecting loops and multi-edges."""
    if degree < 0 or degree >= max(n, 1) or (n * degree) % 2:
        raise GraphError(f"no simple {degree}-regular graph on {n} vertices")
    rng = np.random.default_rng(seed)
    points = np.repeat(np.arange(n), degree)
    for _ in range(max_tries):
        perm = rng.permutation(points).reshape(-1, 2)
        if np.any(perm[:, 0] == perm[:, 1]):
            continue
        lo = np.minimum(perm[:, 0], perm[:, 1])
        hi = np.maximum(perm[:, 0], perm[:, 1])
        keys = lo * n + hi
        if len(np.unique(keys)) != len(keys):
            continue
        return Graph(n, zip(lo.tolist(), hi.tolist()))
    raise GraphError(f"pairing model failed {max_tries} times for n={n}, degree={degree}")


GENERATORS = ("path", "cycle", "grid", "random_regular", "complete", "empty")


def generate(kind: str, *, n: int | None = None, rows: int | None = None, cols: int | None = None,
             degree: int | None = None, seed: int | None = None) -> Graph:
    if kind == "path":
        return path(_need(n, "n"))
    if kind == "cycle":
        return cycle(_need(n, "n"))
    if kind == "grid":
        return grid(_need(rows, "rows"), _need(cols, "cols"))
    if kind == "random_regular":
        return random_regular(_need(n, "n"), _need(degree, "degree"), seed)
    if kind == "complete":
        return complete(_need(n, "n"))
    if kind == "empty":
        return empty(_need(n, "n"))
    raise GraphError(f"unknown graph family {kind!r}; choose from {', '.join(GENERATORS)}")


def _need(value, name):
    if value is None:
        raise GraphError(f"missing parameter {name}")
    return int(value)


# --- text formats -----------------------------------------------------------

def _ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise MalformedGraphError(f"line {lineno}: expected integers, got {line.strip()!r}") from None


def parse_edge_list(text: str) -> Graph:
    """Parse the "n m" header format followed by m lines "u v" (0-based)."""
    lines = [(i + 1, ln) for i, ln in enumerate(text.splitlines()) if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise MalformedGraphError("empty graph text")
    header = _ints(lines[0][1], lines[0][0])
    if len(header) != 2 or header[0] < 0 or header[1] < 0:
        raise MalformedGraphError("header must be two non-negative integers 'n m'")
    n, m = header
    body = lines[1:]
    if len(body) != m:
        raise MalformedGraphError(f"header declares {m} edges but {len(body)} edge lines follow")
    edges = []
    for lineno, ln in body:
        pair = _ints(ln, lineno)
        if len(pair) != 2:
            raise MalformedGraphError(f"line {lineno}: expected 'u v'")
        edges.append(pair)
    return Graph(n, edges)


def parse_json_graph(text: str) -> Graph:
    try:
        data = json.loads(text)
        n = int(data["n"])
        edges = [(int(u), int(v)) for u, v in data["edges"]]
    except (ValueError, KeyError, TypeError) as exc:
        raise MalformedGraphError(f"bad JSON graph: {exc}") from None
    return Graph(n, edges)


def parse_graph(text: str) -> Graph:
    """Accept either the edge-list or the JSON format."""
    return parse_json_graph(text) if text.lstrip().startswith("{") else parse_edge_list(text)


def serialize(g: Graph) -> str:
    lines = [f"{g.n} {g.edge_count}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def load_graph(path_: str) -> Graph:
    with open(path_, encoding="utf-8") as fh:
        return parse_graph(fh.read())
