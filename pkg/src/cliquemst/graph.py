"""Weighted undirected graphs with a deterministic minimum spanning forest.

Weights are unsigned integers and may repeat; uniqueness of the spanning
forest comes from ordering edges by the full key (weight, endpoints), so
every routine in this package that says "minimum" means minimum under that
one strict total order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from heapq import heappop, heappush
from math import isqrt
from typing import Iterable, NamedTuple

MAX_VERTEX = 2**32  # ids must fit the 32-bit lanes of a message word
MAX_WEIGHT = 2**64
GEN_WEIGHT_RANGE = 2**32

GRAPH_MODELS = ("complete", "gnp", "gnm", "path", "forest")


class Edge(NamedTuple):
    """Canonical undirected edge: u < v, unsigned weight w."""

    u: int
    v: int
    w: int


def edge(u: int, v: int, w: int) -> Edge:
    """Build a canonical edge, swapping endpoints so that u < v."""
    if u == v:
        raise ValueError(f"self-loop at vertex {u}")
    if u > v:
        u, v = v, u
    if u < 0 or v >= MAX_VERTEX:
        raise ValueError(f"endpoint out of range: ({u}, {v})")
    if not 0 <= w < MAX_WEIGHT:
        raise ValueError(f"weight out of range: {w}")
    return Edge(u, v, w)


def edge_key(e: Edge) -> tuple[int, int, int]:
    """Strict total order on edges: weight first, then endpoints."""
    return (e.w, e.u, e.v)


@dataclass(frozen=True)
class Graph:
    """Vertex count plus a tuple of canonical, pairwise distinct edges."""

    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_VERTEX:
            raise ValueError(f"vertex count out of range: {self.n}")
        seen: set[tuple[int, int]] = set()
        for e in self.edges:
            if not 0 <= e.u < e.v < self.n:
                raise ValueError(f"edge {e} out of range for n={self.n}")
            if not 0 <= e.w < MAX_WEIGHT:
                raise ValueError(f"weight out of range: {e.w}")
            if (e.u, e.v) in seen:
                raise ValueError(f"duplicate edge ({e.u}, {e.v})")
            seen.add((e.u, e.v))


@dataclass(frozen=True)
class Forest:
    """An acyclic edge set, kept sorted by edge_key."""

    edges: tuple[Edge, ...]


class DisjointSets:
    """Union-find over 0..n-1 with path halving and union by size."""

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def kruskal_forest(edges: Iterable[Edge]) -> tuple[Edge, ...]:
    """Kruskal's scan in edge_key order.

    Works on a bare edge list (no vertex count needed), which is what the
    per-block reductions want. The result comes back sorted by edge_key.
    """
    parent: dict[int, int] = {}
    size: dict[int, int] = {}

    def find(x: int) -> int:
        root = parent.setdefault(x, x)
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    kept: list[Edge] = []
    for e in sorted(edges, key=edge_key):
        ra, rb = find(e.u), find(e.v)
        if ra == rb:
            continue
        if size.get(ra, 1) < size.get(rb, 1):
            ra, rb = rb, ra
        parent[rb] = ra
        size[ra] = size.get(ra, 1) + size.get(rb, 1)
        kept.append(e)
    return tuple(kept)


def msf_oracle(g: Graph) -> Forest:
    """The minimum spanning forest of g under edge_key order."""
    return Forest(kruskal_forest(g.edges))


def prim_msf(g: Graph) -> Forest:
    """Prim's algorithm with the same edge_key order.

    Kept independent of the union-find machinery on purpose: it is the
    cross-check for msf_oracle, so it shares nothing with it beyond the
    edge ordering.
    """
    adj: list[list[tuple[tuple[int, int, int], Edge, int]]] = [[] for _ in range(g.n)]
    for e in g.edges:
        key = edge_key(e)
        adj[e.u].append((key, e, e.v))
        adj[e.v].append((key, e, e.u))
    visited = [False] * g.n
    kept: list[Edge] = []
    heap: list[tuple[tuple[int, int, int], Edge, int]] = []
    for root in range(g.n):
        if visited[root]:
            continue
        visited[root] = True
        for item in adj[root]:
            heappush(heap, item)
        while heap:
            _, e, to = heappop(heap)
            if visited[to]:
                continue
            visited[to] = True
            kept.append(e)
            for item in adj[to]:
                if not visited[item[2]]:
                    heappush(heap, item)
    return Forest(tuple(sorted(kept, key=edge_key)))


def components(g: Graph) -> list[int]:
    """Map each vertex to a component id in [0, c), numbered by first occurrence."""
    dsu = DisjointSets(g.n)
    for e in g.edges:
        dsu.union(e.u, e.v)
    ids: dict[int, int] = {}
    return [ids.setdefault(dsu.find(v), len(ids)) for v in range(g.n)]


def _pair_unrank(x: int, n: int) -> tuple[int, int]:
    # inverse of the lexicographic index of pairs (i, j), i < j
    i = (2 * n - 1 - isqrt((2 * n - 1) ** 2 - 8 * x)) // 2
    while i * n - i * (i + 1) // 2 > x:
        i -= 1
    while (i + 1) * n - (i + 1) * (i + 2) // 2 <= x:
        i += 1
    j = x - (i * n - i * (i + 1) // 2) + i + 1
    return i, j


def gen_graph(
    n: int,
    model: str,
    seed: int = 0,
    *,
    p: float | None = None,
    m: int | None = None,
    t: int | None = None,
) -> Graph:
    """Deterministic random graph for a (n, model, seed) triple.

    Models:
        complete        every pair
        gnp             each pair independently with probability p
        gnm             exactly m distinct pairs
        path            0-1-2-...-(n-1)
        forest          random forest with exactly t trees (default 1)

    Weights are drawn uniformly from [0, 2**32), so repeated weights do
    occur at realistic sizes and the tie-break order matters.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if model not in GRAPH_MODELS:
        raise ValueError(f"unknown model {model!r}")
    rng = random.Random(f"{model}:{n}:{seed}")
    edges: list[Edge] = []
    if model == "complete":
        for u in range(n):
            for v in range(u + 1, n):
                edges.append(Edge(u, v, rng.randrange(GEN_WEIGHT_RANGE)))
    elif model == "gnp":
        if p is None or not 0.0 <= p <= 1.0:
            raise ValueError("gnp needs p in [0, 1]")
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < p:
                    edges.append(Edge(u, v, rng.randrange(GEN_WEIGHT_RANGE)))
    elif model == "gnm":
        total = n * (n - 1) // 2
        if m is None or not 0 <= m <= total:
            raise ValueError(f"gnm needs m in [0, {total}]")
        for x in rng.sample(range(total), m):
            u, v = _pair_unrank(x, n)
            edges.append(Edge(u, v, rng.randrange(GEN_WEIGHT_RANGE)))
    elif model == "path":
        for u in range(n - 1):
            edges.append(Edge(u, u + 1, rng.randrange(GEN_WEIGHT_RANGE)))
    else:  # forest
        if t is None:
            t = 1
        if not 1 <= t <= n:
            raise ValueError("forest needs 1 <= t <= n")
        perm = list(range(n))
        rng.shuffle(perm)
        trees = [[root] for root in perm[:t]]
        for v in perm[t:]:
            tree = trees[rng.randrange(t)]
            parent = tree[rng.randrange(len(tree))]
            edges.append(edge(v, parent, rng.randrange(GEN_WEIGHT_RANGE)))
            tree.append(v)
    return Graph(n, tuple(edges))


class GraphFormatError(ValueError):
    """Malformed edge-list file; carries the offending line number if known."""

    def __init__(self, msg: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(msg if line is None else f"line {line}: {msg}")


def _parse_ints(parts: list[str], lineno: int) -> list[int]:
    try:
        return [int(s) for s in parts]
    except ValueError:
        raise GraphFormatError(f"expected integers, got {' '.join(parts)!r}", lineno) from None


def read_graph(path: str) -> Graph:
    """Read the edge-list format: header "n m", then m lines "u v w".

    Lines starting with '#' and blank lines are ignored. Endpoints are
    0-based; edges are canonicalized on read. Malformed input raises
    GraphFormatError with the line number.
    """
    header: tuple[int, int] | None = None
    edges: list[Edge] = []
    seen: set[tuple[int, int]] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split()
            if header is None:
                if len(parts) != 2:
                    raise GraphFormatError("expected header 'n m'", lineno)
                n, m = _parse_ints(parts, lineno)
                if n < 1:
                    raise GraphFormatError(f"vertex count must be >= 1, got {n}", lineno)
                if m < 0:
                    raise GraphFormatError(f"edge count must be >= 0, got {m}", lineno)
                header = (n, m)
                continue
            if len(parts) != 3:
                raise GraphFormatError("expected edge 'u v w'", lineno)
            u, v, w = _parse_ints(parts, lineno)
            n, m = header
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}", lineno)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"endpoint out of range: ({u}, {v}) with n={n}", lineno)
            if not 0 <= w < MAX_WEIGHT:
                raise GraphFormatError(f"weight out of range: {w}", lineno)
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise GraphFormatError(f"duplicate edge ({u}, {v})", lineno)
            seen.add((u, v))
            if len(edges) >= m:
                raise GraphFormatError(f"more than the declared {m} edges", lineno)
            edges.append(Edge(u, v, w))
    if header is None:
        raise GraphFormatError("missing header 'n m'")
    n, m = header
    if len(edges) != m:
        raise GraphFormatError(f"declared {m} edges, found {len(edges)}")
    return Graph(n, tuple(edges))


def dump_graph(g: Graph, fh) -> None:
    """Write g to an open text stream in the format accepted by read_graph."""
    fh.write(f"{g.n} {len(g.edges)}\n")
    for e in g.edges:
        fh.write(f"{e.u} {e.v} {e.w}\n")


def write_graph(g: Graph, path: str) -> None:
    """Write g in the edge-list format accepted by read_graph."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        dump_graph(g, fh)
