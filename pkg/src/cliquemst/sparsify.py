"""Partition-driven edge sparsification on the round engine.

The pipeline keeps a pair (edge set, vertex partition). One amplification
step coarsens the partition, ships every edge to the node in charge of its
block (the pair of parts the endpoints fall in), keeps only a minimum
spanning forest inside each block, and routes the survivors back to their
endpoints. Discarded edges are always the heaviest edge of some cycle, so
the minimum spanning forest of the whole edge set survives every step,
while the edge count drops one square-root level per step: a pair that is
certified at part size near n^(1 - eps) comes out certified near
n^(1 - eps/2), with the total edge count near n^(1 + eps/2).

All bounds are integer-exact. ceil_pow(n, a, b) is ceil(n ** (a / b))
computed without floating point, and every size or block cap carries a
small slack factor so the same certificates cover vertex counts that are
not towers of squares.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

from .engine import CongestedClique, MessageWord, RoutingMode, RunMetrics
from .graph import Edge, Forest, Graph, edge_key, kruskal_forest, msf_oracle

MAX_EPS_EXP = 10  # exponents are 1/2**e; deeper levels cost huge bigint powers
FINALE_ROUND_CAP = 8


@lru_cache(maxsize=None)
def ceil_pow(n: int, num: int, den: int) -> int:
    """Smallest x >= 1 with x**den >= n**num, i.e. ceil(n ** (num / den))."""
    if n < 1 or num < 0 or den < 1:
        raise ValueError(f"bad ceil_pow arguments: {n}, {num}, {den}")
    target = n**num
    lo, hi = 1, 1
    while hi**den < target:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**den >= target:
            hi = mid
        else:
            lo = mid + 1
    return lo


def slack_for(n: int) -> int:
    """Certificate slack factor.

    Repeated coarsening halves the exponent with a ceiling at every level,
    which for most n overshoots the one-shot bound ceil(n ** (1 - eps)) by
    a small factor. Slack 1 suffices exactly when n is 1 or of the form
    2**(2**m) (2, 4, 16, 256, ...), where every level divides evenly;
    everywhere else the caps get a factor 2.
    """
    if n < 1:
        raise ValueError(f"vertex count out of range: {n}")
    if n == 1:
        return 1
    if n & (n - 1):
        return 2
    e = n.bit_length() - 1
    return 1 if e & (e - 1) == 0 else 2


@dataclass(frozen=True)
class PartitionScheme:
    """Ordered partition of 0..n-1 into contiguous parts.

    starts[i] is the first vertex of part i+1 (parts are 1-based in all
    labels). eps_exp records how many coarsening levels produced it; the
    nominal exponent is eps = 1 / 2**eps_exp.
    """

    n: int
    eps_exp: int
    starts: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"vertex count out of range: {self.n}")
        if not 0 <= self.eps_exp <= MAX_EPS_EXP:
            raise ValueError(f"eps exponent out of range: {self.eps_exp}")
        if not self.starts or self.starts[0] != 0:
            raise ValueError("parts must start at vertex 0")
        for a, b in zip(self.starts, self.starts[1:]):
            if b <= a:
                raise ValueError("part starts must increase")
        if self.starts[-1] >= self.n:
            raise ValueError("part start beyond the last vertex")

    @property
    def ell(self) -> int:
        return len(self.starts)

    @property
    def sizes(self) -> tuple[int, ...]:
        ends = self.starts[1:] + (self.n,)
        return tuple(b - a for a, b in zip(self.starts, ends))

    @property
    def ell_bound(self) -> int:
        """Nominal part-count cap ceil(n ** eps)."""
        return ceil_pow(self.n, 1, 2**self.eps_exp)

    @property
    def size_bound(self) -> int:
        """Nominal per-part size cap ceil(n ** (1 - eps)), before slack."""
        return ceil_pow(self.n, 2**self.eps_exp - 1, 2**self.eps_exp)

    @property
    def block_bound(self) -> int:
        """Nominal per-block edge cap, before slack."""
        return 2 * self.size_bound

    def part_of(self, v: int) -> int:
        """1-based part index of vertex v."""
        if not 0 <= v < self.n:
            raise ValueError(f"vertex out of range: {v}")
        return bisect_right(self.starts, v)

    def block_of(self, e: Edge) -> tuple[int, int]:
        """Block (i, j), i <= j, holding edge e.

        Parts cover contiguous ranges in vertex order, so the canonical
        endpoint order already gives part_of(u) <= part_of(v).
        """
        return (self.part_of(e.u), self.part_of(e.v))


def initial_partition(n: int) -> PartitionScheme:
    """The singleton partition; every pair is trivially sparse for it."""
    return PartitionScheme(n, 0, tuple(range(n)))


def coarsen(scheme: PartitionScheme) -> PartitionScheme:
    """Merge runs of consecutive parts, halving the exponent.

    The new part count is the nominal cap for the next level (never more
    parts than before); old parts are grouped evenly, so no group takes
    more than ceil(ell / ell_new) of them.
    """
    new_exp = scheme.eps_exp + 1
    if new_exp > MAX_EPS_EXP:
        raise ValueError(f"eps exponent above {MAX_EPS_EXP}")
    ell = scheme.ell
    ell_new = min(ceil_pow(scheme.n, 1, 2**new_exp), ell)
    starts = tuple(scheme.starts[(j * ell) // ell_new] for j in range(ell_new))
    return PartitionScheme(scheme.n, new_exp, starts)


def scheme_for(n: int, eps_exp: int) -> PartitionScheme:
    """The partition reached from singletons by eps_exp coarsening steps."""
    scheme = initial_partition(n)
    for _ in range(eps_exp):
        scheme = coarsen(scheme)
    return scheme


def label_index(i: int, j: int, ell: int) -> int:
    """Row-major rank of block (i, j), i <= j, among all ell*(ell+1)/2 blocks."""
    if not 1 <= i <= j <= ell:
        raise ValueError(f"bad block ({i}, {j}) for ell={ell}")
    return (i - 1) * ell - (i - 1) * (i - 2) // 2 + (j - i)


def label_node(i: int, j: int, scheme: PartitionScheme) -> int:
    """Node in charge of block (i, j).

    Ranks wrap modulo n, so when there are more blocks than nodes one node
    serves several blocks; it tells their edges apart by recomputing the
    block of each received edge.
    """
    return label_index(i, j, scheme.ell) % scheme.n


@dataclass(frozen=True)
class SparsityViolation:
    """One certificate bound that failed: kind, location, value, cap."""

    kind: str  # "parts", "part-size" or "block"
    where: tuple[int, ...]
    value: int
    bound: int


@dataclass(frozen=True)
class SparsityCert:
    """Outcome of checking one (edge set, partition) pair.

    Caps are the enforced values: size and block caps include the slack
    factor, the part-count cap does not (coarsening never exceeds it).
    total/total_cap track the headline edge-count bound; that is a
    consequence of the others, so it is reported but never a violation.
    """

    n: int
    eps_exp: int
    slack: int
    ell: int
    ell_cap: int
    size_max: int
    size_cap: int
    block_max: int
    block_cap: int
    total: int
    total_cap: int
    violations: tuple[SparsityViolation, ...]

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def total_ok(self) -> bool:
        return self.total <= self.total_cap


class CertificateError(Exception):
    """A pair failed its sparsity certificate."""

    def __init__(self, msg: str, cert: SparsityCert | None = None) -> None:
        self.cert = cert
        if cert is not None and cert.violations:
            v = cert.violations[0]
            msg = f"{msg}: {v.kind} {v.where} is {v.value}, cap {v.bound}"
        super().__init__(msg)


def sparse_edge_bound(n: int, k: int) -> int:
    """Certified edge-count cap after k steps: 2 * slack * ceil(n ** (1 + 1/2**k))."""
    return 2 * slack_for(n) * ceil_pow(n, 2**k + 1, 2**k)


def check_sparse(edges: Graph | Iterable[Edge], scheme: PartitionScheme) -> SparsityCert:
    """Certify an (edge set, partition) pair against the level's caps."""
    if isinstance(edges, Graph):
        if edges.n != scheme.n:
            raise ValueError(f"graph has n={edges.n}, scheme has n={scheme.n}")
        edges = edges.edges
    n = scheme.n
    slack = slack_for(n)
    counts: dict[tuple[int, int], int] = {}
    total = 0
    for e in edges:
        blk = scheme.block_of(e)  # validates both endpoints
        counts[blk] = counts.get(blk, 0) + 1
        total += 1

    violations: list[SparsityViolation] = []
    ell_cap = scheme.ell_bound
    if scheme.ell > ell_cap:
        violations.append(SparsityViolation("parts", (), scheme.ell, ell_cap))
    size_cap = slack * scheme.size_bound
    sizes = scheme.sizes
    for i, size in enumerate(sizes, start=1):
        if size > size_cap:
            violations.append(SparsityViolation("part-size", (i,), size, size_cap))
    block_cap = slack * scheme.block_bound
    for blk in sorted(counts):
        if counts[blk] > block_cap:
            violations.append(SparsityViolation("block", blk, counts[blk], block_cap))
    return SparsityCert(
        n=n,
        eps_exp=scheme.eps_exp,
        slack=slack,
        ell=scheme.ell,
        ell_cap=ell_cap,
        size_max=max(sizes),
        size_cap=size_cap,
        block_max=max(counts.values(), default=0),
        block_cap=block_cap,
        total=total,
        total_cap=sparse_edge_bound(n, scheme.eps_exp),
        violations=tuple(violations),
    )


@dataclass(frozen=True)
class AmplifyResult:
    """One coarsening step: surviving edges, their new partition and cert."""

    edges: tuple[Edge, ...]
    scheme: PartitionScheme
    cert: SparsityCert
    forests: Mapping[tuple[int, int], tuple[Edge, ...]]


def amplify(
    edges: Iterable[Edge],
    scheme: PartitionScheme,
    engine: CongestedClique,
    *,
    verify: bool = False,
) -> AmplifyResult:
    """Run one sparseness amplification step on the engine.

    Every edge is owned by its lower endpoint. Step 1 routes each edge to
    the node in charge of its block under the coarsened partition; step 2
    has those nodes keep a minimum spanning forest per block; step 3 routes
    the survivors back to both endpoints. The union of the block forests is
    the new edge set, certified for the coarsened partition.

    verify=True additionally replays the guarantees locally: the spanning
    forest of the input is contained in (and equal to the forest of) the
    output, and every node ends up holding exactly its incident survivors.
    """
    edges = tuple(edges)
    if engine.n != scheme.n:
        raise ValueError(f"engine has n={engine.n}, scheme has n={scheme.n}")
    cert_in = check_sparse(edges, scheme)
    if not cert_in.passed:
        raise CertificateError("input pair is not certified sparse", cert_in)
    target = coarsen(scheme)
    group = -(-scheme.ell // target.ell)

    # step 1: owners ship each edge to its block's label node
    demand = []
    loads: dict[tuple[int, int], int] = {}
    for e in edges:
        blk = target.block_of(e)
        loads[blk] = loads.get(blk, 0) + 1
        demand.append((e.u, label_node(*blk, target), MessageWord.edge(e)))
    # a coarse block unites at most group**2 old blocks, each under its cap
    assert all(c <= group * group * cert_in.block_cap for c in loads.values())
    arrived = engine.route(demand)

    # step 2: forest per block, under the global edge order
    size_cap_out = slack_for(target.n) * target.size_bound
    forests: dict[tuple[int, int], tuple[Edge, ...]] = {}
    for node in range(engine.n):
        by_block: dict[tuple[int, int], list[Edge]] = {}
        for _src, word in arrived[node]:
            by_block.setdefault(target.block_of(word.payload), []).append(word.payload)
        for blk in sorted(by_block):
            assert label_node(*blk, target) == node
            forest = kruskal_forest(by_block[blk])
            vcount = len({x for e in by_block[blk] for x in (e.u, e.v)})
            assert len(forest) <= max(vcount - 1, 0)
            assert len(forest) <= 2 * size_cap_out
            forests[blk] = forest

    # step 3: survivors return to both endpoints
    back = []
    for blk in sorted(forests):
        node = label_node(*blk, target)
        for e in forests[blk]:
            back.append((node, e.u, MessageWord.edge(e)))
            back.append((node, e.v, MessageWord.edge(e)))
    returned = engine.route(back)

    result = tuple(sorted((e for f in forests.values() for e in f), key=edge_key))
    if verify:
        for v in range(engine.n):
            got = sorted((word.payload for _src, word in returned[v]), key=edge_key)
            want = sorted((e for e in result if v in (e.u, e.v)), key=edge_key)
            assert got == want, f"node {v} reassembled the wrong survivor set"
        before = kruskal_forest(edges)
        assert set(before) <= set(result), "a spanning forest edge was dropped"
        assert kruskal_forest(result) == before, "the spanning forest changed"

    cert_out = check_sparse(result, target)
    if not cert_out.passed:
        raise CertificateError("amplification missed its sparsity target", cert_out)
    return AmplifyResult(edges=result, scheme=target, cert=cert_out, forests=forests)


@dataclass(frozen=True)
class IterationStats:
    index: int
    eps_exp: int
    edges_before: int
    edges_after: int
    rounds_charged: int
    rounds_explicit: int | None
    cert: SparsityCert


@dataclass(frozen=True)
class SparsifyResult:
    """k amplification steps: final edges, partition, cert and round costs."""

    n: int
    k: int
    edges: tuple[Edge, ...]
    scheme: PartitionScheme
    cert: SparsityCert
    edge_bound: int
    iterations: tuple[IterationStats, ...]
    metrics: RunMetrics


def _sparsify_on(
    engine: CongestedClique, g: Graph, k: int, verify: bool
) -> SparsifyResult:
    edges = tuple(sorted(g.edges, key=edge_key))
    scheme = initial_partition(g.n)
    cert = check_sparse(edges, scheme)
    stats: list[IterationStats] = []
    for i in range(1, k + 1):
        before = engine.metrics
        step = amplify(edges, scheme, engine, verify=verify)
        after = engine.metrics
        if before.rounds_explicit is None or after.rounds_explicit is None:
            explicit = None
        else:
            explicit = after.rounds_explicit - before.rounds_explicit
        stats.append(
            IterationStats(
                index=i,
                eps_exp=step.scheme.eps_exp,
                edges_before=len(edges),
                edges_after=len(step.edges),
                rounds_charged=after.rounds_charged - before.rounds_charged,
                rounds_explicit=explicit,
                cert=step.cert,
            )
        )
        edges, scheme, cert = step.edges, step.scheme, step.cert
    assert cert.total_ok
    return SparsifyResult(
        n=g.n,
        k=k,
        edges=edges,
        scheme=scheme,
        cert=cert,
        edge_bound=sparse_edge_bound(g.n, k),
        iterations=tuple(stats),
        metrics=engine.metrics,
    )


def sparsify(
    g: Graph,
    k: int,
    *,
    mode: RoutingMode = RoutingMode.CHARGED,
    verify: bool = False,
) -> SparsifyResult:
    """Sparsify g with k amplification steps on a fresh engine."""
    if not 0 <= k <= MAX_EPS_EXP:
        raise ValueError(f"k must be between 0 and {MAX_EPS_EXP}")
    engine = CongestedClique(g.n, mode)
    engine.set_phase("sparsify")
    return _sparsify_on(engine, g, k, verify)


def mst_iteration_count(n: int) -> int:
    """Steps until the partition collapses: smallest k with 2**(2**k) >= n."""
    if n < 1:
        raise ValueError(f"vertex count out of range: {n}")
    k = 0
    while 2 ** (2**k) < n:
        k += 1
    return k


@dataclass(frozen=True)
class MstResult:
    forest: Forest
    k: int
    sparsify: SparsifyResult
    metrics: RunMetrics


def mst(
    g: Graph,
    *,
    mode: RoutingMode = RoutingMode.CHARGED,
    verify: bool = False,
) -> MstResult:
    """Minimum spanning forest of g, computed over the engine.

    First sparsify with just enough steps for the certified edge count to
    reach O(n), then let every node learn the surviving edges (count
    dissemination, an exact rebalancing route, full dissemination) and
    finish locally. The learning phase fits in 8 charged rounds.
    """
    k = mst_iteration_count(g.n)
    engine = CongestedClique(g.n, mode)
    engine.set_phase("sparsify")
    inner = _sparsify_on(engine, g, k, verify)

    engine.set_phase("learn")
    n = g.n
    owned: dict[int, list[Edge]] = {v: [] for v in range(n)}
    for e in inner.edges:  # already in edge_key order
        owned[e.u].append(e)
    shared_counts = engine.broadcast_all(
        {v: [MessageWord.count(len(owned[v]))] for v in range(n)}
    )
    counts = [0] * n
    for src, word in shared_counts:
        counts[src] = word.payload
    prefix = [0] * n
    running = 0
    for v in range(n):
        prefix[v] = running
        running += counts[v]
    # owner v parks its j-th edge at node (prefix[v]+j) mod n, so every node
    # ends up holding at most ceil(|edges|/n) of them
    rebalanced = engine.route(
        (v, (prefix[v] + j) % n, MessageWord.edge(e))
        for v in range(n)
        for j, e in enumerate(owned[v])
    )
    shared_edges = engine.broadcast_all(
        {
            v: [word for _src, word in rebalanced[v]]
            for v in range(n)
            if rebalanced[v]
        }
    )
    learned = tuple(sorted((word.payload for _src, word in shared_edges), key=edge_key))
    assert learned == inner.edges, "every node must learn the sparsified edge set"
    forest = Forest(kruskal_forest(learned))
    if verify:
        assert forest == msf_oracle(g)
    return MstResult(forest=forest, k=k, sparsify=inner, metrics=engine.metrics)
