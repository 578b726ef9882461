"""Crawling-strategy simulators over a known host graph.

Two strategies: breadth-first search truncated by a node budget (the
reproducible stand-in for a wall-clock crawl limit) and uniform
rejection sampling over a synthetic ID space. Both return the subgraph a
crawler would actually observe: every visited node, all of its neighbors,
and every edge incident to a visited node. Edges between two unvisited
nodes are invisible to a crawler and are excluded.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .errors import InconsistencyError, NotFoundError
from .graph import Graph, anonymize, build_graph, connected_components


@dataclass
class BfsSampleSpec:
    seed_node: int
    node_budget: int
    rng_seed: int = 0

    def validate(self):
        if self.node_budget < 1:
            raise ValueError("node_budget must be >= 1")


@dataclass
class UniformSampleSpec:
    """Rejection sampling: draw IDs uniformly, keep the ones that exist.

    ``occupancy`` declares which IDs exist: a collection, a predicate, or
    None for the host's node set. ``unlistable_fraction`` marks that share
    of existing IDs as private profiles: they count as accepted draws but
    contribute no friend list (they never become visited nodes).
    """

    id_space_size: int
    draw_count: int
    rng_seed: int = 0
    occupancy: object = None
    unlistable_fraction: float = 0.0
    record_draws: bool = False

    def validate(self):
        if self.id_space_size < 1:
            raise ValueError("id_space_size must be >= 1")
        if self.draw_count < 0:
            raise ValueError("draw_count must be >= 0")
        if not 0.0 <= self.unlistable_fraction <= 1.0:
            raise ValueError("unlistable_fraction must be in [0, 1]")


@dataclass
class SampleResult:
    """A crawled subgraph plus crawl bookkeeping.

    ``visited`` lists the nodes whose neighborhoods were retrieved, in
    visit order; every other node of ``graph`` is a discovered neighbor.
    """

    graph: Graph
    visited: list
    method: str
    meta: dict = field(default_factory=dict)

    @property
    def discovered(self) -> list:
        vs = set(self.visited)
        return [n for n in self.graph.nodes if n not in vs]


def _observed_subgraph(host: Graph, visited) -> Graph:
    visited_set = set(visited)
    nodes = set(visited)
    edges = {}
    for u in visited_set:
        for w in host.neighbors(u):
            nodes.add(w)
            key = (u, w) if u < w else (w, u)
            if key not in edges:
                edges[key] = host._weights.get(key, 1)
    g, _ = build_graph(
        [(u, v, w) for (u, v), w in edges.items()], nodes=sorted(nodes)
    )
    return g


def sample_bfs(host: Graph, spec: BfsSampleSpec) -> SampleResult:
    """Breadth-first crawl from a seed node until the budget is spent.

    Nodes are visited in FIFO breadth order; the RNG only shuffles the
    enqueue order within each visited node's neighbor list (crawl order
    within a friend list is not meaningful). The sample is connected by
    construction and contains the seed.
    """
    spec.validate()
    if spec.seed_node not in host:
        raise NotFoundError(f"seed node {spec.seed_node} not in host graph")
    rng = random.Random(spec.rng_seed)

    visited = []
    seen = {spec.seed_node}
    queue = deque([spec.seed_node])
    while queue and len(visited) < spec.node_budget:
        u = queue.popleft()
        visited.append(u)
        neighbors = list(host.neighbors(u))
        rng.shuffle(neighbors)
        for w in neighbors:
            if w not in seen:
                seen.add(w)
                queue.append(w)

    graph = _observed_subgraph(host, visited)
    return SampleResult(
        graph=graph,
        visited=visited,
        method="bfs",
        meta={
            "seed_node": spec.seed_node,
            "node_budget": spec.node_budget,
            "rng_seed": spec.rng_seed,
            "frontier_left": len(queue),
        },
    )


def sample_uniform(host: Graph, spec: UniformSampleSpec) -> SampleResult:
    """Uniform rejection sampling over the ID space.

    Draws ``draw_count`` IDs uniformly from [0, id_space_size); a draw is
    accepted when the ID exists per the occupancy. The long-run acceptance
    rate is (existing IDs) / id_space_size. Accepted-but-unlistable IDs
    (private profiles) are tallied but yield no neighborhoods.
    """
    spec.validate()
    exists = _occupancy_predicate(spec.occupancy, host)
    rng = random.Random(spec.rng_seed)
    unlist_key = spec.rng_seed ^ 0xA5A5A5A5
    f = spec.unlistable_fraction

    accepted = 0
    unlistable_hits = 0
    visited_order = []
    visited_set = set()
    accepted_ids = [] if spec.record_draws else None
    for _ in range(spec.draw_count):
        cand = rng.randrange(spec.id_space_size)
        if not exists(cand):
            continue
        accepted += 1
        if accepted_ids is not None:
            accepted_ids.append(cand)
        if f > 0.0 and _is_unlistable(cand, unlist_key, f):
            unlistable_hits += 1
            continue
        if cand not in visited_set and cand in host:
            visited_set.add(cand)
            visited_order.append(cand)

    graph = _observed_subgraph(host, visited_order)
    meta = {
        "id_space_size": spec.id_space_size,
        "draw_count": spec.draw_count,
        "rng_seed": spec.rng_seed,
        "accepted_draws": accepted,
        "acceptance_rate": (accepted / spec.draw_count) if spec.draw_count else 0.0,
        "unlistable_hits": unlistable_hits,
        "unique_visited": len(visited_order),
    }
    if accepted_ids is not None:
        meta["accepted_ids"] = accepted_ids
    return SampleResult(graph=graph, visited=visited_order, method="uniform", meta=meta)


def _occupancy_predicate(occupancy, host: Graph):
    if occupancy is None:
        existing = host.node_set
        return lambda i: i in existing
    if callable(occupancy):
        return occupancy
    existing = frozenset(occupancy)
    return lambda i: i in existing


def _is_unlistable(node_id: int, key: int, fraction: float) -> bool:
    # Deterministic keyed-hash marking; works without enumerating the
    # occupancy (which may be a predicate over a huge ID space).
    return anonymize(node_id, key) < fraction * (1 << 48)


def sample_summary(sample, host: Graph) -> dict:
    """Crawl summary: visited/discovered counts, edges, largest-component
    fraction, mean degrees, and density.

    Accepts a :class:`SampleResult` or a bare Graph (then treated as fully
    visited). The sample's nodes must all exist in the host.
    """
    if isinstance(sample, SampleResult):
        g = sample.graph
        visited = list(sample.visited)
        meta = dict(sample.meta)
        method = sample.method
    else:
        g = sample
        visited = list(g.nodes)
        meta = {}
        method = None

    if not g.node_set <= host.node_set:
        raise InconsistencyError("sample contains nodes missing from the host")

    n = g.num_nodes
    comps = connected_components(g)
    lcc = max((len(c) for c in comps), default=0)
    mean_visited = (
        sum(g.degree(v) for v in visited) / len(visited) if visited else 0.0
    )
    summary = {
        "method": method,
        "visited": len(visited),
        "discovered": n - len(visited),
        "nodes": n,
        "edges": g.num_edges,
        "lcc_fraction": (lcc / n) if n else 0.0,
        "mean_degree_visited": mean_visited,
        "mean_degree": g.mean_degree(),
        "density": g.density(),
        "host_nodes": host.num_nodes,
        "host_mean_degree": host.mean_degree(),
    }
    for key in ("acceptance_rate", "accepted_draws", "unlistable_hits",
                "node_budget", "frontier_left"):
        if key in meta:
            summary[key] = meta[key]
    return summary
