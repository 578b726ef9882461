"""Mesoscopic statistics of graphs, partitions, and meta-networks.

Distributions (community size, degree, weights, strengths, shortest
paths), clustering coefficients, hop plots with effective diameter,
edge-density maps over community-size bins, per-size link fractions, and
resolution-limit outlier counts. Power-law fitting lives in
:mod:`mesograph.powerlaw` and is re-exported here.
"""

from __future__ import annotations

import math
import random
from collections import Counter, deque
from dataclasses import dataclass, field

import numpy as np

from .compare import SizeDistribution
from .errors import UndefinedInputError
from .graph import CommunityStructure, Graph, connected_components
from .metanet import MetaNetwork, strength
from .powerlaw import (  # noqa: F401  (re-exported module surface)
    DiscretePowerLawSampler,
    PowerLawFit,
    fit_power_law,
    sample_discrete_power_law,
)

OUTLIER_THRESHOLDS = (1_000, 5_000, 10_000, 50_000, 100_000)


# -- plain distributions -----------------------------------------------------


def size_distribution(cs: CommunityStructure) -> SizeDistribution:
    """Empirical pmf of community sizes."""
    if len(cs) == 0:
        raise UndefinedInputError("structure has no communities")
    return SizeDistribution.from_samples(len(ms) for _, ms in cs.communities)


def degree_distribution(g: Graph) -> SizeDistribution:
    """Empirical pmf of node degrees (degree 0 included)."""
    if g.num_nodes == 0:
        raise UndefinedInputError("graph has no nodes")
    return SizeDistribution.from_samples(g.degree(v) for v in g.nodes)


def weight_strength_distributions(
    mn: MetaNetwork,
) -> tuple[SizeDistribution, SizeDistribution]:
    """Pmfs of meta-edge weights and of node strengths."""
    if mn.graph.num_nodes == 0:
        raise UndefinedInputError("meta-network has no nodes")
    if not mn.weights:
        raise UndefinedInputError("meta-network has no edges")
    weight_pmf = SizeDistribution.from_samples(mn.weights.values())
    strength_pmf = SizeDistribution.from_samples(
        strength(mn, u) for u in mn.graph.nodes
    )
    return weight_pmf, strength_pmf


# -- clustering --------------------------------------------------------------


@dataclass
class ClusteringReport:
    """Per-node clustering coefficients over nodes of degree >= 2."""

    per_node: dict
    average: float
    eligible_count: int
    histogram: list  # (bin center, fraction of eligible nodes)


def clustering(g: Graph, histogram_bins: int = 20) -> ClusteringReport:
    """Exact local clustering via triangle counting.

    Nodes of degree below 2 have no defined coefficient and are excluded
    from the report entirely.
    """
    if g.num_nodes == 0:
        raise UndefinedInputError("graph has no nodes")
    neighbor_sets = {v: set(g.neighbors(v)) for v in g.nodes}
    per_node = {}
    for v in g.nodes:
        ns = neighbor_sets[v]
        k = len(ns)
        if k < 2:
            continue
        links = sum(len(ns & neighbor_sets[w]) for w in ns) // 2
        per_node[v] = 2.0 * links / (k * (k - 1))

    values = list(per_node.values())
    average = sum(values) / len(values) if values else 0.0
    histogram = []
    if values:
        counts, edges = np.histogram(values, bins=histogram_bins, range=(0.0, 1.0))
        centers = (edges[:-1] + edges[1:]) / 2.0
        histogram = [
            (float(c), float(n) / len(values)) for c, n in zip(centers, counts)
        ]
    return ClusteringReport(per_node, average, len(values), histogram)


# -- distances ----------------------------------------------------------------


@dataclass
class HopPlot:
    """Reachability-within-h counts and the derived cdf.

    ``hop_counts[h]`` is the number of ordered source/target pairs at
    distance <= h among the censused pairs; ``cdf[h]`` normalizes by the
    connected-pair total, so it reaches 1 at the largest finite distance.
    The effective diameter is the interpolated 90th percentile of the
    distance distribution, floored at the smallest observed distance, and
    never exceeds the exact diameter.
    """

    hop_counts: dict
    cdf: dict
    effective_diameter: float | None
    exact_diameter: int | None
    connected: bool
    unreachable_fraction: float
    sampled: bool
    sources_used: int
    component_sizes: list = field(default_factory=list)


def _distance_census(g: Graph, sources) -> tuple[Counter, int]:
    """BFS from each source; returns (distance -> ordered-pair count,
    number of (source, node) pairs with no path)."""
    counts: Counter = Counter()
    unreachable = 0
    n = g.num_nodes
    for src in sources:
        dist = {src: 0}
        queue = deque([src])
        reached = 1
        while queue:
            u = queue.popleft()
            du = dist[u]
            for v in g.neighbors(u):
                if v not in dist:
                    dist[v] = du + 1
                    counts[du + 1] += 1
                    reached += 1
                    queue.append(v)
        unreachable += n - reached
    return counts, unreachable


def _census_for(g: Graph, exact_threshold, sample_sources, rng_seed):
    nodes = g.nodes
    if len(nodes) <= exact_threshold or sample_sources >= len(nodes):
        return _distance_census(g, nodes) + (False, len(nodes))
    rng = random.Random(rng_seed)
    sources = rng.sample(nodes, sample_sources)
    counts, unreachable = _distance_census(g, sources)
    return counts, unreachable, True, sample_sources


def hop_plot(
    g: Graph,
    exact_threshold: int = 500,
    sample_sources: int = 64,
    rng_seed: int = 0,
) -> HopPlot:
    """Distance distribution as cumulative counts plus effective diameter.

    Graphs at or below ``exact_threshold`` nodes get an exact all-pairs
    census; larger graphs are estimated from ``sample_sources`` random BFS
    sources and flagged as sampled. Disconnected graphs report per-component
    sizes and the unreachable ordered-pair fraction.
    """
    if g.num_nodes == 0:
        raise UndefinedInputError("graph has no nodes")
    counts, unreachable, sampled, n_sources = _census_for(
        g, exact_threshold, sample_sources, rng_seed
    )
    comps = sorted((len(c) for c in connected_components(g)), reverse=True)

    total_pairs = sum(counts.values()) + unreachable
    reachable_pairs = sum(counts.values())
    hop_counts: dict = {}
    cdf: dict = {}
    cum = 0
    for h in sorted(counts):
        cum += counts[h]
        hop_counts[h] = cum
        cdf[h] = cum / reachable_pairs

    if reachable_pairs == 0:
        return HopPlot(
            hop_counts={}, cdf={},
            effective_diameter=None, exact_diameter=None,
            connected=len(comps) == 1,
            unreachable_fraction=1.0 if total_pairs else 0.0,
            sampled=sampled, sources_used=n_sources,
            component_sizes=comps,
        )

    exact_diameter = max(counts)
    eff = _effective_diameter(cdf)
    return HopPlot(
        hop_counts=hop_counts,
        cdf=cdf,
        effective_diameter=eff,
        exact_diameter=exact_diameter,
        connected=len(comps) == 1,
        unreachable_fraction=(unreachable / total_pairs) if total_pairs else 0.0,
        sampled=sampled,
        sources_used=n_sources,
        component_sizes=comps,
    )


def _effective_diameter(cdf: dict, quantile: float = 0.9) -> float:
    hs = sorted(cdf)
    prev_h, prev_f = None, 0.0
    for h in hs:
        f = cdf[h]
        if f >= quantile:
            if prev_h is None:
                # 90% of pairs sit at the smallest observed distance
                # already; the percentile cannot lie below that atom.
                return float(h)
            return prev_h + (quantile - prev_f) / (f - prev_f) * (h - prev_h)
        prev_h, prev_f = h, f
    return float(hs[-1])  # pragma: no cover - cdf always reaches 1


def shortest_path_distribution(
    g: Graph,
    exact_threshold: int = 500,
    sample_sources: int = 64,
    rng_seed: int = 0,
) -> SizeDistribution:
    """Pmf of pairwise distances over connected ordered pairs; same exact
    versus sampled switching as :func:`hop_plot`."""
    if g.num_nodes == 0:
        raise UndefinedInputError("graph has no nodes")
    counts, _, _, _ = _census_for(g, exact_threshold, sample_sources, rng_seed)
    if not counts:
        raise UndefinedInputError("no connected pairs to measure")
    return SizeDistribution.from_counts(dict(counts))


# -- community-aware statistics ----------------------------------------------


@dataclass
class DensityMap:
    """Symmetric probability mass of inter-community edges over
    community-size bins (base-2 log bins)."""

    grid: np.ndarray
    bins: list  # (low, high) inclusive size ranges
    inter_edge_count: int
    empty: bool


def _size_bin(size: int) -> int:
    return int(math.log2(size))


def edge_density_map(g: Graph, cs: CommunityStructure) -> DensityMap:
    """Classify every inter-community edge by its endpoint community sizes.

    Each edge increments the (source bin, target bin) cell and its
    transpose, then the grid is normalized to total mass 1; it is exactly
    symmetric by construction. No inter-community edges yields an empty
    map flagged as such.
    """
    cs.check_partition_of(g)
    community_of = {}
    size_of = {}
    for cid, members in cs.communities:
        size_of[cid] = len(members)
        for n in members:
            community_of[n] = cid

    pairs = []
    max_bin = 0
    for u, v in g.edges():
        cu, cv = community_of[u], community_of[v]
        if cu == cv:
            continue
        bu, bv = _size_bin(size_of[cu]), _size_bin(size_of[cv])
        max_bin = max(max_bin, bu, bv)
        pairs.append((bu, bv))

    if not pairs:
        return DensityMap(np.zeros((0, 0)), [], 0, empty=True)

    grid = np.zeros((max_bin + 1, max_bin + 1))
    for bu, bv in pairs:
        grid[bu, bv] += 1
        grid[bv, bu] += 1
    grid /= grid.sum()
    bins = [(2**b, 2 ** (b + 1) - 1) for b in range(max_bin + 1)]
    bins[0] = (1, 1)  # size 1 is its own bin below the power-of-two ladder
    return DensityMap(grid, bins, len(pairs), empty=False)


def link_fraction(
    g: Graph, cs: CommunityStructure, mode: str = "all"
) -> list:
    """Fraction of all edges touching each community, averaged by size.

    ``mode`` counts internal edges, crossing edges, or both ("all").
    Returns (community size, mean fraction) pairs sorted by size.
    """
    if mode not in ("all", "internal", "crossing"):
        raise ValueError(f"unknown mode {mode!r}")
    cs.check_partition_of(g)
    m = g.num_edges
    if m == 0:
        raise UndefinedInputError("graph has no edges")
    community_of = {
        n: cid for cid, members in cs.communities for n in members
    }
    internal: Counter = Counter()
    crossing: Counter = Counter()
    for u, v in g.edges():
        cu, cv = community_of[u], community_of[v]
        if cu == cv:
            internal[cu] += 1
        else:
            crossing[cu] += 1
            crossing[cv] += 1

    by_size: dict = {}
    for cid, members in cs.communities:
        if mode == "all":
            count = internal[cid] + crossing[cid]
        elif mode == "internal":
            count = internal[cid]
        else:
            count = crossing[cid]
        by_size.setdefault(len(members), []).append(count / m)
    return [
        (size, sum(fr) / len(fr)) for size, fr in sorted(by_size.items())
    ]


# -- resolution-limit outliers -------------------------------------------------


@dataclass
class OutlierReport:
    resolution_threshold: float
    counts_by_threshold: dict
    above_resolution: int
    edge_count: int

    def record(self) -> dict:
        return {
            "edge_count": self.edge_count,
            "resolution_threshold": self.resolution_threshold,
            "above_resolution": self.above_resolution,
            "counts_by_threshold": {
                str(t): c for t, c in self.counts_by_threshold.items()
            },
        }


def detect_outliers(
    cs: CommunityStructure, g: Graph | None = None, edge_count: int | None = None
) -> OutlierReport:
    """Count communities larger than each fixed threshold and larger than
    the modularity resolution threshold sqrt(E/2).

    ``edge_count`` bypasses the graph for count-only use (e.g. evaluating
    the threshold arithmetic of a network too large to materialize).
    """
    if edge_count is None:
        if g is None:
            raise ValueError("need a graph or an explicit edge_count")
        edge_count = g.num_edges
    threshold = math.sqrt(edge_count / 2.0)
    sizes = cs.sizes()
    return OutlierReport(
        resolution_threshold=threshold,
        counts_by_threshold={
            t: sum(1 for s in sizes if s > t) for t in OUTLIER_THRESHOLDS
        },
        above_resolution=sum(1 for s in sizes if s > threshold),
        edge_count=edge_count,
    )
