"""Community meta-network construction.

The meta-network is the weighted quotient graph of a community structure:
one node per community, one edge between two communities whenever at least
one base edge crosses them, weighted by the total crossing edge weight.
Intra-community edge mass is kept on the nodes (not as self-loops) so the
meta graph stays simple.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .community import drop_singletons
from .errors import EmptyGraphError, NotFoundError
from .graph import (
    CommunityStructure,
    Graph,
    build_graph,
    connected_components,
    load_edge_list,
)

log = logging.getLogger(__name__)


@dataclass
class MetaNetwork:
    """Quotient graph over communities with crossing-weight edges.

    ``graph`` has the community IDs as nodes; ``weights`` maps each
    meta-edge (u, v) with u < v to its crossing weight. ``unassigned_weight``
    counts base edge weight incident to nodes outside every community
    (nonzero only when singleton communities were dropped).
    """

    graph: Graph
    weights: dict
    community_sizes: dict
    intra_edge_counts: dict
    dropped_singletons: int = 0
    unassigned_weight: int = 0

    def weight(self, u, v) -> int:
        key = (u, v) if u < v else (v, u)
        try:
            return self.weights[key]
        except KeyError:
            raise NotFoundError(f"meta-edge {u}-{v} not present") from None

    @property
    def total_inter_weight(self) -> int:
        return sum(self.weights.values())

    @property
    def total_intra_weight(self) -> int:
        return sum(self.intra_edge_counts.values())


def build_meta_network(
    g: Graph, cs: CommunityStructure, keep_singletons: bool = False
) -> MetaNetwork:
    """Build the community meta-network of a partitioned graph.

    Size-1 communities are dropped first (with a logged count) unless
    ``keep_singletons`` is set; the identity-partition test is the one
    caller that needs them retained. Base edges with an endpoint outside
    every retained community accumulate in ``unassigned_weight``, so
    ``total intra + total inter + unassigned`` always equals the base
    graph's total edge weight.
    """
    cs.check_partition_of(g)
    dropped = 0
    if not keep_singletons:
        cs, dropped = drop_singletons(cs)
        if dropped:
            log.info("dropped %d singleton community(ies)", dropped)

    community_of = {}
    sizes = {}
    for cid, members in cs.communities:
        sizes[cid] = len(members)
        for n in members:
            community_of[n] = cid

    weights: dict = {}
    intra = {cid: 0 for cid in sizes}
    unassigned = 0
    for u, v, w in g.edges(data=True):
        cu = community_of.get(u)
        cv = community_of.get(v)
        if cu is None or cv is None:
            unassigned += w
        elif cu == cv:
            intra[cu] += w
        else:
            key = (cu, cv) if cu < cv else (cv, cu)
            weights[key] = weights.get(key, 0) + w

    meta_edges = [(u, v, w) for (u, v), w in sorted(weights.items())]
    meta_graph, _ = build_graph(meta_edges, nodes=sorted(sizes))
    return MetaNetwork(
        graph=meta_graph,
        weights=weights,
        community_sizes=sizes,
        intra_edge_counts=intra,
        dropped_singletons=dropped,
        unassigned_weight=unassigned,
    )


def strength(mn: MetaNetwork, u) -> int:
    """Weighted degree of a meta-node: the sum of incident edge weights."""
    if u not in mn.graph:
        raise NotFoundError(f"community {u} not in meta-network")
    return sum(mn.weight(u, v) for v in mn.graph.neighbors(u))


def export_meta_network(mn: MetaNetwork, edge_path, node_path=None) -> str:
    """Write ``u<TAB>v<TAB>w`` edges plus an ``id<TAB>size`` node table.

    The edge file is loadable by :func:`load_edge_list`. Returns the node
    table path (``<edge_path>.nodes`` unless given).
    """
    node_path = str(node_path or f"{edge_path}.nodes")
    with open(edge_path, "w") as fh:
        for (u, v), w in sorted(mn.weights.items()):
            fh.write(f"{u}\t{v}\t{w}\n")
    with open(node_path, "w") as fh:
        for cid in sorted(mn.community_sizes):
            fh.write(f"{cid}\t{mn.community_sizes[cid]}\n")
    return node_path


def load_meta_network(edge_path, node_path=None) -> MetaNetwork:
    """Reload an exported meta-network (weights and sizes; intra counts
    are not part of the export)."""
    node_path = str(node_path or f"{edge_path}.nodes")
    sizes = {}
    with open(node_path) as fh:
        for line in fh:
            if not line.strip():
                continue
            cid, size = line.split()
            sizes[int(cid)] = int(size)
    try:
        edges = list(load_edge_list(edge_path).edges(data=True))
    except EmptyGraphError:
        edges = []  # an edgeless meta-network exports an empty edge file
    g, _ = build_graph(edges, nodes=sorted(sizes))
    if set(g.nodes) - sizes.keys():
        raise NotFoundError("edge file mentions communities missing from node table")
    weights = {(u, v): w for u, v, w in g.edges(data=True)}
    return MetaNetwork(
        graph=g,
        weights=weights,
        community_sizes=sizes,
        intra_edge_counts={cid: 0 for cid in sizes},
    )


def summarize_meta_network(mn: MetaNetwork) -> dict:
    """Structural summary: counts, weight extremes, degree, density, LCC."""
    g = mn.graph
    ws = sorted(mn.weights.values())
    comps = connected_components(g)
    lcc = max((len(c) for c in comps), default=0)
    return {
        "nodes": g.num_nodes,
        "edges": g.num_edges,
        "min_weight": ws[0] if ws else None,
        "max_weight": ws[-1] if ws else None,
        "avg_weight": (sum(ws) / len(ws)) if ws else None,
        "lcc_fraction": (lcc / g.num_nodes) if g.num_nodes else 0.0,
        "mean_degree": g.mean_degree(),
        "density": g.density(),
        "intra_edge_total": mn.total_intra_weight,
        "inter_edge_total": mn.total_inter_weight,
        "dropped_singletons": mn.dropped_singletons,
        "unassigned_weight": mn.unassigned_weight,
    }
