"""Graph storage, edge-list and community-file I/O, and ID anonymization.

The :class:`Graph` here is deliberately small: an undirected simple graph
over 64-bit unsigned integer node IDs with optional positive integer edge
weights (weight 1 when unstated). Instances are immutable after
construction, so they are safe to share between concurrent analysis passes.
"""

from __future__ import annotations

import logging
from bisect import bisect_left
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    EmptyGraphError,
    InconsistencyError,
    NotFoundError,
    ParseError,
)

log = logging.getLogger(__name__)

MAX_NODE_ID = 2**64 - 1
ANONYMIZED_ID_BITS = 48
_ANON_MASK = (1 << ANONYMIZED_ID_BITS) - 1


@dataclass
class BuildStats:
    """Counters from one graph construction pass."""

    self_loops_dropped: int = 0
    duplicates_merged: int = 0


class Graph:
    """Undirected simple graph with sorted adjacency and integer weights.

    Construct through :func:`build_graph`, :meth:`Graph.from_edges` or
    :func:`load_edge_list`; the constructor trusts its arguments.
    """

    __slots__ = ("_adj", "_weights", "_num_edges", "_total_weight")

    def __init__(self, adj, weights):
        self._adj = adj            # node -> sorted tuple of neighbors
        self._weights = weights    # (u, v) with u < v -> weight > 1 only
        self._num_edges = sum(len(ns) for ns in adj.values()) // 2
        self._total_weight = self._num_edges + sum(
            w - 1 for w in weights.values()
        )

    # -- construction ---------------------------------------------------

    @staticmethod
    def from_edges(edges, nodes=()) -> "Graph":
        """Build a graph from (u, v) or (u, v, w) tuples; see build_graph."""
        g, _ = build_graph(edges, nodes)
        return g

    # -- basic queries ---------------------------------------------------

    @property
    def nodes(self) -> tuple[int, ...]:
        """All node IDs in ascending order."""
        return tuple(self._adj)

    @property
    def node_set(self) -> frozenset:
        return frozenset(self._adj)

    @property
    def num_nodes(self) -> int:
        return len(self._adj)

    @property
    def num_edges(self) -> int:
        return self._num_edges

    @property
    def total_weight(self) -> int:
        """Sum of edge weights; equals num_edges for unweighted graphs."""
        return self._total_weight

    def __contains__(self, v) -> bool:
        return v in self._adj

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj and self._weights == other._weights

    __hash__ = None

    def __repr__(self):
        return f"Graph(nodes={self.num_nodes}, edges={self.num_edges})"

    def neighbors(self, v) -> tuple[int, ...]:
        try:
            return self._adj[v]
        except KeyError:
            raise NotFoundError(f"node {v} not in graph") from None

    def degree(self, v) -> int:
        """Unweighted degree: the adjacency-list length of v."""
        return len(self.neighbors(v))

    def has_edge(self, u, v) -> bool:
        ns = self._adj.get(u)
        if not ns:
            return False
        i = bisect_left(ns, v)
        return i < len(ns) and ns[i] == v

    def weight(self, u, v) -> int:
        if not self.has_edge(u, v):
            raise NotFoundError(f"edge {u}-{v} not in graph")
        return self._weights.get((u, v) if u < v else (v, u), 1)

    def edges(self, data=False):
        """Yield each edge once as (u, v) with u < v, plus weight if data."""
        for u, ns in self._adj.items():
            start = bisect_left(ns, u)
            for v in ns[start:]:
                if data:
                    yield u, v, self._weights.get((u, v), 1)
                else:
                    yield u, v

    def mean_degree(self) -> float:
        if not self._adj:
            return 0.0
        return 2.0 * self._num_edges / len(self._adj)

    def density(self) -> float:
        n = self.num_nodes
        if n < 2:
            return 0.0
        return 2.0 * self._num_edges / (n * (n - 1))


def build_graph(edges, nodes=()) -> tuple[Graph, BuildStats]:
    """Construct a Graph from an edge iterable, cleaning as it goes.

    Duplicate edges collapse into one edge whose weight is the sum of the
    duplicates' weights; self-loops are dropped. Both events are counted in
    the returned :class:`BuildStats`. ``nodes`` adds isolated node IDs.
    """
    stats = BuildStats()
    weights: dict[tuple[int, int], int] = {}
    for e in edges:
        if len(e) == 3:
            u, v, w = e
        else:
            u, v = e
            w = 1
        if u == v:
            stats.self_loops_dropped += 1
            continue
        if w < 1:
            raise ValueError(f"edge {u}-{v} has non-positive weight {w}")
        _check_node_id(u)
        _check_node_id(v)
        key = (u, v) if u < v else (v, u)
        if key in weights:
            stats.duplicates_merged += 1
            weights[key] += w
        else:
            weights[key] = w

    adj: dict[int, list[int]] = {}
    for n in nodes:
        _check_node_id(n)
        adj.setdefault(n, [])
    for u, v in weights:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)

    final_adj = {u: tuple(sorted(adj[u])) for u in sorted(adj)}
    final_weights = {k: w for k, w in weights.items() if w > 1}
    return Graph(final_adj, final_weights), stats


def _check_node_id(n):
    if not isinstance(n, int) or n < 0 or n > MAX_NODE_ID:
        raise ValueError(f"node ID {n!r} is not a 64-bit unsigned integer")


# -- edge-list files ------------------------------------------------------


def load_edge_list(path) -> Graph:
    """Load a whitespace-separated edge list.

    Each non-comment line holds two (optionally three: weight) integers.
    Lines starting with ``#`` are comments, except ``# node <id>`` which
    declares an isolated node (what :func:`write_edge_list` emits for them).
    Duplicates merge and self-loops drop per :func:`build_graph`, with the
    counts logged.
    """
    edges = []
    isolated = []
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            if text.startswith("#"):
                parts = text[1:].split()
                if len(parts) == 2 and parts[0] == "node":
                    try:
                        isolated.append(int(parts[1]))
                    except ValueError:
                        raise ParseError(
                            path, line_no, f"bad node declaration {text!r}"
                        ) from None
                continue
            parts = text.split()
            if len(parts) not in (2, 3):
                raise ParseError(
                    path, line_no, f"expected 2 or 3 fields, got {len(parts)}"
                )
            try:
                edges.append(tuple(int(p) for p in parts))
            except ValueError:
                raise ParseError(
                    path, line_no, f"non-integer field in {text!r}"
                ) from None

    try:
        g, stats = build_graph(edges, nodes=isolated)
    except ValueError as exc:
        raise ParseError(path, 0, str(exc)) from None
    if g.num_nodes == 0:
        raise EmptyGraphError(f"{path}: no edges or nodes found")
    if stats.self_loops_dropped:
        log.warning(
            "%s: dropped %d self-loop(s)", path, stats.self_loops_dropped
        )
    if stats.duplicates_merged:
        log.warning(
            "%s: merged %d duplicate edge(s) into weights",
            path,
            stats.duplicates_merged,
        )
    return g


def write_edge_list(g: Graph, path, weighted=None) -> None:
    """Write the graph as one ``u<TAB>v[<TAB>w]`` line per edge, u < v.

    Weights are written for every edge when any edge weight exceeds 1, or
    always/never when ``weighted`` is True/False. Isolated nodes are recorded
    as ``# node <id>`` declarations so a round trip preserves the node set.
    """
    if weighted is None:
        weighted = bool(g._weights)
    with open(path, "w") as fh:
        covered = set()
        for u, v, w in g.edges(data=True):
            covered.add(u)
            covered.add(v)
            if weighted:
                fh.write(f"{u}\t{v}\t{w}\n")
            else:
                fh.write(f"{u}\t{v}\n")
        for n in g.nodes:
            if n not in covered:
                fh.write(f"# node {n}\n")


# -- community structures --------------------------------------------------


class CommunityStructure:
    """A partition of node IDs into labeled communities.

    ``communities`` is an ordered list of ``(community_id, members)`` with
    members sorted ascending; ``node_to_community`` maps each node to its
    community's *index* in that list.
    """

    __slots__ = ("communities", "node_to_community")

    def __init__(self, communities):
        seen_ids = set()
        node_to_community: dict[int, int] = {}
        cleaned = []
        for idx, (cid, members) in enumerate(communities):
            members = tuple(sorted(members))
            if not members:
                raise InconsistencyError(f"community {cid} is empty")
            if cid in seen_ids:
                raise InconsistencyError(f"duplicate community ID {cid}")
            seen_ids.add(cid)
            for n in members:
                if n in node_to_community:
                    raise InconsistencyError(
                        f"node {n} appears in more than one community"
                    )
                node_to_community[n] = idx
            cleaned.append((cid, members))
        self.communities = cleaned
        self.node_to_community = node_to_community

    @classmethod
    def from_groups(cls, groups) -> "CommunityStructure":
        """Build from bare member groups; IDs follow smallest-member order."""
        ordered = sorted((tuple(sorted(g)) for g in groups if g),
                         key=lambda ms: ms[0])
        return cls(list(enumerate(ordered)))

    @classmethod
    def from_node_labels(cls, labels: dict) -> "CommunityStructure":
        """Group nodes sharing a label; IDs follow smallest-member order."""
        groups: dict = {}
        for node, lab in labels.items():
            groups.setdefault(lab, []).append(node)
        return cls.from_groups(groups.values())

    def __len__(self):
        return len(self.communities)

    def __eq__(self, other):
        if not isinstance(other, CommunityStructure):
            return NotImplemented
        return self.communities == other.communities

    __hash__ = None

    def __repr__(self):
        return (
            f"CommunityStructure(communities={len(self.communities)}, "
            f"nodes={len(self.node_to_community)})"
        )

    @property
    def node_count(self) -> int:
        return len(self.node_to_community)

    def sizes(self) -> list[int]:
        return [len(ms) for _, ms in self.communities]

    def members(self, community_id) -> tuple[int, ...]:
        for cid, ms in self.communities:
            if cid == community_id:
                return ms
        raise NotFoundError(f"community {community_id} not in structure")

    def community_of(self, node) -> int:
        """Community ID (not list index) that contains the node."""
        try:
            return self.communities[self.node_to_community[node]][0]
        except KeyError:
            raise NotFoundError(f"node {node} not in any community") from None

    def check_partition_of(self, g: Graph) -> None:
        """Raise InconsistencyError unless this partitions g's node set."""
        if self.node_to_community.keys() != set(g.nodes):
            missing = set(g.nodes) - self.node_to_community.keys()
            extra = self.node_to_community.keys() - set(g.nodes)
            raise InconsistencyError(
                f"structure does not partition graph nodes "
                f"(missing={len(missing)}, extra={len(extra)})"
            )


def write_community_structure(cs: CommunityStructure, path) -> None:
    """Write one ``community_id<TAB>member1,member2,...`` line per community."""
    with open(path, "w") as fh:
        for cid, members in cs.communities:
            fh.write(f"{cid}\t{','.join(str(m) for m in members)}\n")


def load_community_structure(path) -> CommunityStructure:
    """Read the TSV produced by :func:`write_community_structure`."""
    communities = []
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            text = line.rstrip("\n")
            if not text.strip() or text.startswith("#"):
                continue
            parts = text.split("\t")
            if len(parts) != 2:
                raise ParseError(path, line_no, "expected 2 tab-separated fields")
            try:
                cid = int(parts[0])
                members = [int(m) for m in parts[1].split(",") if m]
            except ValueError:
                raise ParseError(path, line_no, "non-integer ID") from None
            if not members:
                raise ParseError(path, line_no, "community has no members")
            communities.append((cid, members))
    try:
        return CommunityStructure(communities)
    except InconsistencyError as exc:
        raise ParseError(path, 0, str(exc)) from None


# -- anonymization ---------------------------------------------------------


def anonymize(raw_id: int, key: int) -> int:
    """Keyed 64-bit mix hash of a raw ID truncated to 48 bits.

    Deterministic for a fixed key. Injectivity is not guaranteed; use
    :func:`anonymize_ids` to map a whole corpus and count collisions.
    """
    z = (raw_id ^ (key * 0x9E3779B97F4A7C15)) & 0xFFFFFFFFFFFFFFFF
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & 0xFFFFFFFFFFFFFFFF
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & 0xFFFFFFFFFFFFFFFF
    z ^= z >> 31
    return z & _ANON_MASK


def anonymize_ids(raw_ids, key: int) -> tuple[dict, int]:
    """Map every raw ID under one key; returns (mapping, collision count).

    A collision is a pair of distinct raw IDs that hash to an output already
    produced by an earlier ID.
    """
    mapping = {}
    outputs = set()
    collisions = 0
    for raw in raw_ids:
        if raw in mapping:
            continue
        h = anonymize(raw, key)
        if h in outputs:
            collisions += 1
        outputs.add(h)
        mapping[raw] = h
    return mapping, collisions


# -- shared traversal helpers ----------------------------------------------


def connected_components(g: Graph, within=None) -> list[list[int]]:
    """Connected components as sorted node lists, largest-agnostic order.

    ``within`` restricts the traversal to an induced subgraph's node set.
    """
    if within is None:
        allowed = None
        universe = g.nodes
    else:
        allowed = set(within)
        universe = sorted(allowed)
    seen = set()
    components = []
    for start in universe:
        if start in seen:
            continue
        comp = []
        queue = deque([start])
        seen.add(start)
        while queue:
            u = queue.popleft()
            comp.append(u)
            for v in g.neighbors(u):
                if v in seen or (allowed is not None and v not in allowed):
                    continue
                seen.add(v)
                queue.append(v)
        components.append(sorted(comp))
    return components
