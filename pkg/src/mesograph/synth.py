"""Synthetic host graphs with known ground truth.

Two generators: a planted-partition model (known communities, for recovery
experiments) and a preferential-attachment model (power-law degree tails,
for sampling-bias experiments). Both draw every random bit from a Mersenne
Twister (``random.Random``) seeded from the spec, so identical specs produce
byte-identical edge lists on every platform.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass

from .errors import CapacityError
from .graph import CommunityStructure, Graph, build_graph

log = logging.getLogger(__name__)

# Sane upper bound on generated node counts; far above desk scale.
_MAX_NODES = 2**32


@dataclass
class PlantedPartitionSpec:
    n_communities: int
    community_size: int
    p_in: float
    p_out: float
    seed: int

    def validate(self):
        if self.n_communities < 1 or self.community_size < 1:
            raise ValueError("community counts and sizes must be positive")
        for p in (self.p_in, self.p_out):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"probability {p} outside [0, 1]")
        if self.n_communities * self.community_size > _MAX_NODES:
            raise CapacityError(
                f"{self.n_communities * self.community_size} nodes exceed "
                f"the generator capacity of {_MAX_NODES}"
            )
        if self.p_in <= self.p_out:
            log.warning(
                "p_in=%g <= p_out=%g: planted structure will not be "
                "recoverable", self.p_in, self.p_out,
            )


@dataclass
class ScaleFreeSpec:
    n_nodes: int
    edges_per_new_node: int
    seed: int

    def validate(self):
        if self.n_nodes < 1 or self.edges_per_new_node < 1:
            raise ValueError("node and edge counts must be positive")
        if self.edges_per_new_node >= self.n_nodes:
            raise ValueError("edges_per_new_node must be below n_nodes")
        if self.n_nodes > _MAX_NODES:
            raise CapacityError(
                f"{self.n_nodes} nodes exceed the generator capacity"
            )


def generate_planted_partition(
    spec: PlantedPartitionSpec,
) -> tuple[Graph, CommunityStructure]:
    """Sample a planted-partition graph plus its ground-truth communities.

    Nodes are 0..n-1 in community blocks of ``community_size``. Each
    intra-community pair is an edge with probability p_in, each
    inter-community pair with probability p_out.
    """
    spec.validate()
    rng = random.Random(spec.seed)
    k, size = spec.n_communities, spec.community_size
    n = k * size
    blocks = [range(c * size, (c + 1) * size) for c in range(k)]

    edges = []
    for block in blocks:
        for i in block:
            for j in range(i + 1, block.stop):
                if rng.random() < spec.p_in:
                    edges.append((i, j))
    for a in range(k):
        for b in range(a + 1, k):
            for i in blocks[a]:
                for j in blocks[b]:
                    if rng.random() < spec.p_out:
                        edges.append((i, j))

    g, _ = build_graph(edges, nodes=range(n))
    truth = CommunityStructure.from_groups(blocks)
    return g, truth


def generate_scale_free(spec: ScaleFreeSpec) -> Graph:
    """Grow a preferential-attachment graph.

    Starts from a complete core on the first ``m = edges_per_new_node``
    nodes; every later node attaches to m distinct earlier nodes chosen
    with probability proportional to their current degree. The result is
    connected and has exactly m*(n-m) + C(m,2) edges.
    """
    spec.validate()
    rng = random.Random(spec.seed)
    n, m = spec.n_nodes, spec.edges_per_new_node

    edges = [(u, v) for u in range(m) for v in range(u + 1, m)]
    # One endpoint entry per incident edge; sampling an index of this list
    # is degree-proportional sampling.
    endpoints = [x for e in edges for x in e]

    for new in range(m, n):
        targets = []
        chosen = set()
        while len(targets) < m:
            if endpoints:
                cand = endpoints[rng.randrange(len(endpoints))]
            else:
                # All existing nodes have degree 0 (the m=1 single-node
                # core); fall back to a uniform pick.
                cand = rng.randrange(new)
            if cand not in chosen:
                chosen.add(cand)
                targets.append(cand)
        for t in targets:
            edges.append((t, new))
            endpoints.append(t)
            endpoints.append(new)

    g, _ = build_graph(edges, nodes=range(n))
    return g
