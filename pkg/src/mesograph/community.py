"""Community detection: label propagation, local modularity ascent, and
the shared modularity evaluator.

Both detectors are sequential and fully deterministic under their RNG
seed: the seed drives per-sweep node-order shuffles (and, for label
propagation, tie breaks), so a fixed graph plus a fixed seed always yields
the same partition.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .errors import EmptyGraphError
from .graph import CommunityStructure, Graph, connected_components

# Minimum gain for a label move to count as a strict improvement; prevents
# oscillation on exact ties.
MOVE_EPS = 1e-12


@dataclass
class LpaConfig:
    max_iterations: int = 50
    rng_seed: int = 0

    def validate(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass
class FncaConfig:
    max_iterations: int = 50
    rng_seed: int = 0

    def validate(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass
class ModularityScore:
    """Network modularity plus its per-community terms.

    ``per_community_terms`` lists (intra-edge count, degree sum) per
    community, in structure order; q is the sum of
    ``l_s/|E| - (d_s/(2|E|))**2`` over those terms.
    """

    q: float
    per_community_terms: list


@dataclass
class FncaState:
    """Snapshot of one ascent sweep: labels, per-node gain terms, edge count.

    ``(1/2m) * sum(f_values)`` equals the modularity of the label partition.
    """

    labels: dict
    f_values: dict
    m: int
    q: float

    def f_sum_over_2m(self) -> float:
        if self.m == 0:
            return 0.0
        return sum(self.f_values.values()) / (2.0 * self.m)


@dataclass
class DetectionRun:
    """One detection run: the partition plus its run record."""

    algorithm: str
    seed: int
    max_iterations: int
    iterations: int
    converged: bool
    q_trajectory: list
    modularity: float
    structure: CommunityStructure
    wall_time_s: float
    trace: list | None = None
    move_deltas: list = field(default_factory=list)

    def record(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "seed": self.seed,
            "max_iterations": self.max_iterations,
            "iterations": self.iterations,
            "converged": self.converged,
            "communities": len(self.structure),
            "modularity": self.modularity,
            "q_trajectory": self.q_trajectory,
            "wall_time_s": self.wall_time_s,
        }


def modularity(g: Graph, cs: CommunityStructure) -> ModularityScore:
    """Exact network modularity of a partition (unweighted edges).

    An edgeless graph has modularity 0 by convention.
    """
    cs.check_partition_of(g)
    m = g.num_edges
    terms = []
    q = 0.0
    for _, members in cs.communities:
        mem = set(members)
        l_s = 0
        d_s = 0
        for u in members:
            ns = g.neighbors(u)
            d_s += len(ns)
            l_s += sum(1 for v in ns if v in mem)
        l_s //= 2
        terms.append((l_s, d_s))
        if m:
            q += l_s / m - (d_s / (2.0 * m)) ** 2
    return ModularityScore(q, terms)


def _label_modularity(g: Graph, labels: dict) -> float:
    """Modularity of the partition induced by a label map, in O(E + n)."""
    m = g.num_edges
    if m == 0:
        return 0.0
    intra: dict = {}
    degsum: dict = {}
    for u in g.nodes:
        lu = labels[u]
        ns = g.neighbors(u)
        degsum[lu] = degsum.get(lu, 0) + len(ns)
        for v in ns:
            if v > u and labels[v] == lu:
                intra[lu] = intra.get(lu, 0) + 1
    two_m = 2.0 * m
    return sum(
        intra.get(c, 0) / m - (d / two_m) ** 2 for c, d in degsum.items()
    )


# -- label propagation -------------------------------------------------------


def run_lpa(g: Graph, cfg: LpaConfig | None = None) -> DetectionRun:
    """Label propagation with asynchronous updates.

    Every node starts with a unique label. Each sweep visits the nodes in a
    freshly shuffled order; a node adopts the label carried by the most
    neighbors, keeping its own whenever that is already one of the
    maximizers and otherwise breaking ties uniformly at random. The process
    stops when a full sweep changes nothing (every label is then a
    neighborhood maximizer) or at max_iterations. Label groups are finally
    split into connected communities; isolated nodes stay singletons.
    """
    cfg = cfg or LpaConfig()
    cfg.validate()
    if g.num_nodes == 0:
        raise EmptyGraphError("cannot detect communities in an empty graph")
    t0 = time.perf_counter()
    rng = random.Random(cfg.rng_seed)

    labels = {v: v for v in g.nodes}
    order = list(g.nodes)
    q_traj = []
    converged = False
    iterations = 0
    for _ in range(cfg.max_iterations):
        iterations += 1
        rng.shuffle(order)
        changed = 0
        for v in order:
            ns = g.neighbors(v)
            if not ns:
                continue
            counts: dict = {}
            for w in ns:
                lw = labels[w]
                counts[lw] = counts.get(lw, 0) + 1
            best = max(counts.values())
            maximizers = [lab for lab, c in counts.items() if c == best]
            if labels[v] in maximizers:
                continue
            if len(maximizers) == 1:
                labels[v] = maximizers[0]
            else:
                labels[v] = rng.choice(sorted(maximizers))
            changed += 1
        q_traj.append(_label_modularity(g, labels))
        if changed == 0:
            converged = True
            break

    structure = split_contiguous(g, CommunityStructure.from_node_labels(labels))
    final_q = modularity(g, structure).q
    return DetectionRun(
        algorithm="lpa",
        seed=cfg.rng_seed,
        max_iterations=cfg.max_iterations,
        iterations=iterations,
        converged=converged,
        q_trajectory=q_traj,
        modularity=final_q,
        structure=structure,
        wall_time_s=time.perf_counter() - t0,
    )


def detect_lpa(g: Graph, cfg: LpaConfig | None = None) -> CommunityStructure:
    return run_lpa(g, cfg).structure


# -- local modularity ascent -------------------------------------------------


def run_fnca(
    g: Graph, cfg: FncaConfig | None = None, trace: bool = False
) -> DetectionRun:
    """Greedy local modularity ascent over node labels.

    Every node starts as its own community. Each sweep visits the nodes in
    a freshly shuffled order; a node scores its own community against each
    label present in its neighborhood and moves to the best one when the
    gain is strictly positive. Each accepted move raises global modularity
    by gain/m, so the Q sequence is non-decreasing. Stops when a sweep
    makes no move or at max_iterations.

    With ``trace=True`` the run keeps a per-sweep :class:`FncaState`
    snapshot and the per-move Q deltas.
    """
    cfg = cfg or FncaConfig()
    cfg.validate()
    if g.num_nodes == 0:
        raise EmptyGraphError("cannot detect communities in an empty graph")
    t0 = time.perf_counter()
    rng = random.Random(cfg.rng_seed)

    m = g.num_edges
    two_m = 2.0 * m
    labels = {v: v for v in g.nodes}
    deg = {v: g.degree(v) for v in g.nodes}
    deg_sum = dict(deg)  # label -> sum of member degrees
    move_deltas: list = []
    states: list = []

    if m == 0:
        structure = CommunityStructure.from_node_labels(labels)
        return DetectionRun(
            algorithm="fnca",
            seed=cfg.rng_seed,
            max_iterations=cfg.max_iterations,
            iterations=0,
            converged=True,
            q_trajectory=[0.0],
            modularity=0.0,
            structure=structure,
            wall_time_s=time.perf_counter() - t0,
            trace=states if trace else None,
        )

    # Modularity of the all-singletons start.
    q = -sum(k * k for k in deg.values()) / (two_m * two_m)
    q_traj = [q]

    order = list(g.nodes)
    converged = False
    iterations = 0
    for _ in range(cfg.max_iterations):
        iterations += 1
        rng.shuffle(order)
        moves = 0
        for i in order:
            ns = g.neighbors(i)
            if not ns:
                continue
            ki = deg[i]
            cur = labels[i]
            counts: dict = {}
            for j in ns:
                lj = labels[j]
                counts[lj] = counts.get(lj, 0) + 1
            # Gain term of i inside its current community, counting the
            # j == i contribution (-ki^2/2m) via deg_sum.
            base = counts.get(cur, 0) - ki * deg_sum[cur] / two_m
            best_label = cur
            best_score = base
            for c in sorted(counts):
                if c == cur:
                    continue
                score = counts[c] - ki * (deg_sum[c] + ki) / two_m
                if score > best_score + MOVE_EPS:
                    best_label = c
                    best_score = score
            if best_label != cur:
                dq = (best_score - base) / m
                deg_sum[cur] -= ki
                deg_sum[best_label] += ki
                labels[i] = best_label
                q += dq
                moves += 1
                if trace:
                    move_deltas.append(dq)
        q_traj.append(q)
        if trace:
            states.append(
                FncaState(
                    labels=dict(labels),
                    f_values=_f_values(g, labels, deg_sum, two_m),
                    m=m,
                    q=q,
                )
            )
        if moves == 0:
            converged = True
            break

    structure = CommunityStructure.from_node_labels(labels)
    final_q = modularity(g, structure).q
    return DetectionRun(
        algorithm="fnca",
        seed=cfg.rng_seed,
        max_iterations=cfg.max_iterations,
        iterations=iterations,
        converged=converged,
        q_trajectory=q_traj,
        modularity=final_q,
        structure=structure,
        wall_time_s=time.perf_counter() - t0,
        trace=states if trace else None,
        move_deltas=move_deltas,
    )


def _f_values(g: Graph, labels: dict, deg_sum: dict, two_m: float) -> dict:
    """Per-node gain terms f_i for the current label assignment."""
    f = {}
    for i in g.nodes:
        li = labels[i]
        shared = sum(1 for j in g.neighbors(i) if labels[j] == li)
        f[i] = shared - g.degree(i) * deg_sum[li] / two_m
    return f


def detect_fnca(g: Graph, cfg: FncaConfig | None = None) -> CommunityStructure:
    return run_fnca(g, cfg).structure


def run_detection(g: Graph, algorithm: str, max_iterations=50, rng_seed=0) -> DetectionRun:
    """Dispatch by algorithm name; the CLI entry point."""
    if algorithm == "lpa":
        return run_lpa(g, LpaConfig(max_iterations, rng_seed))
    if algorithm == "fnca":
        return run_fnca(g, FncaConfig(max_iterations, rng_seed))
    raise ValueError(f"unknown algorithm {algorithm!r}")


# -- partition post-processing ------------------------------------------------


def split_contiguous(g: Graph, cs: CommunityStructure) -> CommunityStructure:
    """Split each community into the connected components it induces.

    Returns the input unchanged when every community is already connected;
    otherwise community IDs are reassigned in smallest-member order.
    Idempotent, and always a refinement of the input partition.
    """
    groups = []
    any_split = False
    for _, members in cs.communities:
        comps = connected_components(g, within=members)
        if len(comps) > 1:
            any_split = True
        groups.extend(comps)
    if not any_split:
        return cs
    return CommunityStructure.from_groups(groups)


def drop_singletons(cs: CommunityStructure) -> tuple[CommunityStructure, int]:
    """Remove size-1 communities; returns the kept structure and the count."""
    kept = [(cid, ms) for cid, ms in cs.communities if len(ms) > 1]
    removed = len(cs.communities) - len(kept)
    if removed == 0:
        return cs, 0
    return CommunityStructure(kept), removed
