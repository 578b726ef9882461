"""Similarity between two community structures.

Matching is greedy and asymmetric: every community of the former structure
is matched with its best binary-Jaccard partner in the latter structure,
and the scores are summarized (mean, median, standard deviation, fraction
of identical matches). Size distributions are compared with KL divergence
in both directions.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceUndefinedError, UndefinedInputError
from .graph import CommunityStructure


@dataclass
class SizeDistribution:
    """Discrete probability distribution over integer sizes.

    Zero-probability sizes are never part of the support.
    """

    support: tuple
    probs: tuple

    def __post_init__(self):
        if len(self.support) != len(self.probs):
            raise ValueError("support and probs length mismatch")
        if any(p <= 0 for p in self.probs):
            raise ValueError("zero or negative probability on support")
        total = sum(self.probs)
        if self.probs and abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total}, not 1")
        if list(self.support) != sorted(set(self.support)):
            raise ValueError("support must be strictly increasing")

    @classmethod
    def from_counts(cls, counts: dict) -> "SizeDistribution":
        items = sorted((s, c) for s, c in counts.items() if c > 0)
        total = sum(c for _, c in items)
        if total == 0:
            raise UndefinedInputError("no observations to build a distribution")
        return cls(
            tuple(s for s, _ in items), tuple(c / total for _, c in items)
        )

    @classmethod
    def from_samples(cls, samples) -> "SizeDistribution":
        return cls.from_counts(Counter(samples))

    def prob(self, x) -> float:
        try:
            return self.probs[self.support.index(x)]
        except ValueError:
            return 0.0

    def as_mapping(self) -> dict:
        return dict(zip(self.support, self.probs))


@dataclass
class SimilarityReport:
    """Best-match scores of every former-set community, plus summaries."""

    per_community_best: list  # (former index, best latter index, score)
    mean: float
    median: float
    std_dev: float
    identical_fraction: float
    n_communities: int

    def record(self) -> dict:
        return {
            "communities_compared": self.n_communities,
            "common": self.identical_fraction,
            "mean": self.mean,
            "median": self.median,
            "std_dev": self.std_dev,
        }


def binary_jaccard(v, w) -> float:
    """Set overlap M11 / (M01 + M10 + M11); symmetric, in [0, 1]."""
    v = set(v)
    w = set(w)
    if not v and not w:
        raise UndefinedInputError("binary Jaccard of two empty sets")
    inter = len(v & w)
    return inter / (len(v) + len(w) - inter)


def match_structures(
    a: CommunityStructure, b: CommunityStructure
) -> SimilarityReport:
    """Match every community of ``a`` against its most similar one in ``b``.

    Asymmetric by definition: scores are maxima over ``b`` for each member
    of ``a``. The mean is exactly the sum of best scores over the community
    count of ``a``.
    """
    if len(a) == 0 or len(b) == 0:
        raise UndefinedInputError("cannot match against an empty structure")

    b_sizes = [len(ms) for _, ms in b.communities]
    node_to_b = b.node_to_community

    best_list = []
    for i, (_, members) in enumerate(a.communities):
        overlap: dict = {}
        for n in members:
            j = node_to_b.get(n)
            if j is not None:
                overlap[j] = overlap.get(j, 0) + 1
        best_j = 0
        best_score = 0.0
        for j in sorted(overlap):
            inter = overlap[j]
            score = inter / (len(members) + b_sizes[j] - inter)
            if score > best_score:
                best_j = j
                best_score = score
        best_list.append((i, best_j, best_score))

    scores = np.array([s for _, _, s in best_list])
    return SimilarityReport(
        per_community_best=best_list,
        mean=float(scores.sum() / len(scores)),
        median=float(np.median(scores)),
        std_dev=float(scores.std()),
        identical_fraction=float(np.count_nonzero(scores == 1.0) / len(scores)),
        n_communities=len(a),
    )


def kl_divergence(p: SizeDistribution, q: SizeDistribution) -> float:
    """Kullback-Leibler divergence of p from q in natural-log units.

    Undefined (raises) when q has no mass somewhere on p's support; callers
    wanting guaranteed-finite values should smooth first, as
    :func:`size_divergence_report` does.
    """
    qm = q.as_mapping()
    total = 0.0
    for x, px in zip(p.support, p.probs):
        qx = qm.get(x, 0.0)
        if qx == 0.0:
            raise DivergenceUndefinedError(
                f"q has zero probability at size {x} on p's support"
            )
        total += px * math.log(px / qx)
    return max(total, 0.0)


def smooth_counts_pair(
    counts_p: dict, counts_q: dict
) -> tuple[SizeDistribution, SizeDistribution]:
    """Add one pseudo-count to every size in the union support, then
    normalize both; the resulting pair always has finite KL divergence."""
    union = sorted(set(counts_p) | set(counts_q))
    if not union:
        raise UndefinedInputError("both count maps are empty")
    sp = {s: counts_p.get(s, 0) + 1 for s in union}
    sq = {s: counts_q.get(s, 0) + 1 for s in union}
    return SizeDistribution.from_counts(sp), SizeDistribution.from_counts(sq)


def size_divergence_report(
    a: CommunityStructure, b: CommunityStructure
) -> dict:
    """Two-way KL divergences between community-size distributions.

    Reports both the smoothed values (one pseudo-count per union-support
    size, always finite) and the raw values restricted to the common
    support (null when the supports are disjoint), plus the log base.
    """
    counts_a = Counter(len(ms) for _, ms in a.communities)
    counts_b = Counter(len(ms) for _, ms in b.communities)
    sp, sq = smooth_counts_pair(counts_a, counts_b)
    out = {
        "log_base": "e",
        "smoothed": {
            "kl_ab": kl_divergence(sp, sq),
            "kl_ba": kl_divergence(sq, sp),
        },
        "raw_common_support": None,
    }
    common = sorted(set(counts_a) & set(counts_b))
    if common:
        rp = SizeDistribution.from_counts({s: counts_a[s] for s in common})
        rq = SizeDistribution.from_counts({s: counts_b[s] for s in common})
        out["raw_common_support"] = {
            "kl_ab": kl_divergence(rp, rq),
            "kl_ba": kl_divergence(rq, rp),
            "support_sizes": len(common),
        }
    return out


def similarity_heatmap(
    a: CommunityStructure, b: CommunityStructure, max_cells: int = 256
):
    """Dense binary-Jaccard score matrix, rows = a, columns = b.

    When a structure has more communities than ``max_cells`` (per axis),
    only its largest ones are kept, ordered by descending size. Returns
    (matrix, row community IDs, column community IDs).
    """
    if len(a) == 0 or len(b) == 0:
        raise UndefinedInputError("cannot build a heat map of an empty structure")
    if max_cells < 1:
        raise ValueError("max_cells must be positive")

    def select(cs):
        entries = list(cs.communities)
        if len(entries) > max_cells:
            entries.sort(key=lambda e: (-len(e[1]), e[0]))
            entries = entries[:max_cells]
        return entries

    rows = select(a)
    cols = select(b)
    col_sets = [set(ms) for _, ms in cols]
    matrix = np.zeros((len(rows), len(cols)))
    for i, (_, members) in enumerate(rows):
        row_set = set(members)
        for j, cset in enumerate(col_sets):
            inter = len(row_set & cset)
            matrix[i, j] = inter / (len(row_set) + len(cset) - inter)
    return matrix, [cid for cid, _ in rows], [cid for cid, _ in cols]
