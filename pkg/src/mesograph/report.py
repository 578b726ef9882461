"""Artifact writers and human-readable report assembly.

Every writer here is deterministic: sorted keys, fixed float formatting,
newline-terminated lines. Run timings never enter these files (they go to
a separate sidecar) so byte-identical inputs yield byte-identical outputs.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .compare import SizeDistribution


def write_json(payload, path) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_pmf_tsv(dist: SizeDistribution, path, header=("value", "probability")) -> None:
    """Two-column plot data: support value and probability mass."""
    with open(path, "w") as fh:
        fh.write(f"# {header[0]}\t{header[1]}\n")
        for x, p in zip(dist.support, dist.probs):
            fh.write(f"{x}\t{p:.10g}\n")


def write_series_tsv(pairs, path, header=("x", "y")) -> None:
    with open(path, "w") as fh:
        fh.write(f"# {header[0]}\t{header[1]}\n")
        for x, y in pairs:
            fh.write(f"{x:.10g}\t{y:.10g}\n")


def write_grid_tsv(matrix, path) -> None:
    matrix = np.asarray(matrix)
    with open(path, "w") as fh:
        for row in matrix:
            fh.write("\t".join(f"{v:.10g}" for v in row) + "\n")


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


# -- human-readable tables -----------------------------------------------------


def _fmt(value):
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.4g}"
    return str(value)


def render_table(title, rows, columns) -> str:
    """Plain-text table: rows are dicts keyed by the column names."""
    cells = [[_fmt(r.get(c)) for c in columns] for r in rows]
    widths = [
        max(len(c), *(len(row[i]) for row in cells)) if cells else len(c)
        for i, c in enumerate(columns)
    ]
    lines = [title]
    lines.append("  ".join(c.ljust(w) for c, w in zip(columns, widths)))
    lines.append("  ".join("-" * w for w in widths))
    for row in cells:
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def emit_report(record: dict, out_dir) -> list:
    """Write report.json plus a plain-text report of every table whose
    stage outputs exist; missing stages are skipped with a notice line.

    Returns the list of written paths.
    """
    out_dir = Path(out_dir)
    written = []

    report_json = out_dir / "report.json"
    write_json(record, report_json)
    written.append(report_json)

    sections = []

    if "sample_summary" in record:
        s = record["sample_summary"]
        sections.append(
            render_table(
                "Sample summary",
                [s],
                ["method", "visited", "discovered", "edges", "lcc_fraction",
                 "mean_degree_visited", "mean_degree", "density"],
            )
        )
    else:
        sections.append("Sample summary: skipped (no sampling stage output)\n")

    if record.get("detections"):
        sections.append(
            render_table(
                "Detection results",
                record["detections"],
                ["algorithm", "seed", "communities", "modularity",
                 "iterations", "converged", "wall_time_s"],
            )
        )
    else:
        sections.append("Detection results: skipped (no detection stage output)\n")

    if record.get("community_files"):
        lines = ["Community structures (community-ID, member list files)"]
        for algo, path in sorted(record["community_files"].items()):
            lines.append(f"  {algo}: {path}")
        sections.append("\n".join(lines) + "\n")

    if "similarity" in record:
        sim = dict(record["similarity"]["report"])
        sim["pair"] = record["similarity"].get("pair")
        sections.append(
            render_table(
                "Structure similarity",
                [sim],
                ["pair", "communities_compared", "common", "mean", "median",
                 "std_dev"],
            )
        )
        kl = record["similarity"].get("size_divergence")
        if kl:
            sections.append(
                "Size-distribution KL divergence (natural log): "
                f"smoothed a->b {kl['smoothed']['kl_ab']:.6g}, "
                f"b->a {kl['smoothed']['kl_ba']:.6g}\n"
            )
    else:
        sections.append("Structure similarity: skipped (needs two detections)\n")

    if "outliers" in record:
        o = record["outliers"]
        rows = [
            {"threshold": f"> {t}", "communities": c}
            for t, c in o["counts_by_threshold"].items()
        ]
        rows.append(
            {
                "threshold": f"> sqrt(E/2) = {float(o['resolution_threshold']):.4g}",
                "communities": o["above_resolution"],
            }
        )
        sections.append(render_table("Outlier communities", rows,
                                     ["threshold", "communities"]))
    else:
        sections.append("Outlier communities: skipped (no stats stage output)\n")

    if "meta_summary" in record:
        sections.append(
            render_table(
                "Meta-network features",
                [record["meta_summary"]],
                ["nodes", "edges", "min_weight", "max_weight", "avg_weight",
                 "lcc_fraction", "mean_degree", "effective_diameter",
                 "avg_clustering", "density"],
            )
        )
    else:
        sections.append("Meta-network features: skipped (no meta-network stage output)\n")

    report_txt = out_dir / "report.txt"
    with open(report_txt, "w") as fh:
        fh.write("\n".join(sections))
    written.append(report_txt)
    return written
