"""Operator reports for one author: delimited tables plus rendered figures.

Writes into an output directory:
  coauthors.tsv / coauthor_network.png   — weighted co-author network
                                           (radial hot-spot layout, node
                                           size scales with shared works)
  focus_areas.tsv / focus_areas.png      — ranked concept labels
  collaborators.tsv                      — suggested collaborators
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import math

import matplotlib.pyplot as plt

from .analysis import coauthor_network, focus_areas
from .errors import NotFoundError
from .graph import KnowledgeGraph
from .models import EntityKind
from .recommend import recommend_collaborators


def _write_tsv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(header) + "\n")
        for row in rows:
            fh.write("\t".join(row) + "\n")


def render_coauthor_network(graph: KnowledgeGraph, author_id: str, path: Path) -> None:
    """Radial layout: the author at the center, co-authors on a circle."""
    network = coauthor_network(graph, author_id)
    center_name = graph.authors[author_id].display_name

    fig, ax = plt.subplots(figsize=(6, 6))
    ax.set_aspect("equal")
    ax.axis("off")
    ax.set_title(f"Co-author network: {center_name}")

    if network:
        max_shared = max(c.shared_work_count for c in network)
        for position, coauthor in enumerate(network):
            angle = 2 * math.pi * position / len(network)
            x, y = math.cos(angle), math.sin(angle)
            ax.plot([0, x], [0, y], color="0.8", zorder=1, linewidth=1.0)
            size = 300 + 900 * coauthor.shared_work_count / max_shared
            ax.scatter([x], [y], s=size, color="tab:blue", zorder=2)
            name = graph.authors[coauthor.author_id].display_name
            ax.annotate(
                f"{name} ({coauthor.shared_work_count})",
                (x, y),
                textcoords="offset points",
                xytext=(0, 14),
                ha="center",
                fontsize=8,
            )
    else:
        ax.text(0, -0.25, "no co-authors", ha="center", fontsize=9, color="0.4")
    ax.scatter([0], [0], s=700, color="tab:red", zorder=3)
    ax.annotate(center_name, (0, 0), textcoords="offset points", xytext=(0, 16), ha="center")
    margin = 1.4
    ax.set_xlim(-margin, margin)
    ax.set_ylim(-margin, margin)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def render_focus_areas(
    graph: KnowledgeGraph, author_id: str, path: Path, k: int = 10
) -> None:
    """Horizontal bars of the author's top concept labels."""
    areas = focus_areas(graph, author_id, k)
    name = graph.authors[author_id].display_name

    fig, ax = plt.subplots(figsize=(6, max(2.0, 0.5 * len(areas) + 1.0)))
    ax.set_title(f"Focus areas: {name}")
    if areas:
        labels = [label for label, _ in areas][::-1]
        scores = [score for _, score in areas][::-1]
        ax.barh(labels, scores, color="tab:blue")
        ax.set_xlabel("aggregate concept score")
    else:
        ax.text(0.5, 0.5, "no concepts", ha="center", va="center", color="0.4")
        ax.axis("off")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def author_report(
    graph: KnowledgeGraph, author_id: str, out_dir: str | Path, k: int = 10
) -> list[Path]:
    """Write all tables and figures for one author; returns the paths written."""
    if author_id not in graph.authors:
        raise NotFoundError(EntityKind.AUTHOR, author_id)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    network = coauthor_network(graph, author_id)
    coauthors_tsv = out / "coauthors.tsv"
    _write_tsv(
        coauthors_tsv,
        ["author_id", "display_name", "shared_work_count", "shared_work_ids"],
        [
            [
                c.author_id,
                graph.authors[c.author_id].display_name,
                str(c.shared_work_count),
                ",".join(c.shared_work_ids),
            ]
            for c in network
        ],
    )
    written.append(coauthors_tsv)

    focus_tsv = out / "focus_areas.tsv"
    _write_tsv(
        focus_tsv,
        ["label", "score"],
        [[label, repr(score)] for label, score in focus_areas(graph, author_id, k)],
    )
    written.append(focus_tsv)

    collaborators_tsv = out / "collaborators.tsv"
    _write_tsv(
        collaborators_tsv,
        ["author_id", "display_name", "score", "cited_by_count"],
        [
            [
                candidate_id,
                graph.authors[candidate_id].display_name,
                repr(score),
                str(graph.authors[candidate_id].cited_by_count),
            ]
            for candidate_id, score in recommend_collaborators(graph, author_id, k)
        ],
    )
    written.append(collaborators_tsv)

    network_png = out / "coauthor_network.png"
    render_coauthor_network(graph, author_id, network_png)
    written.append(network_png)

    focus_png = out / "focus_areas.png"
    render_focus_areas(graph, author_id, focus_png, k=k)
    written.append(focus_png)

    return written
