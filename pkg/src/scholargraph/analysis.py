"""Analytics over the co-authorship and citation structure of the graph:
shortest authorship paths, co-author networks, focus areas, work similarity,
and common connections.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import NotFoundError, SameAuthorError
from .graph import KnowledgeGraph
from .models import EntityKind
from .search import tokenize


@dataclass(frozen=True)
class AuthorshipPath:
    """Alternating author/work chain; always starts and ends with an author."""

    nodes: tuple[str, ...]

    @property
    def hops(self) -> int:
        return len(self.nodes) - 1

    @property
    def coauthor_steps(self) -> int:
        return self.hops // 2


@dataclass(frozen=True)
class Coauthor:
    author_id: str
    shared_work_count: int
    shared_work_ids: tuple[str, ...]


def _require_author(graph: KnowledgeGraph, author_id: str) -> None:
    if author_id not in graph.authors:
        raise NotFoundError(EntityKind.AUTHOR, author_id)


def shortest_authorship_path(
    graph: KnowledgeGraph, from_id: str, to_id: str
) -> AuthorshipPath | None:
    """Minimum-hop author-work-author chain between two authors, or None.

    Breadth-first search over authored edges only. Expanding sorted
    adjacency in FIFO order and keeping first-reached parents makes the
    returned chain the lexicographically smallest among all minimum-hop
    paths. ``from_id == to_id`` yields the single-node path.
    """
    _require_author(graph, from_id)
    _require_author(graph, to_id)
    if from_id == to_id:
        return AuthorshipPath(nodes=(from_id,))

    work_parent: dict[str, str] = {}  # work id -> author that reached it
    author_parent: dict[str, str] = {from_id: ""}  # author id -> work that reached it
    frontier = [from_id]
    while frontier:
        discovered_works = []
        for author_id in frontier:
            for work_id in graph.author_works.get(author_id, ()):
                if work_id not in work_parent:
                    work_parent[work_id] = author_id
                    discovered_works.append(work_id)
        frontier = []
        for work_id in discovered_works:
            for author_id in graph.work_authors.get(work_id, ()):
                if author_id not in author_parent:
                    author_parent[author_id] = work_id
                    if author_id == to_id:
                        return _reconstruct(work_parent, author_parent, from_id, to_id)
                    frontier.append(author_id)
    return None


def _reconstruct(
    work_parent: dict[str, str],
    author_parent: dict[str, str],
    from_id: str,
    to_id: str,
) -> AuthorshipPath:
    nodes = [to_id]
    author_id = to_id
    while author_id != from_id:
        work_id = author_parent[author_id]
        nodes.append(work_id)
        author_id = work_parent[work_id]
        nodes.append(author_id)
    nodes.reverse()
    return AuthorshipPath(nodes=tuple(nodes))


def coauthor_network(graph: KnowledgeGraph, author_id: str) -> list[Coauthor]:
    """Authors sharing at least one work, weighted by shared-work count."""
    _require_author(graph, author_id)
    shared: dict[str, list[str]] = {}
    for work_id in graph.author_works.get(author_id, ()):
        for other in graph.work_authors.get(work_id, ()):
            if other != author_id:
                shared.setdefault(other, []).append(work_id)
    network = [
        Coauthor(other, len(works), tuple(sorted(works)))
        for other, works in shared.items()
    ]
    network.sort(key=lambda c: (-c.shared_work_count, c.author_id))
    return network


def focus_areas(graph: KnowledgeGraph, author_id: str, k: int) -> list[tuple[str, float]]:
    """Top-k concept labels by score summed over the author's works."""
    if k < 1:
        raise ValueError("k must be >= 1")
    _require_author(graph, author_id)
    totals: dict[str, float] = {}
    for work_id in graph.author_works.get(author_id, ()):
        for concept in graph.works[work_id].concepts:
            totals[concept.label] = totals.get(concept.label, 0.0) + concept.score
    ranked = sorted(totals.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:k]


def weighted_jaccard(x: Mapping[str, float], y: Mapping[str, float]) -> float:
    """sum(min) / sum(max) over the union of keys; 0.0 when the union weight is 0.

    The union is accumulated in sorted key order so the float result is
    identical across runs (set order depends on hash randomization).
    """
    numerator = 0.0
    denominator = 0.0
    for key in sorted(x.keys() | y.keys()):
        a = x.get(key, 0.0)
        b = y.get(key, 0.0)
        numerator += min(a, b)
        denominator += max(a, b)
    if denominator == 0.0:
        return 0.0
    return numerator / denominator


def _concept_vector(graph: KnowledgeGraph, work_id: str) -> dict[str, float]:
    vector: dict[str, float] = {}
    for concept in graph.works[work_id].concepts:
        vector.setdefault(concept.label, concept.score)
    return vector


def similar_works(graph: KnowledgeGraph, work_id: str, k: int) -> list[tuple[str, float]]:
    """Top-k most similar works by weighted Jaccard over concept vectors.

    Works without concepts on both sides fall back to plain Jaccard over
    title tokens. Zero-similarity works and the work itself are excluded.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if work_id not in graph.works:
        raise NotFoundError(EntityKind.WORK, work_id)

    scored: list[tuple[str, float]] = []
    work = graph.works[work_id]
    if work.concepts:
        vector = _concept_vector(graph, work_id)
        candidates: set[str] = set()
        for label in vector:
            candidates.update(graph.concept_postings.get(label, ()))
        candidates.discard(work_id)
        for other_id in candidates:
            score = weighted_jaccard(vector, _concept_vector(graph, other_id))
            if score > 0.0:
                scored.append((other_id, score))
    else:
        tokens = set(tokenize(work.title))
        for other_id, other in graph.works.items():
            if other_id == work_id or other.concepts:
                continue
            other_tokens = set(tokenize(other.title))
            union = tokens | other_tokens
            if not union:
                continue
            score = len(tokens & other_tokens) / len(union)
            if score > 0.0:
                scored.append((other_id, score))

    scored.sort(key=lambda item: (-item[1], item[0]))
    return scored[:k]


def common_connections(graph: KnowledgeGraph, a: str, b: str) -> list[str]:
    """Co-authors shared by two distinct authors, sorted ascending."""
    _require_author(graph, a)
    _require_author(graph, b)
    if a == b:
        raise SameAuthorError(f"{a!r} given for both sides")
    return sorted(_coauthor_ids(graph, a) & _coauthor_ids(graph, b))


def _coauthor_ids(graph: KnowledgeGraph, author_id: str) -> set[str]:
    out: set[str] = set()
    for work_id in graph.author_works.get(author_id, ()):
        out.update(graph.work_authors.get(work_id, ()))
    out.discard(author_id)
    return out
