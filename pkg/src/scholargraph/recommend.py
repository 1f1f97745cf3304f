"""Non-ML recommendations: same-institution colleagues, trending related
sub-topics, and expertise-overlap collaborator ranking.
"""

from __future__ import annotations

from .analysis import _coauthor_ids, focus_areas, weighted_jaccard
from .errors import NotFoundError
from .graph import KnowledgeGraph
from .models import EntityKind

FOCUS_SET_SIZE = 5  # labels defining an author's field for trending topics
FOCUS_VECTOR_SIZE = 10  # labels defining expertise for collaborator scoring


def same_institution_researchers(
    graph: KnowledgeGraph, author_id: str
) -> list[tuple[str, int]]:
    """Other authors at the author's institution, by citations descending."""
    if author_id not in graph.authors:
        raise NotFoundError(EntityKind.AUTHOR, author_id)
    affiliations = graph.author_institution.get(author_id, ())
    if not affiliations:
        return []
    colleagues = [
        (other, graph.authors[other].cited_by_count)
        for other in graph.institution_authors.get(affiliations[0], ())
        if other != author_id
    ]
    colleagues.sort(key=lambda item: (-item[1], item[0]))
    return colleagues


def trending_subtopics(
    graph: KnowledgeGraph, author_id: str, window_years: int = 3, k: int = 10
) -> list[tuple[str, int]]:
    """Concept labels recently co-occurring with the author's focus areas.

    A label qualifies when some work inside the window [max_year -
    window_years + 1, max_year] carries both it and one of the author's
    top focus labels; its popularity is the number of in-window works
    carrying it at all. The author's own focus labels are excluded.
    """
    if window_years < 1 or k < 1:
        raise ValueError("window_years and k must be >= 1")
    if author_id not in graph.authors:
        raise NotFoundError(EntityKind.AUTHOR, author_id)

    focus = {label for label, _ in focus_areas(graph, author_id, FOCUS_SET_SIZE)}
    lower_bound = graph.max_year - window_years + 1

    def in_window(work_id: str) -> bool:
        return lower_bound <= graph.works[work_id].publication_year <= graph.max_year

    candidates: set[str] = set()
    for label in focus:
        for work_id in graph.concept_postings.get(label, ()):
            if not in_window(work_id):
                continue
            candidates.update(graph.work_concepts.get(work_id, ()))
    candidates -= focus

    popular = [
        (label, sum(1 for w in graph.concept_postings.get(label, ()) if in_window(w)))
        for label in candidates
    ]
    popular.sort(key=lambda item: (-item[1], item[0]))
    return popular[:k]


def recommend_collaborators(
    graph: KnowledgeGraph, author_id: str, k: int = 10
) -> list[tuple[str, float]]:
    """Rank would-be collaborators by focus-area overlap.

    Candidates are all authors except the input author and their existing
    co-authors; the score is the weighted Jaccard between the two authors'
    focus-area vectors. Zero-overlap candidates are dropped. Ties break by
    citations descending, then id.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if author_id not in graph.authors:
        raise NotFoundError(EntityKind.AUTHOR, author_id)

    own_vector = dict(focus_areas(graph, author_id, FOCUS_VECTOR_SIZE))
    excluded = _coauthor_ids(graph, author_id)
    excluded.add(author_id)

    scored = []
    for candidate_id in graph.authors:
        if candidate_id in excluded:
            continue
        vector = dict(focus_areas(graph, candidate_id, FOCUS_VECTOR_SIZE))
        score = weighted_jaccard(own_vector, vector)
        if score > 0.0:
            scored.append((candidate_id, score))
    scored.sort(
        key=lambda item: (-item[1], -graph.authors[item[0]].cited_by_count, item[0])
    )
    return scored[:k]
