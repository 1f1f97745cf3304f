"""In-memory knowledge graph: typed adjacency over works, authors,
institutions, and venues.

The graph is immutable once built. All adjacency lists are tuples sorted
ascending by id, which makes iteration and every downstream tie-break
deterministic. Edges whose target is missing from the snapshot are dropped
and counted, never fatal.
"""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field
from enum import Enum

from .errors import NotFoundError
from .ingest import Snapshot
from .models import Author, Entity, EntityKind, Institution, Venue, Work

logger = logging.getLogger(__name__)


class EdgeKind(Enum):
    AUTHORED = "authored"
    PUBLISHED_IN = "published_in"
    AFFILIATED_WITH = "affiliated_with"
    CITES = "cites"
    HAS_CONCEPT = "has_concept"


class Direction(Enum):
    OUT = "out"
    IN = "in"


@dataclass
class BuildStats:
    node_count: int = 0
    nodes_by_kind: dict[EntityKind, int] = field(default_factory=dict)
    edge_count: int = 0
    edges_by_kind: dict[EdgeKind, int] = field(default_factory=dict)
    dropped_dangling: int = 0
    # Build telemetry, not a property of the finished graph: a persisted
    # graph reloads with zero corrections because the fix is already applied.
    works_count_corrections: int = field(default=0, compare=False)

    def summary(self) -> str:
        return (
            f"{self.node_count} nodes, {self.edge_count} edges, "
            f"{self.dropped_dangling} dangling edges dropped"
        )


Adjacency = dict[str, tuple[str, ...]]


@dataclass
class KnowledgeGraph:
    works: dict[str, Work]
    authors: dict[str, Author]
    institutions: dict[str, Institution]
    venues: dict[str, Venue]
    author_works: Adjacency
    work_authors: Adjacency
    work_venue: Adjacency
    venue_works: Adjacency
    author_institution: Adjacency
    institution_authors: Adjacency
    cites_out: Adjacency
    cites_in: Adjacency
    work_concepts: Adjacency
    concept_postings: Adjacency
    max_year: int
    stats: BuildStats

    def entities(self, kind: EntityKind) -> dict[str, Entity]:
        return getattr(self, kind.plural)

    def get_entity(self, kind: EntityKind, entity_id: str) -> Entity:
        try:
            return self.entities(kind)[entity_id]
        except KeyError:
            raise NotFoundError(kind, entity_id) from None

    def neighbors(
        self,
        kind: EntityKind,
        entity_id: str,
        edge: EdgeKind,
        direction: Direction = Direction.OUT,
    ) -> tuple[str, ...]:
        """Sorted neighbor ids of an entity along one edge kind.

        Direction only matters for CITES (OUT = works cited by this work,
        IN = works citing it); the bidirectional kinds ignore it.
        """
        if entity_id not in self.entities(kind):
            raise NotFoundError(kind, entity_id)
        table = self._table_for(kind, edge, direction)
        return table.get(entity_id, ())

    def _table_for(self, kind: EntityKind, edge: EdgeKind, direction: Direction) -> Adjacency:
        if edge is EdgeKind.AUTHORED:
            if kind is EntityKind.AUTHOR:
                return self.author_works
            if kind is EntityKind.WORK:
                return self.work_authors
        elif edge is EdgeKind.PUBLISHED_IN:
            if kind is EntityKind.WORK:
                return self.work_venue
            if kind is EntityKind.VENUE:
                return self.venue_works
        elif edge is EdgeKind.AFFILIATED_WITH:
            if kind is EntityKind.AUTHOR:
                return self.author_institution
            if kind is EntityKind.INSTITUTION:
                return self.institution_authors
        elif edge is EdgeKind.CITES:
            if kind is EntityKind.WORK:
                return self.cites_out if direction is Direction.OUT else self.cites_in
        elif edge is EdgeKind.HAS_CONCEPT:
            if kind is EntityKind.WORK:
                return self.work_concepts
        raise ValueError(f"edge {edge.value} is not defined for kind {kind.value}")


def _freeze(accum: dict[str, list[str]]) -> Adjacency:
    """Sorted, duplicate-free tuple adjacency in sorted key order."""
    return {key: tuple(sorted(set(values))) for key, values in sorted(accum.items())}


def build_graph(snapshot: Snapshot) -> KnowledgeGraph:
    """Materialize all resolvable edges from a snapshot.

    Deterministic: the same snapshot always yields an identical graph.
    Author works_count is recomputed from authored-edge degree; concept
    entries with score 0 carry no signal and produce no edge.
    """
    works = {w.id: w for w in snapshot.works}
    authors = {a.id: a for a in snapshot.authors}
    institutions = {i.id: i for i in snapshot.institutions}
    venues = {v.id: v for v in snapshot.venues}

    author_works: dict[str, list[str]] = {}
    work_authors: dict[str, list[str]] = {}
    work_venue: dict[str, list[str]] = {}
    venue_works: dict[str, list[str]] = {}
    author_institution: dict[str, list[str]] = {}
    institution_authors: dict[str, list[str]] = {}
    cites_out: dict[str, list[str]] = {}
    cites_in: dict[str, list[str]] = {}
    work_concepts: dict[str, list[str]] = {}
    concept_postings: dict[str, list[str]] = {}
    dropped = 0

    for work_id in sorted(works):
        work = works[work_id]
        for author_id in work.authors:
            if author_id in authors:
                work_authors.setdefault(work_id, []).append(author_id)
                author_works.setdefault(author_id, []).append(work_id)
            else:
                dropped += 1
        if work.venue is not None:
            if work.venue in venues:
                work_venue.setdefault(work_id, []).append(work.venue)
                venue_works.setdefault(work.venue, []).append(work_id)
            else:
                dropped += 1
        for ref in work.referenced_works:
            if ref in works:
                cites_out.setdefault(work_id, []).append(ref)
                cites_in.setdefault(ref, []).append(work_id)
            else:
                dropped += 1
        seen_labels = set()
        for concept in work.concepts:
            if concept.score <= 0.0 or concept.label in seen_labels:
                continue
            seen_labels.add(concept.label)
            work_concepts.setdefault(work_id, []).append(concept.label)
            concept_postings.setdefault(concept.label, []).append(work_id)

    for author_id in sorted(authors):
        affiliation = authors[author_id].affiliation
        if affiliation is None:
            continue
        if affiliation in institutions:
            author_institution.setdefault(author_id, []).append(affiliation)
            institution_authors.setdefault(affiliation, []).append(author_id)
        else:
            dropped += 1

    frozen_author_works = _freeze(author_works)
    corrections = 0
    for author_id in sorted(authors):
        degree = len(frozen_author_works.get(author_id, ()))
        if authors[author_id].works_count != degree:
            authors[author_id] = dataclasses.replace(authors[author_id], works_count=degree)
            corrections += 1

    work_authors_f = _freeze(work_authors)
    work_venue_f = _freeze(work_venue)
    author_institution_f = _freeze(author_institution)
    cites_out_f = _freeze(cites_out)
    work_concepts_f = _freeze(work_concepts)

    edges_by_kind = {
        EdgeKind.AUTHORED: sum(len(v) for v in work_authors_f.values()),
        EdgeKind.PUBLISHED_IN: sum(len(v) for v in work_venue_f.values()),
        EdgeKind.AFFILIATED_WITH: sum(len(v) for v in author_institution_f.values()),
        EdgeKind.CITES: sum(len(v) for v in cites_out_f.values()),
        EdgeKind.HAS_CONCEPT: sum(len(v) for v in work_concepts_f.values()),
    }
    nodes_by_kind = {
        EntityKind.WORK: len(works),
        EntityKind.AUTHOR: len(authors),
        EntityKind.INSTITUTION: len(institutions),
        EntityKind.VENUE: len(venues),
    }
    stats = BuildStats(
        node_count=sum(nodes_by_kind.values()),
        nodes_by_kind=nodes_by_kind,
        edge_count=sum(edges_by_kind.values()),
        edges_by_kind=edges_by_kind,
        dropped_dangling=dropped,
        works_count_corrections=corrections,
    )
    if dropped:
        logger.info("dropped %d dangling edges during graph build", dropped)

    return KnowledgeGraph(
        works=works,
        authors=dict(sorted(authors.items())),
        institutions=dict(sorted(institutions.items())),
        venues=dict(sorted(venues.items())),
        author_works=frozen_author_works,
        work_authors=work_authors_f,
        work_venue=work_venue_f,
        venue_works=_freeze(venue_works),
        author_institution=author_institution_f,
        institution_authors=_freeze(institution_authors),
        cites_out=cites_out_f,
        cites_in=_freeze(cites_in),
        work_concepts=work_concepts_f,
        concept_postings=_freeze(concept_postings),
        max_year=snapshot.max_year,
        stats=stats,
    )
