"""Tokenized inverted index and conjunctive prefix search over entity text.

Matching rule: an entity matches when every query token matches one of the
entity's indexed-field tokens — the final query token by prefix (supports
search-as-you-type), all others exactly. No stemming, no stop words, no
fuzzy matching; this keeps the behavior brute-force verifiable.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable

from .errors import EmptyQueryError, InvalidSortError
from .graph import KnowledgeGraph
from .models import Author, Entity, EntityKind, Institution, Venue, Work, display_text


def tokenize(text: str) -> list[str]:
    """Split on any non-alphanumeric character and lowercase each run."""
    tokens: list[str] = []
    current: list[str] = []
    for ch in text:
        if ch.isalnum():
            current.append(ch)
        elif current:
            tokens.append("".join(current).lower())
            current.clear()
    if current:
        tokens.append("".join(current).lower())
    return tokens


class SortOrder(Enum):
    RELEVANCE = "relevance"
    TITLE = "title"
    DATE = "date"
    CITATIONS = "citations"


# Date needs a publication year; Citations needs a cited_by_count field,
# which institutions do not carry.
VALID_SORTS: dict[EntityKind, frozenset[SortOrder]] = {
    EntityKind.WORK: frozenset(SortOrder),
    EntityKind.AUTHOR: frozenset({SortOrder.RELEVANCE, SortOrder.TITLE, SortOrder.CITATIONS}),
    EntityKind.INSTITUTION: frozenset({SortOrder.RELEVANCE, SortOrder.TITLE}),
    EntityKind.VENUE: frozenset({SortOrder.RELEVANCE, SortOrder.TITLE, SortOrder.CITATIONS}),
}


@dataclass(frozen=True)
class SearchQuery:
    kind: EntityKind
    text: str
    page: int = 1
    page_size: int = 10
    sort: SortOrder = SortOrder.RELEVANCE


@dataclass
class SearchResultPage:
    total_hits: int
    page: int
    items: list[dict[str, Any]]


@dataclass
class KindIndex:
    postings: dict[str, tuple[str, ...]]
    terms: list[str]  # sorted vocabulary, for prefix scans
    ranks: dict[SortOrder, dict[str, int]]


@dataclass
class SearchIndex:
    kinds: dict[EntityKind, KindIndex]
    institution_tokens: dict[str, frozenset[str]]


def _indexed_tokens(record: Entity) -> set[str]:
    if isinstance(record, Work):
        return set(tokenize(record.title))
    if isinstance(record, Institution):
        tokens = set(tokenize(record.display_name))
        if record.acronym:
            tokens.update(tokenize(record.acronym))
        return tokens
    return set(tokenize(record.display_name))


def _cited_by(record: Entity) -> int:
    return getattr(record, "cited_by_count", 0)


def _rank_map(ids: Iterable[str], key) -> dict[str, int]:
    return {entity_id: rank for rank, entity_id in enumerate(sorted(ids, key=key))}


def build_index(graph: KnowledgeGraph) -> SearchIndex:
    """Index every entity under each token of its searchable fields."""
    kinds: dict[EntityKind, KindIndex] = {}
    for kind in EntityKind:
        entities = graph.entities(kind)
        postings_accum: dict[str, list[str]] = {}
        for entity_id in sorted(entities):
            for token in _indexed_tokens(entities[entity_id]):
                postings_accum.setdefault(token, []).append(entity_id)
        postings = {term: tuple(ids) for term, ids in sorted(postings_accum.items())}

        ranks = {
            SortOrder.RELEVANCE: _rank_map(
                entities, key=lambda i: (-_cited_by(entities[i]), i)
            ),
            SortOrder.TITLE: _rank_map(
                entities, key=lambda i: (display_text(entities[i]).lower(), i)
            ),
        }
        ranks[SortOrder.CITATIONS] = ranks[SortOrder.RELEVANCE]
        if kind is EntityKind.WORK:
            ranks[SortOrder.DATE] = _rank_map(
                entities, key=lambda i: (-entities[i].publication_year, i)
            )
        kinds[kind] = KindIndex(postings=postings, terms=list(postings), ranks=ranks)

    institution_tokens = {
        inst_id: frozenset(tokenize(inst.display_name))
        for inst_id, inst in graph.institutions.items()
    }
    return SearchIndex(kinds=kinds, institution_tokens=institution_tokens)


def _prefix_ids(ki: KindIndex, prefix: str) -> set[str]:
    ids: set[str] = set()
    start = bisect_left(ki.terms, prefix)
    for term in ki.terms[start:]:
        if not term.startswith(prefix):
            break
        ids.update(ki.postings[term])
    return ids


def match_ids(index: SearchIndex, kind: EntityKind, tokens: list[str]) -> set[str]:
    """Ids matching all tokens: the last by prefix, the rest exactly."""
    ki = index.kinds[kind]
    hits = _prefix_ids(ki, tokens[-1])
    for token in tokens[:-1]:
        if not hits:
            return hits
        hits &= set(ki.postings.get(token, ()))
    return hits


def search(index: SearchIndex, graph: KnowledgeGraph, query: SearchQuery) -> SearchResultPage:
    """Run one search query; raises EmptyQueryError / InvalidSortError."""
    total, ids = search_ids(index, query.kind, query.text, query.sort)
    if query.page < 1 or query.page_size < 1:
        raise ValueError("page and page_size must be >= 1")
    start = (query.page - 1) * query.page_size
    rows = [result_row(graph, query.kind, i) for i in ids[start : start + query.page_size]]
    return SearchResultPage(total_hits=total, page=query.page, items=rows)


def search_ids(
    index: SearchIndex, kind: EntityKind, text: str, sort: SortOrder = SortOrder.RELEVANCE
) -> tuple[int, list[str]]:
    """Full sorted hit list for a query (pagination is applied by callers)."""
    tokens = tokenize(text)
    if not tokens:
        raise EmptyQueryError("query has no searchable tokens")
    if sort not in VALID_SORTS[kind]:
        raise InvalidSortError(f"sort {sort.value!r} is not defined for {kind.plural}")
    hits = match_ids(index, kind, tokens)
    rank = index.kinds[kind].ranks[sort]
    ids = sorted(hits, key=rank.__getitem__)
    return len(ids), ids


_SNIPPET_CHARS = 200


def _snippet(abstract: str | None) -> str | None:
    if abstract is None:
        return None
    if len(abstract) <= _SNIPPET_CHARS:
        return abstract
    return abstract[:_SNIPPET_CHARS] + "…"


def result_row(graph: KnowledgeGraph, kind: EntityKind, entity_id: str) -> dict[str, Any]:
    """Display row for results lists, per entity kind."""
    record = graph.get_entity(kind, entity_id)
    if isinstance(record, Work):
        venue = None
        if record.venue is not None and record.venue in graph.venues:
            venue = {"id": record.venue, "display_name": graph.venues[record.venue].display_name}
        authors = [
            {
                "id": author_id,
                "display_name": graph.authors[author_id].display_name
                if author_id in graph.authors
                else None,
            }
            for author_id in record.authors
        ]
        return {
            "id": record.id,
            "title": record.title,
            "publication_year": record.publication_year,
            "venue": venue,
            "authors": authors,
            "cited_by_count": record.cited_by_count,
            "is_open_access": record.is_open_access,
            "abstract_snippet": _snippet(record.abstract),
        }
    if isinstance(record, Author):
        institution = None
        if record.affiliation is not None and record.affiliation in graph.institutions:
            institution = {
                "id": record.affiliation,
                "display_name": graph.institutions[record.affiliation].display_name,
            }
        return {
            "id": record.id,
            "display_name": record.display_name,
            "institution": institution,
            "works_count": record.works_count,
            "cited_by_count": record.cited_by_count,
            "orcid": record.orcid,
        }
    if isinstance(record, Institution):
        return {
            "id": record.id,
            "display_name": record.display_name,
            "location": record.location,
            "homepage": record.homepage,
            "sector": record.sector,
            "acronym": record.acronym,
        }
    assert isinstance(record, Venue)
    return {
        "id": record.id,
        "display_name": record.display_name,
        "works_count": record.works_count,
        "cited_by_count": record.cited_by_count,
    }


@dataclass(frozen=True)
class AuthorCandidate:
    id: str
    display_name: str
    institution_id: str | None
    institution_name: str | None
    works_count: int
    cited_by_count: int
    affiliation_match: bool

    def to_dict(self) -> dict[str, Any]:
        institution = None
        if self.institution_id is not None:
            institution = {"id": self.institution_id, "display_name": self.institution_name}
        return {
            "id": self.id,
            "display_name": self.display_name,
            "institution": institution,
            "works_count": self.works_count,
            "cited_by_count": self.cited_by_count,
            "affiliation_match": self.affiliation_match,
        }


def disambiguate_author(
    index: SearchIndex,
    graph: KnowledgeGraph,
    name: str,
    affiliation: str | None = None,
) -> list[AuthorCandidate]:
    """Ranked author candidates for a name, optionally biased by affiliation.

    Name tokens follow the search matching rule (last token by prefix).
    An affiliation matches when all of its tokens appear among the
    institution's display-name tokens. Ranking: affiliation match first,
    then works_count descending, then id.
    """
    tokens = tokenize(name)
    if not tokens:
        raise EmptyQueryError("name has no searchable tokens")
    affiliation_tokens = set(tokenize(affiliation or ""))

    candidates = []
    for author_id in match_ids(index, EntityKind.AUTHOR, tokens):
        author = graph.authors[author_id]
        institution_id = None
        institution_name = None
        matched = False
        if author.affiliation is not None and author.affiliation in graph.institutions:
            institution_id = author.affiliation
            institution_name = graph.institutions[institution_id].display_name
            if affiliation_tokens:
                matched = affiliation_tokens <= index.institution_tokens[institution_id]
        candidates.append(
            AuthorCandidate(
                id=author_id,
                display_name=author.display_name,
                institution_id=institution_id,
                institution_name=institution_name,
                works_count=author.works_count,
                cited_by_count=author.cited_by_count,
                affiliation_match=matched,
            )
        )
    candidates.sort(key=lambda c: (not c.affiliation_match, -c.works_count, c.id))
    return candidates
