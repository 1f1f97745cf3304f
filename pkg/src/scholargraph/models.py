"""Entity records for the scholarly corpus: works, authors, institutions, venues.

Records are immutable value objects. ``validate_entity`` reports rule
violations as data rather than raising, so ingestion can skip bad records
and keep going.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, ClassVar, NamedTuple

from .errors import RecordStructureError

ERROR = "error"
WARNING = "warning"


class EntityKind(Enum):
    WORK = "work"
    AUTHOR = "author"
    INSTITUTION = "institution"
    VENUE = "venue"

    @property
    def plural(self) -> str:
        return self.value + "s"


class Violation(NamedTuple):
    field: str
    rule: str
    severity: str


@dataclass(frozen=True, slots=True)
class Concept:
    label: str
    score: float


@dataclass(frozen=True, slots=True)
class Work:
    kind: ClassVar[EntityKind] = EntityKind.WORK

    id: str
    title: str
    publication_year: int
    authors: tuple[str, ...]
    venue: str | None = None
    cited_by_count: int = 0
    doi: str | None = None
    mag_id: str | None = None
    is_open_access: bool = False
    concepts: tuple[Concept, ...] = ()
    abstract: str | None = None
    referenced_works: tuple[str, ...] = ()


@dataclass(frozen=True, slots=True)
class Author:
    kind: ClassVar[EntityKind] = EntityKind.AUTHOR

    id: str
    display_name: str
    affiliation: str | None = None
    works_count: int = 0
    cited_by_count: int = 0
    orcid: str | None = None


@dataclass(frozen=True, slots=True)
class Institution:
    kind: ClassVar[EntityKind] = EntityKind.INSTITUTION

    id: str
    display_name: str
    location: str | None = None
    homepage: str | None = None
    sector: str | None = None
    acronym: str | None = None
    wikipedia: str | None = None


@dataclass(frozen=True, slots=True)
class Venue:
    kind: ClassVar[EntityKind] = EntityKind.VENUE

    id: str
    display_name: str
    works_count: int = 0
    cited_by_count: int = 0


Entity = Work | Author | Institution | Venue


def display_text(record: Entity) -> str:
    """Human-facing label: title for works, display_name for everything else."""
    if isinstance(record, Work):
        return record.title
    return record.display_name


# ---------------------------------------------------------------------------
# Construction from parsed JSON objects
# ---------------------------------------------------------------------------


def _str_field(obj: dict, name: str, default: str = "") -> str:
    value = obj.get(name, default)
    if value is None:
        return default
    if not isinstance(value, str):
        raise RecordStructureError(name, f"expected string, got {type(value).__name__}")
    return value


def _opt_str(obj: dict, name: str) -> str | None:
    value = obj.get(name)
    if value is None:
        return None
    if not isinstance(value, str):
        raise RecordStructureError(name, f"expected string, got {type(value).__name__}")
    return value


def _int_field(obj: dict, name: str, default: int = 0) -> int:
    value = obj.get(name, default)
    if value is None:
        return default
    if isinstance(value, bool) or not isinstance(value, int):
        raise RecordStructureError(name, f"expected integer, got {type(value).__name__}")
    return value


def _bool_field(obj: dict, name: str, default: bool = False) -> bool:
    value = obj.get(name, default)
    if value is None:
        return default
    if not isinstance(value, bool):
        raise RecordStructureError(name, f"expected boolean, got {type(value).__name__}")
    return value


def _str_list(obj: dict, name: str) -> tuple[str, ...]:
    value = obj.get(name, [])
    if value is None:
        return ()
    if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
        raise RecordStructureError(name, "expected list of strings")
    return tuple(value)


def _concept_list(obj: dict) -> tuple[Concept, ...]:
    value = obj.get("concepts", [])
    if value is None:
        return ()
    if not isinstance(value, list):
        raise RecordStructureError("concepts", "expected list of {label, score} objects")
    out = []
    for item in value:
        if not isinstance(item, dict) or not isinstance(item.get("label"), str):
            raise RecordStructureError("concepts", "expected list of {label, score} objects")
        score = item.get("score")
        if isinstance(score, bool) or not isinstance(score, (int, float)):
            raise RecordStructureError("concepts", "score must be a number")
        out.append(Concept(label=item["label"], score=float(score)))
    return tuple(out)


def work_from_dict(obj: dict) -> Work:
    return Work(
        id=_str_field(obj, "id"),
        title=_str_field(obj, "title"),
        publication_year=_int_field(obj, "publication_year"),
        authors=_str_list(obj, "authors"),
        venue=_opt_str(obj, "venue"),
        cited_by_count=_int_field(obj, "cited_by_count"),
        doi=_opt_str(obj, "doi"),
        mag_id=_opt_str(obj, "mag_id"),
        is_open_access=_bool_field(obj, "is_open_access"),
        concepts=_concept_list(obj),
        abstract=_opt_str(obj, "abstract"),
        referenced_works=_str_list(obj, "referenced_works"),
    )


def author_from_dict(obj: dict) -> Author:
    return Author(
        id=_str_field(obj, "id"),
        display_name=_str_field(obj, "display_name"),
        affiliation=_opt_str(obj, "affiliation"),
        works_count=_int_field(obj, "works_count"),
        cited_by_count=_int_field(obj, "cited_by_count"),
        orcid=_opt_str(obj, "orcid"),
    )


def institution_from_dict(obj: dict) -> Institution:
    return Institution(
        id=_str_field(obj, "id"),
        display_name=_str_field(obj, "display_name"),
        location=_opt_str(obj, "location"),
        homepage=_opt_str(obj, "homepage"),
        sector=_opt_str(obj, "sector"),
        acronym=_opt_str(obj, "acronym"),
        wikipedia=_opt_str(obj, "wikipedia"),
    )


def venue_from_dict(obj: dict) -> Venue:
    return Venue(
        id=_str_field(obj, "id"),
        display_name=_str_field(obj, "display_name"),
        works_count=_int_field(obj, "works_count"),
        cited_by_count=_int_field(obj, "cited_by_count"),
    )


FROM_DICT = {
    EntityKind.WORK: work_from_dict,
    EntityKind.AUTHOR: author_from_dict,
    EntityKind.INSTITUTION: institution_from_dict,
    EntityKind.VENUE: venue_from_dict,
}


def entity_to_dict(record: Entity) -> dict[str, Any]:
    """Plain-JSON form of a record; optional fields absent when None."""
    if isinstance(record, Work):
        out: dict[str, Any] = {
            "id": record.id,
            "title": record.title,
            "publication_year": record.publication_year,
            "authors": list(record.authors),
            "cited_by_count": record.cited_by_count,
            "is_open_access": record.is_open_access,
            "concepts": [{"label": c.label, "score": c.score} for c in record.concepts],
            "referenced_works": list(record.referenced_works),
        }
        for name in ("venue", "doi", "mag_id", "abstract"):
            value = getattr(record, name)
            if value is not None:
                out[name] = value
        return out
    if isinstance(record, Author):
        out = {
            "id": record.id,
            "display_name": record.display_name,
            "works_count": record.works_count,
            "cited_by_count": record.cited_by_count,
        }
        for name in ("affiliation", "orcid"):
            value = getattr(record, name)
            if value is not None:
                out[name] = value
        return out
    if isinstance(record, Institution):
        out = {"id": record.id, "display_name": record.display_name}
        for name in ("location", "homepage", "sector", "acronym", "wikipedia"):
            value = getattr(record, name)
            if value is not None:
                out[name] = value
        return out
    if isinstance(record, Venue):
        return {
            "id": record.id,
            "display_name": record.display_name,
            "works_count": record.works_count,
            "cited_by_count": record.cited_by_count,
        }
    raise TypeError(f"not an entity record: {type(record).__name__}")


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def _check_id_token(value: str, field: str, out: list[Violation]) -> None:
    if not value:
        out.append(Violation(field, "non-empty", ERROR))
    elif any(ch.isspace() for ch in value):
        out.append(Violation(field, "no-whitespace", ERROR))


def _validate_work(record: Work, out: list[Violation]) -> None:
    if not record.title:
        out.append(Violation("title", "non-empty", ERROR))
    if record.publication_year < 1800:
        out.append(Violation("publication_year", "year-range", ERROR))
    if not record.authors:
        out.append(Violation("authors", "non-empty", ERROR))
    if len(set(record.authors)) != len(record.authors):
        out.append(Violation("authors", "no-duplicates", ERROR))
    for ref in record.authors:
        _check_id_token(ref, "authors", out)
    if record.venue is not None:
        _check_id_token(record.venue, "venue", out)
    if record.cited_by_count < 0:
        out.append(Violation("cited_by_count", "non-negative", ERROR))
    labels = [c.label for c in record.concepts]
    if len(set(labels)) != len(labels):
        out.append(Violation("concepts", "unique-labels", ERROR))
    for concept in record.concepts:
        if not concept.label:
            out.append(Violation("concepts", "non-empty", ERROR))
        elif concept.label != concept.label.lower():
            out.append(Violation("concepts", "lowercase", ERROR))
        if not 0.0 <= concept.score <= 1.0:
            out.append(Violation("concepts", "score-range", ERROR))
    for ref in record.referenced_works:
        _check_id_token(ref, "referenced_works", out)
        if ref == record.id:
            out.append(Violation("referenced_works", "no-self-reference", ERROR))


def _validate_author(record: Author, out: list[Violation]) -> None:
    if not record.display_name:
        out.append(Violation("display_name", "non-empty", ERROR))
    if record.affiliation is not None:
        _check_id_token(record.affiliation, "affiliation", out)
    if record.works_count < 0:
        out.append(Violation("works_count", "non-negative", ERROR))
    if record.cited_by_count < 0:
        out.append(Violation("cited_by_count", "non-negative", ERROR))


def validate_entity(record: Entity) -> list[Violation]:
    """Check every record-local invariant; an empty list means valid.

    Cross-record rules (dangling references, citation year ordering) are
    corpus-level and reported during snapshot assembly instead.
    """
    out: list[Violation] = []
    _check_id_token(record.id, "id", out)
    if isinstance(record, Work):
        _validate_work(record, out)
    elif isinstance(record, Author):
        _validate_author(record, out)
    elif isinstance(record, (Institution, Venue)):
        if not record.display_name:
            out.append(Violation("display_name", "non-empty", ERROR))
        if isinstance(record, Venue):
            if record.works_count < 0:
                out.append(Violation("works_count", "non-negative", ERROR))
            if record.cited_by_count < 0:
                out.append(Violation("cited_by_count", "non-negative", ERROR))
    else:
        raise TypeError(f"not an entity record: {type(record).__name__}")
    return out
