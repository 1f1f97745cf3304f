"""Snapshot and delta ingestion: JSONL parsing, abstract reconstruction, upserts.

A snapshot directory holds one UTF-8 JSONL file per entity kind
(works.jsonl, authors.jsonl, institutions.jsonl, venues.jsonl). Delta
directories use the same format and may omit kinds that have no changes.
Records that fail validation are skipped and reported; dangling references
are reported but the referencing record is kept.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .errors import DuplicatePositionError, RecordStructureError, UnreadableFileError
from .models import (
    ERROR,
    Author,
    Entity,
    EntityKind,
    FROM_DICT,
    Institution,
    Venue,
    Violation,
    Work,
    validate_entity,
)

logger = logging.getLogger(__name__)

FILE_NAMES = {kind: f"{kind.plural}.jsonl" for kind in EntityKind}

_PREVIEW_CHARS = 80


@dataclass(frozen=True)
class MalformedLine:
    path: str
    line_no: int
    preview: str


@dataclass(frozen=True)
class SkippedRecord:
    path: str
    line_no: int
    kind: EntityKind
    entity_id: str
    violations: tuple[Violation, ...]


@dataclass(frozen=True)
class DanglingRef:
    work_id: str
    field: str
    target: str


@dataclass(frozen=True)
class CorpusWarning:
    entity_id: str
    field: str
    rule: str


@dataclass
class IngestReport:
    malformed: list[MalformedLine] = field(default_factory=list)
    skipped: list[SkippedRecord] = field(default_factory=list)
    dangling: list[DanglingRef] = field(default_factory=list)
    warnings: list[CorpusWarning] = field(default_factory=list)
    replaced_duplicates: list[tuple[EntityKind, str]] = field(default_factory=list)


@dataclass
class Snapshot:
    """Validated corpus, ready for graph building.

    Entity lists are kept sorted by id so snapshots built from the same
    records compare equal regardless of input order. ``source_paths`` and
    ``report`` are bookkeeping and excluded from equality.
    """

    works: list[Work]
    authors: list[Author]
    institutions: list[Institution]
    venues: list[Venue]
    max_year: int
    source_paths: list[str] = field(default_factory=list, compare=False)
    report: IngestReport = field(default_factory=IngestReport, compare=False, repr=False)

    def entities(self, kind: EntityKind) -> list[Entity]:
        return getattr(self, kind.plural)

    def counts(self) -> dict[EntityKind, int]:
        return {kind: len(self.entities(kind)) for kind in EntityKind}


def reconstruct_abstract(inverted: Mapping[str, Iterable[int]]) -> str:
    """Rebuild abstract text from a token -> positions map.

    Tokens are joined by single spaces in position order; gaps in the
    position sequence collapse without placeholders.
    """
    pairs: dict[int, str] = {}
    for token, positions in inverted.items():
        for pos in positions:
            if not isinstance(pos, int) or isinstance(pos, bool) or pos < 0:
                raise ValueError(f"invalid position {pos!r} for token {token!r}")
            if pos in pairs:
                raise DuplicatePositionError(
                    f"position {pos} claimed by both {pairs[pos]!r} and {token!r}"
                )
            pairs[pos] = token
    return " ".join(pairs[pos] for pos in sorted(pairs))


def _resolve_abstract(obj: dict, violations: list[Violation]) -> None:
    """Fold abstract_inverted_index into a plain abstract; plain string wins."""
    inverted = obj.pop("abstract_inverted_index", None)
    if obj.get("abstract") is not None or inverted is None:
        return
    if not isinstance(inverted, dict) or any(
        not isinstance(v, list) for v in inverted.values()
    ):
        violations.append(Violation("abstract_inverted_index", "structure", ERROR))
        return
    try:
        obj["abstract"] = reconstruct_abstract(inverted)
    except DuplicatePositionError:
        violations.append(Violation("abstract_inverted_index", "duplicate-position", ERROR))
    except ValueError:
        violations.append(Violation("abstract_inverted_index", "invalid-position", ERROR))


def _parse_file(
    kind: EntityKind, path: Path, report: IngestReport
) -> dict[str, Entity]:
    """Parse one JSONL file into an id -> record map (later lines win)."""
    try:
        fh = path.open("r", encoding="utf-8", newline="")
    except OSError as exc:
        raise UnreadableFileError(path, exc) from exc
    with fh:
        try:
            lines = list(fh)
        except UnicodeDecodeError as exc:
            raise UnreadableFileError(path, exc) from exc

    records: dict[str, Entity] = {}
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            report.malformed.append(MalformedLine(str(path), line_no, line[:_PREVIEW_CHARS]))
            continue
        if not isinstance(obj, dict):
            report.malformed.append(MalformedLine(str(path), line_no, line[:_PREVIEW_CHARS]))
            continue

        violations: list[Violation] = []
        if kind is EntityKind.WORK:
            _resolve_abstract(obj, violations)
        record = None
        if not violations:
            try:
                record = FROM_DICT[kind](obj)
            except RecordStructureError as exc:
                violations.append(Violation(exc.field, "type", ERROR))
        if record is not None:
            violations.extend(validate_entity(record))
        if any(v.severity == ERROR for v in violations):
            entity_id = obj.get("id") if isinstance(obj.get("id"), str) else ""
            report.skipped.append(
                SkippedRecord(str(path), line_no, kind, entity_id, tuple(violations))
            )
            continue
        assert record is not None
        if record.id in records:
            report.replaced_duplicates.append((kind, record.id))
        records[record.id] = record
    return records


def _corpus_checks(
    works: dict[str, Work],
    authors: dict[str, Author],
    institutions: dict[str, Institution],
    venues: dict[str, Venue],
    report: IngestReport,
) -> None:
    """Record dangling references and citation-year-order warnings."""
    for work in works.values():
        for ref in work.authors:
            if ref not in authors:
                report.dangling.append(DanglingRef(work.id, "authors", ref))
        if work.venue is not None and work.venue not in venues:
            report.dangling.append(DanglingRef(work.id, "venue", work.venue))
        for ref in work.referenced_works:
            if ref not in works:
                report.dangling.append(DanglingRef(work.id, "referenced_works", ref))
            elif work.publication_year < works[ref].publication_year:
                report.warnings.append(
                    CorpusWarning(work.id, "referenced_works", "citation-year-order")
                )
    for author in authors.values():
        if author.affiliation is not None and author.affiliation not in institutions:
            report.dangling.append(DanglingRef(author.id, "affiliation", author.affiliation))


def _assemble(
    maps: dict[EntityKind, dict[str, Entity]],
    source_paths: list[str],
    report: IngestReport,
) -> Snapshot:
    works = dict(sorted(maps[EntityKind.WORK].items()))
    authors = dict(sorted(maps[EntityKind.AUTHOR].items()))
    institutions = dict(sorted(maps[EntityKind.INSTITUTION].items()))
    venues = dict(sorted(maps[EntityKind.VENUE].items()))
    _corpus_checks(works, authors, institutions, venues, report)
    max_year = max((w.publication_year for w in works.values()), default=0)
    return Snapshot(
        works=list(works.values()),
        authors=list(authors.values()),
        institutions=list(institutions.values()),
        venues=list(venues.values()),
        max_year=max_year,
        source_paths=source_paths,
        report=report,
    )


def parse_snapshot(directory: str | Path) -> Snapshot:
    """Parse the four entity files under ``directory`` into a Snapshot.

    All four files must exist. Malformed lines and records with validation
    errors are skipped and listed in the snapshot's report.
    """
    directory = Path(directory)
    report = IngestReport()
    maps: dict[EntityKind, dict[str, Entity]] = {}
    paths: list[str] = []
    for kind in EntityKind:
        path = directory / FILE_NAMES[kind]
        if not path.is_file():
            raise UnreadableFileError(path, "no such file")
        maps[kind] = _parse_file(kind, path, report)
        paths.append(str(path))
    snapshot = _assemble(maps, paths, report)
    if report.malformed or report.skipped:
        logger.warning(
            "parsed %s with %d malformed lines, %d skipped records",
            directory,
            len(report.malformed),
            len(report.skipped),
        )
    return snapshot


def snapshot_from_records(
    works: Iterable[Work] = (),
    authors: Iterable[Author] = (),
    institutions: Iterable[Institution] = (),
    venues: Iterable[Venue] = (),
    source_paths: Iterable[str] = (),
) -> Snapshot:
    """Build a Snapshot from in-memory records (no validation, fresh report)."""
    maps: dict[EntityKind, dict[str, Entity]] = {
        EntityKind.WORK: {r.id: r for r in works},
        EntityKind.AUTHOR: {r.id: r for r in authors},
        EntityKind.INSTITUTION: {r.id: r for r in institutions},
        EntityKind.VENUE: {r.id: r for r in venues},
    }
    return _assemble(maps, list(source_paths), IngestReport())


@dataclass
class DeltaReport:
    """Per-kind outcome counts for one delta application."""

    inserted: dict[EntityKind, int]
    updated: dict[EntityKind, int]
    unchanged: dict[EntityKind, int]
    skipped: dict[EntityKind, int]
    malformed_lines: int

    @classmethod
    def empty(cls) -> "DeltaReport":
        zero = lambda: {kind: 0 for kind in EntityKind}  # noqa: E731
        return cls(zero(), zero(), zero(), zero(), 0)


def apply_update(base: Snapshot, delta_dir: str | Path) -> tuple[Snapshot, DeltaReport]:
    """Upsert delta records into ``base`` by id, whole-record replacement.

    A delta record equal in content to the base record counts as unchanged.
    Kinds without a file in ``delta_dir`` are treated as having no changes.
    Returns the new snapshot and the per-kind delta counts; ``base`` is not
    modified.
    """
    delta_dir = Path(delta_dir)
    if not delta_dir.is_dir():
        raise UnreadableFileError(delta_dir, "no such directory")

    delta_report = DeltaReport.empty()
    parse_report = IngestReport()
    merged: dict[EntityKind, dict[str, Entity]] = {
        kind: {r.id: r for r in base.entities(kind)} for kind in EntityKind
    }
    paths = list(base.source_paths)
    for kind in EntityKind:
        path = delta_dir / FILE_NAMES[kind]
        if not path.is_file():
            continue
        if str(path) not in paths:
            paths.append(str(path))
        before_skipped = len(parse_report.skipped)
        records = _parse_file(kind, path, parse_report)
        delta_report.skipped[kind] += len(parse_report.skipped) - before_skipped
        current = merged[kind]
        for entity_id, record in records.items():
            if entity_id not in current:
                delta_report.inserted[kind] += 1
            elif current[entity_id] == record:
                delta_report.unchanged[kind] += 1
            else:
                delta_report.updated[kind] += 1
            current[entity_id] = record
    delta_report.malformed_lines = len(parse_report.malformed)

    result_report = IngestReport(
        malformed=parse_report.malformed, skipped=parse_report.skipped
    )
    snapshot = _assemble(merged, paths, result_report)
    return snapshot, delta_report


def write_snapshot(snapshot: Snapshot, directory: str | Path) -> list[Path]:
    """Serialize a snapshot back to the four JSONL files (deterministic bytes)."""
    from .models import entity_to_dict

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for kind in EntityKind:
        path = directory / FILE_NAMES[kind]
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            for record in snapshot.entities(kind):
                fh.write(
                    json.dumps(
                        entity_to_dict(record),
                        ensure_ascii=False,
                        sort_keys=True,
                        separators=(",", ":"),
                    )
                )
                fh.write("\n")
        written.append(path)
    return written
