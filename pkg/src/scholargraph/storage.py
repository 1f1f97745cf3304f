"""Single-file binary persistence for the knowledge graph.

Layout: magic ``SGKG`` | u32 format version | u64 payload length |
sha256(payload) | payload. The payload encodes the entity records in a
fixed kind order with ids sorted, so persisting the same graph twice is
byte-identical. Adjacency is rebuilt on load (graph building is a pure
function of the records).
"""

from __future__ import annotations

import hashlib
import struct
from pathlib import Path

from .errors import CorruptSnapshotError, UnreadableFileError, VersionMismatchError
from .graph import KnowledgeGraph, build_graph
from .ingest import snapshot_from_records
from .models import Author, Concept, Institution, Venue, Work

MAGIC = b"SGKG"
VERSION = 1

_HEADER = struct.Struct(">4sIQ32s")


class _Writer:
    def __init__(self) -> None:
        self.buf = bytearray()

    def u32(self, value: int) -> None:
        self.buf += struct.pack(">I", value)

    def u64(self, value: int) -> None:
        self.buf += struct.pack(">Q", value)

    def f64(self, value: float) -> None:
        self.buf += struct.pack(">d", value)

    def boolean(self, value: bool) -> None:
        self.buf.append(1 if value else 0)

    def string(self, value: str) -> None:
        raw = value.encode("utf-8")
        self.u32(len(raw))
        self.buf += raw

    def opt_string(self, value: str | None) -> None:
        if value is None:
            self.buf.append(0)
        else:
            self.buf.append(1)
            self.string(value)

    def string_list(self, values: tuple[str, ...]) -> None:
        self.u32(len(values))
        for value in values:
            self.string(value)


class _Reader:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def _take(self, size: int) -> bytes:
        end = self.pos + size
        if end > len(self.data):
            raise CorruptSnapshotError("payload truncated")
        chunk = self.data[self.pos : end]
        self.pos = end
        return chunk

    def u32(self) -> int:
        return struct.unpack(">I", self._take(4))[0]

    def u64(self) -> int:
        return struct.unpack(">Q", self._take(8))[0]

    def f64(self) -> float:
        return struct.unpack(">d", self._take(8))[0]

    def boolean(self) -> bool:
        return self._take(1) != b"\x00"

    def string(self) -> str:
        size = self.u32()
        try:
            return self._take(size).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorruptSnapshotError(f"bad string encoding: {exc}") from exc

    def opt_string(self) -> str | None:
        if self._take(1) == b"\x00":
            return None
        return self.string()

    def string_list(self) -> tuple[str, ...]:
        return tuple(self.string() for _ in range(self.u32()))

    def done(self) -> bool:
        return self.pos == len(self.data)


def _encode_payload(graph: KnowledgeGraph) -> bytes:
    w = _Writer()
    w.u32(len(graph.works))
    for work_id in sorted(graph.works):
        work = graph.works[work_id]
        w.string(work.id)
        w.string(work.title)
        w.u32(work.publication_year)
        w.string_list(work.authors)
        w.opt_string(work.venue)
        w.u64(work.cited_by_count)
        w.opt_string(work.doi)
        w.opt_string(work.mag_id)
        w.boolean(work.is_open_access)
        w.u32(len(work.concepts))
        for concept in work.concepts:
            w.string(concept.label)
            w.f64(concept.score)
        w.opt_string(work.abstract)
        w.string_list(work.referenced_works)
    w.u32(len(graph.authors))
    for author_id in sorted(graph.authors):
        author = graph.authors[author_id]
        w.string(author.id)
        w.string(author.display_name)
        w.opt_string(author.affiliation)
        w.u64(author.works_count)
        w.u64(author.cited_by_count)
        w.opt_string(author.orcid)
    w.u32(len(graph.institutions))
    for inst_id in sorted(graph.institutions):
        inst = graph.institutions[inst_id]
        w.string(inst.id)
        w.string(inst.display_name)
        w.opt_string(inst.location)
        w.opt_string(inst.homepage)
        w.opt_string(inst.sector)
        w.opt_string(inst.acronym)
        w.opt_string(inst.wikipedia)
    w.u32(len(graph.venues))
    for venue_id in sorted(graph.venues):
        venue = graph.venues[venue_id]
        w.string(venue.id)
        w.string(venue.display_name)
        w.u64(venue.works_count)
        w.u64(venue.cited_by_count)
    return bytes(w.buf)


def _decode_payload(payload: bytes) -> tuple[list[Work], list[Author], list[Institution], list[Venue]]:
    r = _Reader(payload)
    works = []
    for _ in range(r.u32()):
        works.append(
            Work(
                id=r.string(),
                title=r.string(),
                publication_year=r.u32(),
                authors=r.string_list(),
                venue=r.opt_string(),
                cited_by_count=r.u64(),
                doi=r.opt_string(),
                mag_id=r.opt_string(),
                is_open_access=r.boolean(),
                concepts=tuple(
                    Concept(label=r.string(), score=r.f64()) for _ in range(r.u32())
                ),
                abstract=r.opt_string(),
                referenced_works=r.string_list(),
            )
        )
    authors = [
        Author(
            id=r.string(),
            display_name=r.string(),
            affiliation=r.opt_string(),
            works_count=r.u64(),
            cited_by_count=r.u64(),
            orcid=r.opt_string(),
        )
        for _ in range(r.u32())
    ]
    institutions = [
        Institution(
            id=r.string(),
            display_name=r.string(),
            location=r.opt_string(),
            homepage=r.opt_string(),
            sector=r.opt_string(),
            acronym=r.opt_string(),
            wikipedia=r.opt_string(),
        )
        for _ in range(r.u32())
    ]
    venues = [
        Venue(
            id=r.string(),
            display_name=r.string(),
            works_count=r.u64(),
            cited_by_count=r.u64(),
        )
        for _ in range(r.u32())
    ]
    if not r.done():
        raise CorruptSnapshotError("trailing bytes after payload")
    return works, authors, institutions, venues


def persist_graph(graph: KnowledgeGraph, path: str | Path) -> int:
    """Write the graph to ``path``; returns the byte count written."""
    payload = _encode_payload(graph)
    header = _HEADER.pack(MAGIC, VERSION, len(payload), hashlib.sha256(payload).digest())
    data = header + payload
    Path(path).write_bytes(data)
    return len(data)


def load_graph(path: str | Path) -> KnowledgeGraph:
    """Load a graph persisted by :func:`persist_graph`.

    ``load_graph(persist_graph(g))`` reproduces ``g`` exactly: the records
    round-trip bit-for-bit and graph building is deterministic.
    """
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise UnreadableFileError(path, exc) from exc
    if len(data) < _HEADER.size:
        raise CorruptSnapshotError(f"{path}: file shorter than header")
    magic, version, length, digest = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise VersionMismatchError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise VersionMismatchError(f"{path}: unsupported format version {version}")
    payload = data[_HEADER.size :]
    if len(payload) != length:
        raise CorruptSnapshotError(f"{path}: payload length mismatch")
    if hashlib.sha256(payload).digest() != digest:
        raise CorruptSnapshotError(f"{path}: checksum mismatch")
    works, authors, institutions, venues = _decode_payload(payload)
    snapshot = snapshot_from_records(
        works=works,
        authors=authors,
        institutions=institutions,
        venues=venues,
        source_paths=[str(path)],
    )
    return build_graph(snapshot)
