"""Exception types shared across the package.

Errors that surface through the HTTP API carry a stable machine-readable
``code`` so clients can branch without parsing messages.
"""

from __future__ import annotations


class ScholarGraphError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "error"


class UnreadableFileError(ScholarGraphError):
    code = "unreadable_file"

    def __init__(self, path: object, cause: object):
        super().__init__(f"cannot read {path}: {cause}")
        self.path = str(path)
        self.cause = cause


class RecordStructureError(ScholarGraphError):
    """A parsed line is valid JSON but not structurally a valid entity record."""

    code = "record_structure"

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class DuplicatePositionError(ScholarGraphError):
    """Two abstract tokens claim the same position index."""

    code = "duplicate_position"


class NotFoundError(ScholarGraphError):
    code = "not_found"

    def __init__(self, kind: object, entity_id: str):
        label = getattr(kind, "value", kind)
        super().__init__(f"no {label} with id {entity_id!r}")
        self.kind = kind
        self.entity_id = entity_id


class EmptyQueryError(ScholarGraphError):
    code = "empty_query"


class InvalidSortError(ScholarGraphError):
    code = "invalid_sort"


class SameAuthorError(ScholarGraphError):
    code = "same_author"


class UnauthorizedError(ScholarGraphError):
    code = "unauthorized"


class BodyInvalidError(ScholarGraphError):
    code = "body_invalid"


class VersionMismatchError(ScholarGraphError):
    """Graph file magic or format version does not match this build."""

    code = "version_mismatch"


class CorruptSnapshotError(ScholarGraphError):
    """Graph file failed its length or checksum verification."""

    code = "corrupt_snapshot"
