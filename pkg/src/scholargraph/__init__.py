"""Self-contained scholarly discovery engine.

Ingests entity dumps (works, authors, institutions, venues) into an
in-memory knowledge graph and answers search, graph-path, and
recommendation queries, either as a library or through the bundled HTTP
service and CLI.
"""

from .analysis import (
    AuthorshipPath,
    Coauthor,
    coauthor_network,
    common_connections,
    focus_areas,
    shortest_authorship_path,
    similar_works,
    weighted_jaccard,
)
from .graph import Direction, EdgeKind, KnowledgeGraph, build_graph
from .ingest import (
    DeltaReport,
    Snapshot,
    apply_update,
    parse_snapshot,
    reconstruct_abstract,
    snapshot_from_records,
    write_snapshot,
)
from .models import (
    Author,
    Concept,
    EntityKind,
    Institution,
    Venue,
    Violation,
    Work,
    validate_entity,
)
from .recommend import (
    recommend_collaborators,
    same_institution_researchers,
    trending_subtopics,
)
from .search import (
    SearchIndex,
    SearchQuery,
    SearchResultPage,
    SortOrder,
    build_index,
    disambiguate_author,
    search,
    tokenize,
)
from .storage import load_graph, persist_graph

__version__ = "0.1.0"

__all__ = [
    "Author",
    "AuthorshipPath",
    "Coauthor",
    "Concept",
    "DeltaReport",
    "Direction",
    "EdgeKind",
    "EntityKind",
    "Institution",
    "KnowledgeGraph",
    "SearchIndex",
    "SearchQuery",
    "SearchResultPage",
    "Snapshot",
    "SortOrder",
    "Venue",
    "Violation",
    "Work",
    "apply_update",
    "build_graph",
    "build_index",
    "coauthor_network",
    "common_connections",
    "disambiguate_author",
    "focus_areas",
    "load_graph",
    "parse_snapshot",
    "persist_graph",
    "recommend_collaborators",
    "reconstruct_abstract",
    "same_institution_researchers",
    "search",
    "shortest_authorship_path",
    "similar_works",
    "snapshot_from_records",
    "tokenize",
    "trending_subtopics",
    "validate_entity",
    "weighted_jaccard",
    "write_snapshot",
]
