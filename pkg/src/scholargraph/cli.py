"""Operator command line: ingest snapshots, apply deltas, serve, and run
one-shot queries or reports.

Exit codes: 0 success, 1 data error, 2 usage error. Diagnostics go to
stderr (level set by SCHOLARGRAPH_LOG=error|info|debug); query output on
stdout is machine-parseable and free of timestamps.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .errors import ScholarGraphError
from .graph import build_graph
from .ingest import apply_update, parse_snapshot, snapshot_from_records
from .models import EntityKind
from .search import SearchQuery, SortOrder, build_index, search
from .storage import load_graph, persist_graph

logger = logging.getLogger(__name__)

_LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def configure_logging() -> None:
    level = _LOG_LEVELS.get(os.environ.get("SCHOLARGRAPH_LOG", "error"), logging.ERROR)
    logging.basicConfig(
        stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scholargraph",
        description="Build, update, serve, and query a scholarly knowledge graph.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="parse a snapshot directory and persist the graph")
    p_ingest.add_argument("--snapshot", required=True, help="directory with the four JSONL files")
    p_ingest.add_argument("--out", required=True, help="graph file to write")
    p_ingest.set_defaults(func=cmd_ingest)

    p_update = sub.add_parser("update", help="apply a delta directory to an existing graph")
    p_update.add_argument("--graph", required=True, help="existing graph file")
    p_update.add_argument("--delta", required=True, help="directory with delta JSONL files")
    p_update.add_argument("--out", required=True, help="graph file to write")
    p_update.set_defaults(func=cmd_update)

    p_serve = sub.add_parser("serve", help="serve the HTTP API for a graph file")
    p_serve.add_argument("--graph", required=True)
    p_serve.add_argument("--port", required=True, type=int)
    p_serve.set_defaults(func=cmd_serve)

    p_query = sub.add_parser("query", help="one-shot queries for scripting")
    query_sub = p_query.add_subparsers(dest="query_command", required=True)

    p_path = query_sub.add_parser("path", help="shortest authorship path between two authors")
    p_path.add_argument("--graph", required=True)
    p_path.add_argument("--from", dest="from_id", required=True)
    p_path.add_argument("--to", dest="to_id", required=True)
    p_path.set_defaults(func=cmd_query_path)

    p_search = query_sub.add_parser("search", help="search one entity kind")
    p_search.add_argument("--graph", required=True)
    p_search.add_argument(
        "--type", required=True, choices=[kind.plural for kind in EntityKind]
    )
    p_search.add_argument("--q", required=True)
    p_search.set_defaults(func=cmd_query_search)

    p_report = sub.add_parser(
        "report", help="write TSV summaries and figures for an author"
    )
    p_report.add_argument("--graph", required=True)
    p_report.add_argument("--author", required=True)
    p_report.add_argument("--out", required=True, help="output directory")
    p_report.add_argument("--k", type=int, default=10, help="rows per table (default 10)")
    p_report.set_defaults(func=cmd_report)

    return parser


def cmd_ingest(args: argparse.Namespace) -> int:
    snapshot = parse_snapshot(args.snapshot)
    report = snapshot.report
    if report.malformed:
        logger.warning("%d malformed lines skipped", len(report.malformed))
    if report.skipped:
        logger.warning("%d invalid records skipped", len(report.skipped))
    graph = build_graph(snapshot)
    persist_graph(graph, args.out)
    print(graph.stats.summary())
    return 0


def cmd_update(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    base = snapshot_from_records(
        works=graph.works.values(),
        authors=graph.authors.values(),
        institutions=graph.institutions.values(),
        venues=graph.venues.values(),
        source_paths=[args.graph],
    )
    merged, delta = apply_update(base, args.delta)
    rebuilt = build_graph(merged)
    persist_graph(rebuilt, args.out)
    for kind in EntityKind:
        print(
            f"{kind.plural} inserted={delta.inserted[kind]} "
            f"updated={delta.updated[kind]} unchanged={delta.unchanged[kind]}"
        )
    print(rebuilt.stats.summary())
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .server import serve

    webroot = os.environ.get("SCHOLARGRAPH_WEBROOT")
    if webroot is None and os.path.isdir("frontend/dist"):
        webroot = "frontend/dist"
    try:
        serve(args.graph, args.port, webroot=webroot)
    except KeyboardInterrupt:
        return 0
    except OSError as exc:
        print(f"error: cannot serve on port {args.port}: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_query_path(args: argparse.Namespace) -> int:
    from .analysis import shortest_authorship_path

    graph = load_graph(args.graph)
    path = shortest_authorship_path(graph, args.from_id, args.to_id)
    if path is None:
        print("NOPATH")
    else:
        print(f"{' '.join(path.nodes)} (hops={path.hops})")
    return 0


def cmd_query_search(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    index = build_index(graph)
    kind = next(k for k in EntityKind if k.plural == args.type)
    page = search(
        index,
        graph,
        SearchQuery(kind=kind, text=args.q, page=1, page_size=10**9, sort=SortOrder.RELEVANCE),
    )
    for row in page.items:
        print("\t".join(_search_columns(kind, row)))
    return 0


def _search_columns(kind: EntityKind, row: dict) -> list[str]:
    if kind is EntityKind.WORK:
        return [
            row["id"],
            str(row["publication_year"]),
            str(row["cited_by_count"]),
            row["title"],
        ]
    if kind is EntityKind.AUTHOR:
        return [
            row["id"],
            str(row["works_count"]),
            str(row["cited_by_count"]),
            row["display_name"],
        ]
    if kind is EntityKind.INSTITUTION:
        return [row["id"], row["location"] or "", row["display_name"]]
    return [row["id"], str(row["works_count"]), str(row["cited_by_count"]), row["display_name"]]


def cmd_report(args: argparse.Namespace) -> int:
    from .report import author_report

    graph = load_graph(args.graph)
    written = author_report(graph, args.author, args.out, k=args.k)
    for path in written:
        print(path)
    return 0


def main(argv: list[str] | None = None) -> int:
    configure_logging()
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScholarGraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
