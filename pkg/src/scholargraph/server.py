"""HTTP JSON service over the knowledge graph.

All domain routes live under /api. The graph and search index are
immutable and shared by every request thread; reloading builds a fresh
pair and swaps one reference atomically, so a request is served entirely
by the old state or entirely by the new one. Sessions and discussion
comments are in-memory only and vanish on restart by design.
"""

from __future__ import annotations

import json
import logging
import secrets
import selectors
import socket
import threading
import time
from dataclasses import dataclass
from http.client import responses as _STATUS_REASONS
from pathlib import Path
from typing import Any
from urllib.parse import parse_qs, unquote, urlsplit

from . import analysis, recommend
from .errors import BodyInvalidError, ScholarGraphError, UnauthorizedError
from .graph import Direction, EdgeKind, KnowledgeGraph
from .models import EntityKind, Work
from .search import (
    VALID_SORTS,
    SearchIndex,
    SortOrder,
    build_index,
    disambiguate_author,
    result_row,
    search_ids,
)
from .storage import load_graph

logger = logging.getLogger(__name__)

MAX_PAGE_SIZE = 100
DEFAULT_PAGE_SIZE = 10
MAX_COMMENT_CHARS = 4096

_CRITERIA = {kind.plural: kind for kind in EntityKind}
_LOCAL_ADDRESSES = ("127.", "::1")

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code


_STATUS_BY_CODE = {
    "not_found": 404,
    "empty_query": 400,
    "invalid_sort": 400,
    "same_author": 400,
    "unauthorized": 401,
    "body_invalid": 400,
}


def _api_error(exc: ScholarGraphError) -> ApiError:
    return ApiError(_STATUS_BY_CODE.get(exc.code, 400), exc.code, str(exc))


@dataclass(frozen=True)
class Session:
    token: str
    author_id: str
    created_at: int


@dataclass(frozen=True)
class Comment:
    id: int
    work_id: str
    author_id: str
    body: str
    created_at: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "work_id": self.work_id,
            "author_id": self.author_id,
            "body": self.body,
            "created_at": self.created_at,
        }


def _dump(obj: Any) -> bytes:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":")).encode(
        "utf-8"
    )


def _dump_str(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


@dataclass(frozen=True)
class _State:
    """Immutable bundle swapped atomically on reload.

    ``rows`` holds each entity's result row pre-serialized, so the search
    and listing hot paths assemble responses by string join.
    """

    graph: KnowledgeGraph
    index: SearchIndex
    rows: dict[EntityKind, dict[str, str]]

    @classmethod
    def build(cls, graph: KnowledgeGraph, index: SearchIndex | None = None) -> "_State":
        index = index if index is not None else build_index(graph)
        rows = {
            kind: {
                entity_id: _dump_str(result_row(graph, kind, entity_id))
                for entity_id in graph.entities(kind)
            }
            for kind in EntityKind
        }
        return cls(graph=graph, index=index, rows=rows)


@dataclass
class Response:
    status: int
    body: bytes
    content_type: str = "application/json; charset=utf-8"

    @classmethod
    def json(cls, obj: Any, status: int = 200) -> "Response":
        return cls(status=status, body=_dump(obj))


class ScholarService:
    """Request-handling core, independent of HTTP plumbing (unit-testable)."""

    def __init__(
        self,
        graph: KnowledgeGraph,
        index: SearchIndex | None = None,
        graph_path: str | None = None,
        webroot: str | None = None,
    ):
        self._state = _State.build(graph, index)
        self._graph_path = graph_path
        self.webroot = Path(webroot).resolve() if webroot else None
        self._sessions: dict[str, Session] = {}
        self._sessions_lock = threading.Lock()
        self._comments: dict[str, list[Comment]] = {}
        self._comments_lock = threading.Lock()

    @classmethod
    def from_file(cls, graph_path: str | Path, webroot: str | None = None) -> "ScholarService":
        graph = load_graph(graph_path)
        return cls(graph, graph_path=str(graph_path), webroot=webroot)

    @property
    def state(self) -> _State:
        return self._state

    def reload(self, graph_path: str | None = None) -> KnowledgeGraph:
        """Load a graph file and swap it in atomically."""
        path = graph_path or self._graph_path
        if path is None:
            raise ApiError(400, "bad_request", "no graph path configured")
        graph = load_graph(path)
        self._state = _State.build(graph)
        self._graph_path = path
        logger.info("reloaded graph from %s: %s", path, graph.stats.summary())
        return graph

    # ------------------------------------------------------------------
    # Dispatch
    # ------------------------------------------------------------------

    def handle(
        self,
        method: str,
        raw_path: str,
        body: bytes,
        headers: dict[str, str],
        client_ip: str,
    ) -> Response:
        parts = urlsplit(raw_path)
        path = unquote(parts.path)
        params = parse_qs(parts.query)
        segments = [s for s in path.split("/") if s]
        try:
            if segments and segments[0] == "api":
                return self._handle_api(method, segments[1:], params, body, headers, client_ip)
            if method == "GET":
                return self._handle_static(path)
            raise ApiError(405, "method_not_allowed", f"{method} not allowed here")
        except ApiError as exc:
            return Response.json({"code": exc.code, "message": str(exc)}, status=exc.status)
        except ScholarGraphError as exc:
            err = _api_error(exc)
            return Response.json({"code": err.code, "message": str(err)}, status=err.status)

    def _handle_api(
        self,
        method: str,
        seg: list[str],
        params: dict[str, list[str]],
        body: bytes,
        headers: dict[str, str],
        client_ip: str,
    ) -> Response:
        state = self._state  # one snapshot of graph+index per request
        graph = state.graph

        if method == "GET":
            if seg == ["search"]:
                return self._search(state, params)
            if len(seg) == 2 and seg[0] == "works":
                return self._work_detail(graph, seg[1])
            if len(seg) == 3 and seg[0] == "works":
                work_id = seg[1]
                if seg[2] == "citations":
                    return self._work_citations(state, work_id, params)
                if seg[2] == "similar":
                    return self._work_similar(graph, work_id, params)
                if seg[2] == "comments":
                    return self._work_comments(graph, work_id, params)
            if len(seg) == 2 and seg[0] == "authors":
                return self._author_detail(graph, seg[1])
            if len(seg) == 3 and seg[0] == "authors":
                author_id = seg[1]
                if seg[2] == "works":
                    return self._author_works(state, author_id, params)
                if seg[2] == "coauthors":
                    return self._author_coauthors(graph, author_id, params)
                if seg[2] == "focus":
                    return self._author_focus(graph, author_id, params)
            if len(seg) == 2 and seg[0] == "institutions":
                return self._entity_detail(graph, EntityKind.INSTITUTION, seg[1])
            if len(seg) == 3 and seg[0] == "institutions" and seg[2] == "authors":
                return self._institution_authors(state, seg[1], params)
            if len(seg) == 2 and seg[0] == "venues":
                return self._entity_detail(graph, EntityKind.VENUE, seg[1])
            if len(seg) == 3 and seg[0] == "venues" and seg[2] == "works":
                return self._venue_works(state, seg[1], params)
            if seg == ["path"]:
                return self._path(graph, params)
            if seg == ["common"]:
                return self._common(state, params)
            if len(seg) == 3 and seg[0] == "recommend":
                if seg[1] == "institution":
                    return self._recommend_institution(state, seg[2], params)
                if seg[1] == "topics":
                    return self._recommend_topics(graph, seg[2], params)
                if seg[1] == "collaborators":
                    return self._recommend_collaborators(graph, seg[2], params)
        elif method == "POST":
            if seg == ["login"]:
                return self._login(graph, state.index, body)
            if seg == ["claim"]:
                return self._claim(graph, body)
            if len(seg) == 3 and seg[0] == "works" and seg[2] == "comments":
                return self._post_comment(graph, seg[1], body, headers)
            if seg == ["admin", "reload"]:
                return self._admin_reload(body, client_ip)
        raise ApiError(404, "unknown_route", f"no route for {method} /api/{'/'.join(seg)}")

    # ------------------------------------------------------------------
    # Parameter helpers
    # ------------------------------------------------------------------

    @staticmethod
    def _param(params: dict[str, list[str]], name: str) -> str | None:
        values = params.get(name)
        return values[-1] if values else None

    def _int_param(
        self,
        params: dict[str, list[str]],
        name: str,
        default: int,
        minimum: int = 1,
        maximum: int | None = None,
    ) -> int:
        raw = self._param(params, name)
        if raw is None:
            return default
        try:
            value = int(raw)
        except ValueError:
            raise ApiError(400, "bad_request", f"{name} must be an integer") from None
        if value < minimum:
            raise ApiError(400, "bad_request", f"{name} must be >= {minimum}")
        if maximum is not None and value > maximum:
            value = maximum
        return value

    def _sort_param(
        self, params: dict[str, list[str]], default: SortOrder, allowed: frozenset[SortOrder]
    ) -> SortOrder:
        raw = self._param(params, "sort")
        if raw is None:
            return default
        try:
            sort = SortOrder(raw)
        except ValueError:
            raise ApiError(400, "invalid_sort", f"unknown sort {raw!r}") from None
        if sort not in allowed:
            raise ApiError(400, "invalid_sort", f"sort {raw!r} is not defined here")
        return sort

    def _paged(
        self, params: dict[str, list[str]], items: list[Any]
    ) -> dict[str, Any]:
        page = self._int_param(params, "page", 1)
        page_size = self._int_param(params, "page_size", DEFAULT_PAGE_SIZE, maximum=MAX_PAGE_SIZE)
        start = (page - 1) * page_size
        return {"total": len(items), "page": page, "items": items[start : start + page_size]}

    def _page_of_rows(self, params: dict[str, list[str]], rendered: list[str]) -> Response:
        """Assemble a {items, page, total} body from pre-serialized rows.

        Byte-identical to ``_dump`` of the equivalent dict (keys are emitted
        in sorted order).
        """
        page = self._int_param(params, "page", 1)
        page_size = self._int_param(params, "page_size", DEFAULT_PAGE_SIZE, maximum=MAX_PAGE_SIZE)
        start = (page - 1) * page_size
        body = (
            '{"items":['
            + ",".join(rendered[start : start + page_size])
            + f'],"page":{page},"total":{len(rendered)}}}'
        )
        return Response(status=200, body=body.encode("utf-8"))

    @staticmethod
    def _json_body(body: bytes) -> dict[str, Any]:
        try:
            obj = json.loads(body.decode("utf-8")) if body else {}
        except (json.JSONDecodeError, UnicodeDecodeError):
            raise ApiError(400, "bad_request", "request body is not valid JSON") from None
        if not isinstance(obj, dict):
            raise ApiError(400, "bad_request", "request body must be a JSON object")
        return obj

    # ------------------------------------------------------------------
    # Search and entity routes
    # ------------------------------------------------------------------

    def _search(self, state: _State, params) -> Response:
        criterion = self._param(params, "type") or ""
        kind = _CRITERIA.get(criterion)
        if kind is None:
            raise ApiError(
                400, "bad_request", "type must be one of works, authors, institutions, venues"
            )
        text = self._param(params, "q") or ""
        page = self._int_param(params, "page", 1)
        page_size = self._int_param(params, "page_size", DEFAULT_PAGE_SIZE, maximum=MAX_PAGE_SIZE)
        sort = self._sort_param(params, SortOrder.RELEVANCE, VALID_SORTS[kind])
        total, ids = search_ids(state.index, kind, text, sort)
        rows = state.rows[kind]
        start = (page - 1) * page_size
        body = (
            '{"items":['
            + ",".join(rows[i] for i in ids[start : start + page_size])
            + f'],"page":{page},"total":{total}}}'
        )
        return Response(status=200, body=body.encode("utf-8"))

    def _work_detail(self, graph: KnowledgeGraph, work_id: str) -> Response:
        work = graph.get_entity(EntityKind.WORK, work_id)
        assert isinstance(work, Work)
        row = result_row(graph, EntityKind.WORK, work_id)
        row.update(
            {
                "doi": work.doi,
                "mag_id": work.mag_id,
                "abstract": work.abstract,
                "concepts": [{"label": c.label, "score": c.score} for c in work.concepts],
                "referenced_works": list(work.referenced_works),
            }
        )
        return Response.json(row)

    def _entity_detail(self, graph: KnowledgeGraph, kind: EntityKind, entity_id: str) -> Response:
        graph.get_entity(kind, entity_id)
        return Response.json(result_row(graph, kind, entity_id))

    def _author_detail(self, graph: KnowledgeGraph, author_id: str) -> Response:
        graph.get_entity(EntityKind.AUTHOR, author_id)
        return Response.json(result_row(graph, EntityKind.AUTHOR, author_id))

    def _work_citations(self, state: _State, work_id: str, params) -> Response:
        graph = state.graph
        citing = graph.neighbors(EntityKind.WORK, work_id, EdgeKind.CITES, Direction.IN)
        ordered = sorted(citing, key=lambda i: (-graph.works[i].cited_by_count, i))
        rows = state.rows[EntityKind.WORK]
        return self._page_of_rows(params, [rows[i] for i in ordered])

    def _work_similar(self, graph: KnowledgeGraph, work_id: str, params) -> Response:
        k = self._int_param(params, "k", DEFAULT_PAGE_SIZE)
        ranked = analysis.similar_works(graph, work_id, k)
        items = [
            {"score": score, "work": result_row(graph, EntityKind.WORK, i)}
            for i, score in ranked
        ]
        return Response.json({"total": len(items), "page": 1, "items": items})

    def _author_works(self, state: _State, author_id: str, params) -> Response:
        graph = state.graph
        work_ids = graph.neighbors(EntityKind.AUTHOR, author_id, EdgeKind.AUTHORED)
        sort = self._sort_param(
            params,
            SortOrder.CITATIONS,
            frozenset({SortOrder.TITLE, SortOrder.DATE, SortOrder.CITATIONS}),
        )
        ordered = _sort_works(graph, work_ids, sort)
        rows = state.rows[EntityKind.WORK]
        return self._page_of_rows(params, [rows[i] for i in ordered])

    def _author_coauthors(self, graph: KnowledgeGraph, author_id: str, params) -> Response:
        network = analysis.coauthor_network(graph, author_id)
        items = [
            {
                "author": result_row(graph, EntityKind.AUTHOR, c.author_id),
                "shared_work_count": c.shared_work_count,
                "shared_work_ids": list(c.shared_work_ids),
            }
            for c in network
        ]
        return Response.json(self._paged(params, items))

    def _author_focus(self, graph: KnowledgeGraph, author_id: str, params) -> Response:
        k = self._int_param(params, "k", DEFAULT_PAGE_SIZE)
        areas = analysis.focus_areas(graph, author_id, k)
        items = [{"label": label, "score": score} for label, score in areas]
        return Response.json({"total": len(items), "page": 1, "items": items})

    def _institution_authors(self, state: _State, inst_id: str, params) -> Response:
        graph = state.graph
        member_ids = graph.neighbors(
            EntityKind.INSTITUTION, inst_id, EdgeKind.AFFILIATED_WITH
        )
        ordered = sorted(member_ids, key=lambda i: (-graph.authors[i].cited_by_count, i))
        rows = state.rows[EntityKind.AUTHOR]
        return self._page_of_rows(params, [rows[i] for i in ordered])

    def _venue_works(self, state: _State, venue_id: str, params) -> Response:
        graph = state.graph
        work_ids = graph.neighbors(EntityKind.VENUE, venue_id, EdgeKind.PUBLISHED_IN)
        sort = self._sort_param(
            params,
            SortOrder.CITATIONS,
            frozenset({SortOrder.TITLE, SortOrder.DATE, SortOrder.CITATIONS}),
        )
        ordered = _sort_works(graph, work_ids, sort)
        rows = state.rows[EntityKind.WORK]
        return self._page_of_rows(params, [rows[i] for i in ordered])

    # ------------------------------------------------------------------
    # Paths and recommendations
    # ------------------------------------------------------------------

    def _path(self, graph: KnowledgeGraph, params) -> Response:
        from_id = self._param(params, "from")
        to_id = self._param(params, "to")
        if not from_id or not to_id:
            raise ApiError(400, "bad_request", "from and to are required")
        path = analysis.shortest_authorship_path(graph, from_id, to_id)
        if path is None:
            raise ApiError(404, "no_path", f"no authorship path from {from_id} to {to_id}")
        nodes = []
        for position, node_id in enumerate(path.nodes):
            if position % 2 == 0:
                nodes.append(
                    {
                        "id": node_id,
                        "kind": "author",
                        "display_name": graph.authors[node_id].display_name,
                    }
                )
            else:
                nodes.append(
                    {"id": node_id, "kind": "work", "display_name": graph.works[node_id].title}
                )
        return Response.json(
            {"nodes": nodes, "hops": path.hops, "coauthor_steps": path.coauthor_steps}
        )

    def _common(self, state: _State, params) -> Response:
        from_id = self._param(params, "from")
        to_id = self._param(params, "to")
        if not from_id or not to_id:
            raise ApiError(400, "bad_request", "from and to are required")
        shared = analysis.common_connections(state.graph, from_id, to_id)
        rows = state.rows[EntityKind.AUTHOR]
        return self._page_of_rows(params, [rows[i] for i in shared])

    def _recommend_institution(self, state: _State, author_id: str, params) -> Response:
        colleagues = recommend.same_institution_researchers(state.graph, author_id)
        rows = state.rows[EntityKind.AUTHOR]
        return self._page_of_rows(params, [rows[i] for i, _ in colleagues])

    def _recommend_topics(self, graph: KnowledgeGraph, author_id: str, params) -> Response:
        window = self._int_param(params, "window", 3)
        k = self._int_param(params, "k", DEFAULT_PAGE_SIZE)
        topics = recommend.trending_subtopics(graph, author_id, window, k)
        items = [{"label": label, "count": count} for label, count in topics]
        return Response.json({"total": len(items), "page": 1, "items": items})

    def _recommend_collaborators(self, graph: KnowledgeGraph, author_id: str, params) -> Response:
        k = self._int_param(params, "k", DEFAULT_PAGE_SIZE)
        ranked = recommend.recommend_collaborators(graph, author_id, k)
        items = [
            {"author": result_row(graph, EntityKind.AUTHOR, i), "score": score}
            for i, score in ranked
        ]
        return Response.json({"total": len(items), "page": 1, "items": items})

    # ------------------------------------------------------------------
    # Sessions and comments
    # ------------------------------------------------------------------

    def _login(self, graph: KnowledgeGraph, index: SearchIndex, body: bytes) -> Response:
        obj = self._json_body(body)
        name = obj.get("name")
        if not isinstance(name, str):
            raise ApiError(400, "bad_request", "name is required")
        affiliation = obj.get("affiliation")
        if affiliation is not None and not isinstance(affiliation, str):
            raise ApiError(400, "bad_request", "affiliation must be a string")
        candidates = disambiguate_author(index, graph, name, affiliation)
        return Response.json({"candidates": [c.to_dict() for c in candidates]})

    def _claim(self, graph: KnowledgeGraph, body: bytes) -> Response:
        obj = self._json_body(body)
        author_id = obj.get("author_id")
        if not isinstance(author_id, str) or not author_id:
            raise ApiError(400, "bad_request", "author_id is required")
        graph.get_entity(EntityKind.AUTHOR, author_id)
        with self._sessions_lock:
            token = secrets.token_hex(16)
            while token in self._sessions:
                token = secrets.token_hex(16)
            session = Session(token=token, author_id=author_id, created_at=int(time.time()))
            self._sessions[token] = session
        return Response.json(
            {"token": token, "author": result_row(graph, EntityKind.AUTHOR, author_id)},
            status=201,
        )

    def _session_for(self, headers: dict[str, str]) -> Session:
        token = headers.get("x-session-token")
        if not token:
            raise UnauthorizedError("missing X-Session-Token header")
        with self._sessions_lock:
            session = self._sessions.get(token)
        if session is None:
            raise UnauthorizedError("unknown session token")
        return session

    def _post_comment(
        self, graph: KnowledgeGraph, work_id: str, body: bytes, headers: dict[str, str]
    ) -> Response:
        session = self._session_for(headers)
        graph.get_entity(EntityKind.WORK, work_id)
        obj = self._json_body(body)
        text = obj.get("body")
        if not isinstance(text, str) or not 1 <= len(text) <= MAX_COMMENT_CHARS:
            raise BodyInvalidError(
                f"comment body must be a string of 1..{MAX_COMMENT_CHARS} characters"
            )
        with self._comments_lock:
            thread = self._comments.setdefault(work_id, [])
            comment = Comment(
                id=len(thread) + 1,
                work_id=work_id,
                author_id=session.author_id,
                body=text,
                created_at=int(time.time()),
            )
            thread.append(comment)
        return Response.json(comment.to_dict(), status=201)

    def _work_comments(self, graph: KnowledgeGraph, work_id: str, params) -> Response:
        graph.get_entity(EntityKind.WORK, work_id)
        with self._comments_lock:
            thread = list(self._comments.get(work_id, ()))
        thread.sort(key=lambda c: (c.created_at, c.id))
        return Response.json(self._paged(params, [c.to_dict() for c in thread]))

    def _admin_reload(self, body: bytes, client_ip: str) -> Response:
        if not client_ip.startswith(_LOCAL_ADDRESSES):
            raise ApiError(403, "forbidden", "reload is restricted to local requests")
        obj = self._json_body(body)
        path = obj.get("graph")
        if path is not None and not isinstance(path, str):
            raise ApiError(400, "bad_request", "graph must be a path string")
        try:
            graph = self.reload(path)
        except ScholarGraphError as exc:
            raise ApiError(400, exc.code, str(exc)) from exc
        return Response.json({"reloaded": True, "nodes": graph.stats.node_count})

    # ------------------------------------------------------------------
    # Static assets
    # ------------------------------------------------------------------

    def _handle_static(self, path: str) -> Response:
        if self.webroot is None:
            if path == "/":
                return Response.json({"service": "scholargraph", "api": "/api"})
            raise ApiError(404, "not_found", f"no such path: {path}")
        relative = path.lstrip("/") or "index.html"
        target = (self.webroot / relative).resolve()
        if not target.is_relative_to(self.webroot):
            raise ApiError(404, "not_found", "path escapes web root")
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            raise ApiError(404, "not_found", f"no such path: {path}")
        content_type = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        return Response(status=200, body=target.read_bytes(), content_type=content_type)


def _sort_works(graph: KnowledgeGraph, work_ids, sort: SortOrder) -> list[str]:
    works = graph.works
    if sort is SortOrder.TITLE:
        return sorted(work_ids, key=lambda i: (works[i].title.lower(), i))
    if sort is SortOrder.DATE:
        return sorted(work_ids, key=lambda i: (-works[i].publication_year, i))
    return sorted(work_ids, key=lambda i: (-works[i].cited_by_count, i))


_MAX_HEADER_BYTES = 65536
_IDLE_TIMEOUT = 60.0


class _Connection:
    __slots__ = ("sock", "addr", "rbuf", "wbuf", "last_active", "close_after_write")

    def __init__(self, sock: socket.socket, addr: tuple):
        self.sock = sock
        self.addr = addr
        self.rbuf = b""
        self.wbuf = b""
        self.last_active = time.monotonic()
        self.close_after_write = False


class GraphHTTPServer:
    """Single-threaded event-loop HTTP/1.1 server.

    One thread multiplexes every connection with a selector and runs the
    handlers inline; request handling is sub-millisecond, so serializing it
    gives flatter tail latency than thread-per-request ever does under
    CPython. The handling core stays thread-safe (sessions and comments
    are lock-guarded), so embedders may still drive
    :meth:`ScholarService.handle` from their own threads. The admin reload
    route rebuilds the state inline and briefly stalls traffic; the swap
    itself stays atomic.
    """

    def __init__(self, address: tuple[str, int], service: ScholarService):
        self.service = service
        self._listener = socket.create_server(address, backlog=128)
        self._listener.setblocking(False)
        self.server_address = self._listener.getsockname()
        self._selector = selectors.DefaultSelector()
        self._wake_recv, self._wake_send = socket.socketpair()
        self._wake_recv.setblocking(False)
        self._running = threading.Event()

    def serve_forever(self) -> None:
        self._running.set()
        self._selector.register(self._listener, selectors.EVENT_READ, "accept")
        self._selector.register(self._wake_recv, selectors.EVENT_READ, "wake")
        last_sweep = time.monotonic()
        while self._running.is_set():
            for key, mask in self._selector.select(timeout=_IDLE_TIMEOUT / 2):
                if key.data == "accept":
                    self._accept_ready()
                elif key.data == "wake":
                    self._drain_wake()
                else:
                    conn: _Connection = key.data
                    if mask & selectors.EVENT_WRITE:
                        self._on_writable(conn)
                    if mask & selectors.EVENT_READ:
                        self._on_readable(conn)
            now = time.monotonic()
            if now - last_sweep > _IDLE_TIMEOUT / 2:
                last_sweep = now
                self._sweep_idle(now)

    def shutdown(self) -> None:
        self._running.clear()
        try:
            self._wake_send.send(b"x")
        except OSError:
            pass

    def server_close(self) -> None:
        self.shutdown()
        for key in list(self._selector.get_map().values()):
            if isinstance(key.data, _Connection):
                self._close(key.data)
        try:
            self._listener.close()
        finally:
            self._wake_send.close()
            self._wake_recv.close()
            self._selector.close()

    # ------------------------------------------------------------------
    # Event handling
    # ------------------------------------------------------------------

    def _accept_ready(self) -> None:
        while True:
            try:
                sock, addr = self._listener.accept()
            except (BlockingIOError, OSError):
                return
            sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
            sock.setblocking(False)
            conn = _Connection(sock, addr)
            self._selector.register(sock, selectors.EVENT_READ, conn)

    def _drain_wake(self) -> None:
        try:
            while self._wake_recv.recv(4096):
                pass
        except (BlockingIOError, OSError):
            pass

    def _sweep_idle(self, now: float) -> None:
        for key in list(self._selector.get_map().values()):
            if isinstance(key.data, _Connection) and now - key.data.last_active > _IDLE_TIMEOUT:
                self._close(key.data)

    def _close(self, conn: _Connection) -> None:
        try:
            self._selector.unregister(conn.sock)
        except (KeyError, ValueError):
            pass
        try:
            conn.sock.close()
        except OSError:
            pass

    def _on_readable(self, conn: _Connection) -> None:
        try:
            chunk = conn.sock.recv(262144)
        except (BlockingIOError, InterruptedError):
            return
        except OSError:
            self._close(conn)
            return
        if not chunk:
            self._close(conn)
            return
        conn.rbuf += chunk
        conn.last_active = time.monotonic()
        self._process_buffer(conn)

    def _process_buffer(self, conn: _Connection) -> None:
        """Run every complete pipelined request buffered, then flush once."""
        while not conn.close_after_write and self._handle_buffered(conn):
            pass
        self._flush(conn)

    def _handle_buffered(self, conn: _Connection) -> bool:
        """Parse and run one buffered request; False when more bytes are needed
        or the connection is now marked for close."""
        header_end = conn.rbuf.find(b"\r\n\r\n")
        if header_end < 0:
            if len(conn.rbuf) > _MAX_HEADER_BYTES:
                self._queue_plain(conn, 431, "request header fields too large")
            return False
        head = conn.rbuf[:header_end].decode("latin-1")
        lines = head.split("\r\n")
        parts = lines[0].split(" ")
        if len(parts) != 3:
            self._queue_plain(conn, 400, "malformed request line")
            return False
        method, raw_path, version = parts
        headers: dict[str, str] = {}
        for line in lines[1:]:
            name, _, value = line.partition(":")
            headers[name.strip().lower()] = value.strip()
        if headers.get("transfer-encoding"):
            self._queue_plain(conn, 411, "length required")
            return False
        try:
            length = int(headers.get("content-length") or 0)
        except ValueError:
            self._queue_plain(conn, 400, "bad content-length")
            return False
        body_start = header_end + 4
        if len(conn.rbuf) < body_start + length:
            return False  # body still in flight
        body = conn.rbuf[body_start : body_start + length]
        conn.rbuf = conn.rbuf[body_start + length :]

        response = self.service.handle(method, raw_path, body, headers, conn.addr[0])
        reason = _STATUS_REASONS.get(response.status, "Unknown")
        conn.wbuf += (
            f"HTTP/1.1 {response.status} {reason}\r\n"
            f"Content-Type: {response.content_type}\r\n"
            f"Content-Length: {len(response.body)}\r\n\r\n"
        ).encode("latin-1") + response.body
        logger.debug("%s %s %s -> %d", conn.addr[0], method, raw_path, response.status)
        if version != "HTTP/1.1" or headers.get("connection", "").lower() == "close":
            conn.close_after_write = True
        return True

    def _queue_plain(self, conn: _Connection, status: int, message: str) -> None:
        body = message.encode("utf-8")
        reason = _STATUS_REASONS.get(status, "Error")
        conn.wbuf += (
            f"HTTP/1.1 {status} {reason}\r\n"
            f"Content-Type: text/plain; charset=utf-8\r\n"
            f"Content-Length: {len(body)}\r\nConnection: close\r\n\r\n"
        ).encode("latin-1") + body
        conn.close_after_write = True

    def _flush(self, conn: _Connection) -> None:
        if conn.wbuf:
            try:
                sent = conn.sock.send(conn.wbuf)
                conn.wbuf = conn.wbuf[sent:]
            except (BlockingIOError, InterruptedError):
                pass
            except OSError:
                self._close(conn)
                return
        if conn.wbuf:
            self._set_events(conn, selectors.EVENT_READ | selectors.EVENT_WRITE)
        else:
            if conn.close_after_write:
                self._close(conn)
                return
            self._set_events(conn, selectors.EVENT_READ)

    def _on_writable(self, conn: _Connection) -> None:
        self._flush(conn)

    def _set_events(self, conn: _Connection, events: int) -> None:
        try:
            key = self._selector.get_key(conn.sock)
        except KeyError:
            return
        if key.events != events:
            self._selector.modify(conn.sock, events, conn)


def create_server(
    service: ScholarService, host: str = "127.0.0.1", port: int = 0
) -> GraphHTTPServer:
    """Bind the HTTP server for a service; port 0 picks a free port."""
    return GraphHTTPServer((host, port), service)


def serve(
    graph_path: str | Path,
    port: int,
    host: str = "127.0.0.1",
    webroot: str | None = None,
) -> None:
    """Load a graph file and serve it until interrupted."""
    import gc

    service = ScholarService.from_file(graph_path, webroot=webroot)
    # The loaded graph is immutable; keeping its millions of objects out of
    # the collector prevents multi-hundred-ms gen2 pauses under load.
    gc.collect()
    gc.freeze()
    server = create_server(service, host=host, port=port)
    graph = service.state.graph
    logger.info(
        "serving %s on http://%s:%d/", graph.stats.summary(), host, server.server_address[1]
    )
    try:
        server.serve_forever()
    finally:
        server.server_close()
