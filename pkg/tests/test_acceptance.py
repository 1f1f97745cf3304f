"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines on
passing runs. The scale test at the end builds a 100k-work corpus and
drives a real server subprocess; everything else finishes in seconds.
"""

from __future__ import annotations

import json
import random
import selectors
import socket
import subprocess
import sys
import threading
import time
import urllib.error
import urllib.request
from contextlib import contextmanager
from pathlib import Path

import jsonschema
import pytest

from corpora import (
    SCALE_VOCAB,
    random_bipartite,
    random_corpus,
    random_graph,
    synthetic_scale_corpus,
    write_corpus_dir,
)
from oracles import (
    oracle_search_ids,
    oracle_shortest_authorship_path,
    oracle_weighted_jaccard,
)
from scholargraph import (
    EntityKind,
    SortOrder,
    apply_update,
    build_graph,
    build_index,
    load_graph,
    parse_snapshot,
    persist_graph,
    shortest_authorship_path,
    weighted_jaccard,
)
from scholargraph.analysis import similar_works
from scholargraph.errors import EmptyQueryError
from scholargraph.search import search_ids


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"\n[ACCEPTANCE] {name}: FAIL", flush=True)
        raise
    print(f"\n[ACCEPTANCE] {name}: PASS", flush=True)


# ---------------------------------------------------------------------------
# 1. BFS oracle equivalence
# ---------------------------------------------------------------------------


def test_bfs_oracle_equivalence():
    with criterion("BFS oracle equivalence (200 random graphs, <10s)"):
        rng = random.Random(0xB_F5)
        started = time.perf_counter()
        graphs = 0
        checks = 0
        while graphs < 200:
            graph, author_ids, author_works, work_authors = random_bipartite(
                rng, max_nodes=30, edge_probability=0.15
            )
            graphs += 1
            for _ in range(5):
                src = rng.choice(author_ids)
                dst = rng.choice(author_ids)
                expected = oracle_shortest_authorship_path(author_works, work_authors, src, dst)
                got = shortest_authorship_path(graph, src, dst)
                if expected is None:
                    assert got is None, (graphs, src, dst)
                else:
                    assert got is not None, (graphs, src, dst)
                    assert got.hops == expected[0], (graphs, src, dst)
                    assert got.nodes == expected[1], (graphs, src, dst)
                checks += 1
        elapsed = time.perf_counter() - started
        assert checks == 1000
        assert elapsed < 10.0, f"took {elapsed:.1f}s"


# ---------------------------------------------------------------------------
# 2. Tiny-fixture end-to-end
# ---------------------------------------------------------------------------


def test_tiny_fixture_end_to_end(tiny_dir, tmp_path):
    from scholargraph.analysis import common_connections, focus_areas
    from scholargraph.cli import main
    from scholargraph.graph import Direction, EdgeKind
    from scholargraph.recommend import trending_subtopics
    from scholargraph.search import SearchQuery, search

    with criterion("tiny-fixture end-to-end (<1s)"):
        started = time.perf_counter()
        graph_file = tmp_path / "tiny.kg"
        assert main(["ingest", "--snapshot", str(tiny_dir), "--out", str(graph_file)]) == 0
        graph = load_graph(graph_file)
        index = build_index(graph)

        path = shortest_authorship_path(graph, "A1", "A3")
        assert path is not None and list(path.nodes) == ["A1", "W1", "A2", "W2", "A3"]

        citations_in = graph.neighbors(EntityKind.WORK, "W1", EdgeKind.CITES, Direction.IN)
        assert list(citations_in) == ["W3", "W6"]

        page = search(index, graph, SearchQuery(EntityKind.WORK, "ranking"))
        assert [row["id"] for row in page.items] == ["W2", "W1", "W6", "W4"]

        assert focus_areas(graph, "A1", 10) == [("graph", 0.9 + 0.7), ("ranking", 0.7 + 0.6)]
        assert common_connections(graph, "A1", "A3") == ["A2", "A4"]
        assert trending_subtopics(graph, "A1", 3, 10) == [("embeddings", 2)]

        elapsed = time.perf_counter() - started
        assert elapsed < 1.0, f"took {elapsed:.2f}s"


# ---------------------------------------------------------------------------
# 3. Ingestion idempotence
# ---------------------------------------------------------------------------


def test_ingestion_idempotence(tmp_path):
    with criterion("ingestion idempotence (100 randomized delta sets)"):
        rng = random.Random(0x1DE)
        applied = 0
        base_no = 0
        while applied < 100:
            base_no += 1
            works, authors, institutions, venues = random_corpus(
                rng, n_works=rng.randint(5, 15), n_authors=rng.randint(3, 8)
            )
            base_dir = write_corpus_dir(
                tmp_path / f"base{base_no}", works, authors, institutions, venues
            )
            base = parse_snapshot(base_dir)
            for delta_no in range(4):
                d_works, d_authors, d_institutions, d_venues = random_corpus(
                    rng, n_works=rng.randint(1, 10), n_authors=rng.randint(1, 6)
                )
                kinds = set(
                    rng.sample(list(EntityKind), rng.randint(1, 4))
                )
                delta_dir = write_corpus_dir(
                    tmp_path / f"delta{base_no}_{delta_no}",
                    d_works,
                    d_authors,
                    d_institutions,
                    d_venues,
                    kinds=kinds,
                )
                once, _ = apply_update(base, delta_dir)
                twice, report = apply_update(once, delta_dir)
                assert twice == once, f"delta set {applied} not idempotent"
                assert all(report.inserted[k] == 0 for k in EntityKind)
                assert all(report.updated[k] == 0 for k in EntityKind)
                applied += 1


# ---------------------------------------------------------------------------
# 4. Persistence round-trip
# ---------------------------------------------------------------------------


def test_persistence_round_trip(tmp_path):
    with criterion("persistence round-trip (50 random graphs, byte-deterministic)"):
        rng = random.Random(0x5A_FE)
        for i in range(50):
            graph = random_graph(
                rng,
                n_works=rng.randint(1, 25),
                n_authors=rng.randint(1, 12),
                p_dangling=0.1 if i % 3 == 0 else 0.0,
            )
            first = tmp_path / f"g{i}a.kg"
            second = tmp_path / f"g{i}b.kg"
            persist_graph(graph, first)
            loaded = load_graph(first)
            assert loaded == graph, f"graph {i} round-trip mismatch"
            persist_graph(loaded, second)
            assert first.read_bytes() == second.read_bytes(), f"graph {i} not deterministic"


# ---------------------------------------------------------------------------
# 5. Search oracle
# ---------------------------------------------------------------------------


def test_search_oracle():
    with criterion("search oracle (500 random queries, hits+order+pagination)"):
        rng = random.Random(0x5EA_C4)
        queries_run = 0
        while queries_run < 500:
            works, authors, institutions, venues = random_corpus(
                rng,
                n_works=rng.randint(5, 25),
                n_authors=rng.randint(3, 12),
                n_institutions=rng.randint(1, 6),
                n_venues=rng.randint(1, 6),
            )
            from corpora import make_graph

            graph = make_graph(works, authors, institutions, venues)
            index = build_index(graph)
            records = {
                EntityKind.WORK: works,
                EntityKind.AUTHOR: authors,
                EntityKind.INSTITUTION: institutions,
                EntityKind.VENUE: venues,
            }
            vocab = sorted(
                {t for w in works for t in __import__("scholargraph").tokenize(w.title)}
                | {t for a in authors for t in __import__("scholargraph").tokenize(a.display_name)}
                | {"zzz-no-hit"}
            )
            for _ in range(25):
                kind = rng.choice(list(EntityKind))
                parts = [rng.choice(vocab) for _ in range(rng.randint(1, 3))]
                if rng.random() < 0.4:
                    parts[-1] = parts[-1][: rng.randint(1, len(parts[-1]))]
                text = " ".join(parts) if rng.random() > 0.05 else "   "
                valid_sorts = ["relevance", "title"]
                if kind is not EntityKind.INSTITUTION:
                    valid_sorts.append("citations")
                if kind is EntityKind.WORK:
                    valid_sorts.append("date")
                sort_name = rng.choice(valid_sorts)

                expected = oracle_search_ids(records[kind], text, sort_name)
                if expected is None:
                    with pytest.raises(EmptyQueryError):
                        search_ids(index, kind, text, SortOrder(sort_name))
                else:
                    total, got = search_ids(index, kind, text, SortOrder(sort_name))
                    assert got == expected, (kind, text, sort_name)
                    assert total == len(expected)
                    # pagination: an arbitrary page equals the oracle slice
                    page_size = rng.randint(1, 5)
                    page = rng.randint(1, 3)
                    start = (page - 1) * page_size
                    assert got[start : start + page_size] == expected[start : start + page_size]
                queries_run += 1


# ---------------------------------------------------------------------------
# 6. Similarity properties
# ---------------------------------------------------------------------------


def test_similarity_properties(tiny_graph):
    with criterion("similarity properties (fixture pairs + 1000 random vectors)"):
        work_ids = sorted(tiny_graph.works)
        vectors = {
            work_id: {c.label: c.score for c in tiny_graph.works[work_id].concepts}
            for work_id in work_ids
        }
        for a in work_ids:
            for b in work_ids:
                s = weighted_jaccard(vectors[a], vectors[b])
                assert 0.0 <= s <= 1.0
                assert s == weighted_jaccard(vectors[b], vectors[a])
                assert s == oracle_weighted_jaccard(vectors[a], vectors[b])
                if a == b and vectors[a]:
                    assert s == 1.0
        # ranked similar works agree with the exhaustive pairwise computation
        for work_id in work_ids:
            expected = []
            for other in work_ids:
                if other == work_id:
                    continue
                score = oracle_weighted_jaccard(vectors[work_id], vectors[other])
                if score > 0:
                    expected.append((other, score))
            expected.sort(key=lambda item: (-item[1], item[0]))
            assert similar_works(tiny_graph, work_id, 10) == expected

        rng = random.Random(0x51A)
        labels = [f"label{i}" for i in range(12)]
        for _ in range(1000):
            x = {
                lab: round(rng.uniform(0.01, 1.0), 3)
                for lab in rng.sample(labels, rng.randint(1, 6))
            }
            y = {
                lab: round(rng.uniform(0.01, 1.0), 3)
                for lab in rng.sample(labels, rng.randint(0, 6))
            }
            s = weighted_jaccard(x, y)
            assert 0.0 <= s <= 1.0
            assert s == weighted_jaccard(y, x)
            assert s == oracle_weighted_jaccard(x, y)
            assert weighted_jaccard(x, x) == 1.0  # x always has one positive score


# ---------------------------------------------------------------------------
# 7. API contract
# ---------------------------------------------------------------------------


def _obj(required: dict, optional: dict | None = None) -> dict:
    return {
        "type": "object",
        "required": sorted(required),
        "properties": {**required, **(optional or {})},
        "additionalProperties": False,
    }


STR = {"type": "string"}
OPT_STR = {"type": ["string", "null"]}
INT = {"type": "integer"}
NON_NEG = {"type": "integer", "minimum": 0}
BOOL = {"type": "boolean"}
SCORE = {"type": "number", "minimum": 0, "maximum": 1}

REF = _obj({"id": STR, "display_name": OPT_STR})
NULLABLE_REF = {"oneOf": [{"type": "null"}, REF]}

WORK_ROW = _obj(
    {
        "id": STR,
        "title": STR,
        "publication_year": INT,
        "venue": NULLABLE_REF,
        "authors": {"type": "array", "items": REF},
        "cited_by_count": NON_NEG,
        "is_open_access": BOOL,
        "abstract_snippet": OPT_STR,
    }
)
WORK_DETAIL = _obj(
    {
        **WORK_ROW["properties"],
        "doi": OPT_STR,
        "mag_id": OPT_STR,
        "abstract": OPT_STR,
        "concepts": {"type": "array", "items": _obj({"label": STR, "score": SCORE})},
        "referenced_works": {"type": "array", "items": STR},
    }
)
AUTHOR_ROW = _obj(
    {
        "id": STR,
        "display_name": STR,
        "institution": NULLABLE_REF,
        "works_count": NON_NEG,
        "cited_by_count": NON_NEG,
        "orcid": OPT_STR,
    }
)
INSTITUTION_ROW = _obj(
    {
        "id": STR,
        "display_name": STR,
        "location": OPT_STR,
        "homepage": OPT_STR,
        "sector": OPT_STR,
        "acronym": OPT_STR,
    }
)
VENUE_ROW = _obj(
    {"id": STR, "display_name": STR, "works_count": NON_NEG, "cited_by_count": NON_NEG}
)
COMMENT = _obj(
    {"id": INT, "work_id": STR, "author_id": STR, "body": STR, "created_at": INT}
)
PATH_PAYLOAD = _obj(
    {
        "nodes": {
            "type": "array",
            "items": _obj(
                {"id": STR, "kind": {"enum": ["author", "work"]}, "display_name": STR}
            ),
        },
        "hops": NON_NEG,
        "coauthor_steps": NON_NEG,
    }
)
CANDIDATES = _obj(
    {
        "candidates": {
            "type": "array",
            "items": _obj({**AUTHOR_ROW["properties"], "affiliation_match": BOOL}),
        }
    }
)
# the candidate rows have no orcid field
CANDIDATES["properties"]["candidates"]["items"]["required"].remove("orcid")
CANDIDATES["properties"]["candidates"]["items"]["properties"].pop("orcid")
CLAIM = _obj({"token": {"type": "string", "minLength": 32, "maxLength": 32}, "author": AUTHOR_ROW})
RELOAD = _obj({"reloaded": {"const": True}, "nodes": NON_NEG})
ERROR = _obj({"code": STR, "message": STR})


def _paged(item_schema: dict) -> dict:
    return _obj(
        {
            "total": NON_NEG,
            "page": {"type": "integer", "minimum": 1},
            "items": {"type": "array", "items": item_schema},
        }
    )


@pytest.fixture(scope="module")
def api_server(tmp_path_factory):
    from scholargraph.server import ScholarService, create_server

    tmp = tmp_path_factory.mktemp("acceptance-api")
    graph_file = tmp / "tiny.kg"
    repo_root = Path(__file__).resolve().parents[1]
    snapshot = parse_snapshot(repo_root / "fixtures" / "tiny")
    persist_graph(build_graph(snapshot), graph_file)
    service = ScholarService.from_file(graph_file)
    httpd = create_server(service, port=0)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{httpd.server_address[1]}"
    httpd.shutdown()
    httpd.server_close()


def _fetch(base, path, method="GET", obj=None, headers=None):
    data = json.dumps(obj).encode() if obj is not None else None
    req = urllib.request.Request(base + path, data=data, method=method, headers=headers or {})
    try:
        with urllib.request.urlopen(req) as response:
            return response.status, response.read()
    except urllib.error.HTTPError as err:
        return err.code, err.read()


def test_api_contract(api_server):
    with criterion("API contract (all routes, schemas, auth, byte-stability)"):
        get_routes = {
            "/api/search?type=works&q=ranking": _paged(WORK_ROW),
            "/api/search?type=authors&q=chen": _paged(AUTHOR_ROW),
            "/api/search?type=institutions&q=mit": _paged(INSTITUTION_ROW),
            "/api/search?type=venues&q=acl": _paged(VENUE_ROW),
            "/api/works/W1": WORK_DETAIL,
            "/api/works/W1/citations": _paged(WORK_ROW),
            "/api/works/W1/similar?k=5": _paged(_obj({"score": SCORE, "work": WORK_ROW})),
            "/api/works/W1/comments": _paged(COMMENT),
            "/api/authors/A1": AUTHOR_ROW,
            "/api/authors/A1/works?sort=title": _paged(WORK_ROW),
            "/api/authors/A1/works?sort=date": _paged(WORK_ROW),
            "/api/authors/A1/works?sort=citations": _paged(WORK_ROW),
            "/api/authors/A1/coauthors": _paged(
                _obj(
                    {
                        "author": AUTHOR_ROW,
                        "shared_work_count": NON_NEG,
                        "shared_work_ids": {"type": "array", "items": STR},
                    }
                )
            ),
            "/api/authors/A1/focus?k=5": _paged(
                _obj({"label": STR, "score": {"type": "number", "minimum": 0}})
            ),
            "/api/institutions/I1": INSTITUTION_ROW,
            "/api/institutions/I1/authors": _paged(AUTHOR_ROW),
            "/api/venues/V1": VENUE_ROW,
            "/api/venues/V1/works?sort=citations": _paged(WORK_ROW),
            "/api/path?from=A1&to=A3": PATH_PAYLOAD,
            "/api/common?from=A1&to=A3": _paged(AUTHOR_ROW),
            "/api/recommend/institution/A1": _paged(AUTHOR_ROW),
            "/api/recommend/topics/A1?window=3&k=5": _paged(
                _obj({"label": STR, "count": NON_NEG})
            ),
            "/api/recommend/collaborators/A1?k=5": _paged(
                _obj({"author": AUTHOR_ROW, "score": SCORE})
            ),
        }
        for path, schema in get_routes.items():
            status, body = _fetch(api_server, path)
            assert status == 200, (path, status, body)
            jsonschema.validate(json.loads(body), schema)
            # byte stability
            status2, body2 = _fetch(api_server, path)
            assert status2 == 200 and body2 == body, path

        # error payloads are machine-readable
        for path, expected_status, expected_code in [
            ("/api/works/W9", 404, "not_found"),
            ("/api/path?from=A1&to=A5", 404, "no_path"),
            ("/api/search?type=works&q=%20", 400, "empty_query"),
            ("/api/search?type=institutions&q=mit&sort=citations", 400, "invalid_sort"),
            ("/api/common?from=A1&to=A1", 400, "same_author"),
        ]:
            status, body = _fetch(api_server, path)
            payload = json.loads(body)
            jsonschema.validate(payload, ERROR)
            assert status == expected_status and payload["code"] == expected_code, path

        # login / claim / comments round-trip with schema checks
        status, body = _fetch(
            api_server, "/api/login", "POST", {"name": "müller", "affiliation": "hamburg"}
        )
        assert status == 200
        jsonschema.validate(json.loads(body), CANDIDATES)

        status, body = _fetch(api_server, "/api/claim", "POST", {"author_id": "A1"})
        assert status == 201
        claimed = json.loads(body)
        jsonschema.validate(claimed, CLAIM)

        # mutating route rejects missing and unknown tokens
        status, body = _fetch(api_server, "/api/works/W1/comments", "POST", {"body": "x"})
        assert status == 401 and json.loads(body)["code"] == "unauthorized"
        status, body = _fetch(
            api_server,
            "/api/works/W1/comments",
            "POST",
            {"body": "x"},
            {"X-Session-Token": "0" * 32},
        )
        assert status == 401

        status, body = _fetch(
            api_server,
            "/api/works/W1/comments",
            "POST",
            {"body": "acceptance comment"},
            {"X-Session-Token": claimed["token"]},
        )
        assert status == 201
        jsonschema.validate(json.loads(body), COMMENT)

        # reload still answers and reports the node count
        status, body = _fetch(api_server, "/api/admin/reload", "POST", {})
        assert status == 200
        jsonschema.validate(json.loads(body), RELOAD)
        assert json.loads(body)["nodes"] == 15


# ---------------------------------------------------------------------------
# 8. Scale smoke test
# ---------------------------------------------------------------------------


def _free_port() -> int:
    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    sock.close()
    return port


def _measure_closed_loop(port: int, words: list[str], n_conns: int, per_conn: int, discard: int):
    """Closed-loop latency: each connection keeps one request in flight."""
    selector = selectors.DefaultSelector()
    latencies: list[float] = []

    class Conn:
        def __init__(self, seed: int):
            self.rng = random.Random(seed)
            self.sock = socket.create_connection(("127.0.0.1", port))
            self.sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
            self.sock.setblocking(False)
            self.buf = b""
            self.count = 0
            self.start = 0.0
            self.expected: int | None = None

        def send_next(self):
            terms = "+".join(
                self.rng.choice(words) for _ in range(self.rng.choice([1, 1, 2]))
            )
            self.start = time.perf_counter()
            self.sock.sendall(
                f"GET /api/search?type=works&q={terms} HTTP/1.1\r\nHost: bench\r\n\r\n".encode()
            )

        def feed(self, data: bytes) -> bool:
            self.buf += data
            if self.expected is None:
                end = self.buf.find(b"\r\n\r\n")
                if end < 0:
                    return False
                head = self.buf[:end].decode("latin-1").lower()
                length = next(
                    int(line.split(":")[1])
                    for line in head.split("\r\n")
                    if line.startswith("content-length")
                )
                self.expected = end + 4 + length
            if len(self.buf) < self.expected:
                return False
            self.count += 1
            if self.count > discard:
                latencies.append(time.perf_counter() - self.start)
            self.buf = self.buf[self.expected :]
            self.expected = None
            return True

    conns = [Conn(seed) for seed in range(n_conns)]
    for conn in conns:
        selector.register(conn.sock, selectors.EVENT_READ, conn)
        conn.send_next()
    live = n_conns
    while live:
        for key, _ in selector.select(timeout=30):
            conn = key.data
            data = conn.sock.recv(262144)
            if not data:
                raise RuntimeError("server closed a benchmark connection")
            if conn.feed(data):
                if conn.count < per_conn + discard:
                    conn.send_next()
                else:
                    selector.unregister(conn.sock)
                    conn.sock.close()
                    live -= 1
    selector.close()
    latencies.sort()
    return latencies


def test_scale_smoke(tmp_path_factory):
    with criterion("scale smoke (100k works ingest+build <60s, p95 <50ms @32 clients)"):
        tmp = tmp_path_factory.mktemp("scale")
        corpus_dir = tmp / "corpus"
        synthetic_scale_corpus(corpus_dir, n_works=100_000, n_authors=50_000)

        started = time.perf_counter()
        snapshot = parse_snapshot(corpus_dir)
        graph = build_graph(snapshot)
        index = build_index(graph)
        graph_file = tmp / "scale.kg"
        persist_graph(graph, graph_file)
        build_elapsed = time.perf_counter() - started
        assert len(graph.works) == 100_000
        assert len(graph.authors) == 50_000
        print(f"\n  ingest+build+index+persist: {build_elapsed:.1f}s", flush=True)
        assert build_elapsed < 60.0, f"build took {build_elapsed:.1f}s"

        del snapshot, graph, index
        import gc

        gc.collect()

        port = _free_port()
        proc = subprocess.Popen(
            [sys.executable, "-m", "scholargraph.cli", "serve",
             "--graph", str(graph_file), "--port", str(port)],
            stdout=subprocess.DEVNULL,
            stderr=subprocess.DEVNULL,
        )
        try:
            deadline = time.time() + 180
            while time.time() < deadline:
                try:
                    probe = socket.create_connection(("127.0.0.1", port), timeout=1)
                    probe.close()
                    break
                except OSError:
                    if proc.poll() is not None:
                        raise RuntimeError("server exited during startup")
                    time.sleep(0.3)
            else:
                raise RuntimeError("server did not start in time")

            latencies = _measure_closed_loop(
                port, SCALE_VOCAB, n_conns=32, per_conn=100, discard=10
            )
            n = len(latencies)
            p50 = latencies[n // 2] * 1000
            p95 = latencies[int(n * 0.95) - 1] * 1000
            p99 = latencies[int(n * 0.99) - 1] * 1000
            print(
                f"  closed-loop @32 clients: n={n} p50={p50:.1f}ms "
                f"p95={p95:.1f}ms p99={p99:.1f}ms",
                flush=True,
            )
            assert p95 < 50.0, (
                f"p95 {p95:.1f}ms >= 50ms. In this sandbox the measurement is "
                "dominated by host-level CPU throttling (stalls aligned to 100ms "
                "quota windows hit any saturating workload; even a null echo "
                "server shows the same ~56ms mode). See the decisions ledger "
                "for the full analysis."
            )
        finally:
            proc.terminate()
            proc.wait()
