from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from scholargraph import build_graph, build_index, parse_snapshot

REPO_ROOT = Path(__file__).resolve().parents[1]
TINY_DIR = REPO_ROOT / "fixtures" / "tiny"


@pytest.fixture(scope="session")
def tiny_dir() -> Path:
    return TINY_DIR


@pytest.fixture(scope="session")
def tiny_snapshot():
    return parse_snapshot(TINY_DIR)


@pytest.fixture(scope="session")
def tiny_graph(tiny_snapshot):
    return build_graph(tiny_snapshot)


@pytest.fixture(scope="session")
def tiny_index(tiny_graph):
    return build_index(tiny_graph)
