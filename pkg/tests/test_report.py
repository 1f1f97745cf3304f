from __future__ import annotations

import pytest

from scholargraph.errors import NotFoundError
from scholargraph.report import author_report

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


class TestAuthorReport:
    def test_writes_tables_and_figures(self, tiny_graph, tmp_path):
        written = author_report(tiny_graph, "A1", tmp_path / "out")
        names = [p.name for p in written]
        assert names == [
            "coauthors.tsv",
            "focus_areas.tsv",
            "collaborators.tsv",
            "coauthor_network.png",
            "focus_areas.png",
        ]
        for path in written:
            assert path.stat().st_size > 0

    def test_tsv_contents(self, tiny_graph, tmp_path):
        out = tmp_path / "out"
        author_report(tiny_graph, "A1", out)
        coauthors = (out / "coauthors.tsv").read_text(encoding="utf-8").splitlines()
        assert coauthors[0] == "author_id\tdisplay_name\tshared_work_count\tshared_work_ids"
        assert coauthors[1] == "A2\tBob Chen\t1\tW1"
        assert coauthors[2] == "A4\tDan Evans\t1\tW6"

        focus = (out / "focus_areas.tsv").read_text(encoding="utf-8").splitlines()
        assert focus[0] == "label\tscore"
        assert focus[1] == f"graph\t{0.9 + 0.7!r}"
        assert focus[2] == f"ranking\t{0.7 + 0.6!r}"

        collaborators = (out / "collaborators.tsv").read_text(encoding="utf-8").splitlines()
        assert collaborators[0] == "author_id\tdisplay_name\tscore\tcited_by_count"
        assert collaborators[1].startswith("A3\tCarol Diaz\t")

    def test_figures_are_png(self, tiny_graph, tmp_path):
        out = tmp_path / "out"
        author_report(tiny_graph, "A1", out)
        for name in ("coauthor_network.png", "focus_areas.png"):
            assert (out / name).read_bytes()[:8] == PNG_MAGIC

    def test_author_without_coauthors(self, tiny_graph, tmp_path):
        out = tmp_path / "solo"
        written = author_report(tiny_graph, "A5", out)
        assert (out / "coauthors.tsv").read_text(encoding="utf-8").splitlines()[1:] == []
        assert all(p.stat().st_size > 0 for p in written)

    def test_tsv_deterministic(self, tiny_graph, tmp_path):
        author_report(tiny_graph, "A1", tmp_path / "one")
        author_report(tiny_graph, "A1", tmp_path / "two")
        for name in ("coauthors.tsv", "focus_areas.tsv", "collaborators.tsv"):
            assert (tmp_path / "one" / name).read_bytes() == (tmp_path / "two" / name).read_bytes()

    def test_unknown_author(self, tiny_graph, tmp_path):
        with pytest.raises(NotFoundError):
            author_report(tiny_graph, "A99", tmp_path)

    def test_k_limits_tables(self, tiny_graph, tmp_path):
        out = tmp_path / "k1"
        author_report(tiny_graph, "A1", out, k=1)
        focus = (out / "focus_areas.tsv").read_text(encoding="utf-8").splitlines()
        assert len(focus) == 2  # header + one row
