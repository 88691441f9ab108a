import json

import polars as pl

from tcs_forge.exporter import CandidateExporter, rejection_summary
from tcs_forge.hs_search import SearchResult


def _result(rejections):
    return SearchResult(
        pairs=[], candidates_p=[], candidates_m=[], rejections=rejections, scanned=len(rejections)
    )


def test_rejection_summary_counts():
    result = _result(
        [
            ("plus", "l", "positivity"),
            ("plus", "l", "positivity"),
            ("plus", "l", "hs_compat"),
            ("minus", "h", "hs_compat"),
        ]
    )
    summary = rejection_summary(result)
    assert summary.columns == ["side", "curve", "check", "count"]
    assert summary.rows() == [
        ("minus", "h", "hs_compat", 1),
        ("plus", "l", "positivity", 2),
        ("plus", "l", "hs_compat", 1),
    ]


def test_rejection_summary_empty():
    assert rejection_summary(_result([])).height == 0


def test_exporter_creates_output_dir(tmp_path):
    out = tmp_path / "nested" / "out"
    CandidateExporter(out)
    assert out.is_dir()


def test_export_empty_candidates(tmp_path):
    path = CandidateExporter(tmp_path).export_candidates(_result([]))
    with open(path, encoding="utf-8") as f:
        assert json.load(f) == []


def test_export_search_result(tmp_path, search_result):
    exporter = CandidateExporter(tmp_path)
    candidates = exporter.export_candidates(search_result)
    with open(candidates, encoding="utf-8") as f:
        data = json.load(f)
    assert len(data) == len(search_result.pairs)
    assert {"plus", "minus", "matches", "checks", "certificate"} <= set(data[0])
    assert all(entry["certificate"]["verdict"] == "inconclusive" for entry in data)

    summary = pl.read_csv(exporter.export_rejection_summary(search_result))
    assert summary["count"].sum() == search_result.scanned
    accepted = summary.filter(pl.col("check") == "accepted")["count"].sum()
    assert accepted == len(search_result.candidates_p) + len(search_result.candidates_m)
