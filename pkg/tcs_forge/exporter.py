"""Export search results: candidate pairs as JSON, rejection tallies as CSV."""

import json
import logging
from pathlib import Path

import polars as pl

from .hs_search import SearchResult

logger = logging.getLogger(__name__)

REJECTION_SCHEMA = {"side": pl.String, "curve": pl.String, "check": pl.String}


def rejection_summary(result: SearchResult) -> pl.DataFrame:
    """Count scanned classes by side, curve and first failing constraint."""
    rows = list(result.rejections) + [
        (str(c.side), c.curve, "accepted") for c in result.candidates_p + result.candidates_m
    ]
    columns = {
        name: [row[i] for row in rows] for i, name in enumerate(REJECTION_SCHEMA)
    }
    return (
        pl.DataFrame(columns, schema=REJECTION_SCHEMA)
        .group_by(["side", "curve", "check"])
        .agg(pl.len().alias("count"))
        .sort(["side", "curve", "count", "check"], descending=[False, False, True, False])
    )


class CandidateExporter:
    """Writes search output files."""

    def __init__(self, output_dir: str | Path):
        """Initialize exporter.

        Args:
            output_dir: Directory to write output files
        """
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def export_candidates(self, result: SearchResult, filename: str = "candidates.json") -> Path:
        """Write the candidate pairs, each with its certificate, as a JSON array."""
        output_path = self.output_dir / filename
        with open(output_path, "w", encoding="utf-8") as f:
            json.dump([p.to_json() for p in result.pairs], f, indent=2, sort_keys=True)
            f.write("\n")
        logger.info(f"Exported {len(result.pairs)} candidate pairs to {output_path}")
        return output_path

    def export_rejection_summary(
        self, result: SearchResult, filename: str = "rejections.csv"
    ) -> Path:
        output_path = self.output_dir / filename
        summary = rejection_summary(result)
        summary.write_csv(output_path)
        logger.info(f"Exported rejection summary ({summary.height} rows) to {output_path}")
        return output_path
