"""Summary statistics over a results table.

Per (method, N, B): count, mean, sample standard deviation (n - 1
denominator, 0 for a single record), min and max of the reward, plus the
difference of the LNS and greedy means where both were run.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import pandas as pd
import structlog

from fleet_design.models.quantities import dump_rational, to_rational

logger = structlog.get_logger(__name__)

SUMMARY_COLUMNS = ("method", "N", "B", "count", "mean", "std", "min", "max")
DIFFERENCE_COLUMNS = ("N", "B", "lns_mean", "greedy_mean", "lns_minus_greedy")


@dataclass(frozen=True)
class Summary:
    table: pd.DataFrame
    differences: pd.DataFrame

    def to_text(self) -> str:
        """Plain-text rendering of both tables."""
        parts = [self.table.to_string(index=False)]
        if not self.differences.empty:
            parts += ["", "lns - greedy:", self.differences.to_string(index=False)]
        return "\n".join(parts) + "\n"


def summarize(results: pd.DataFrame) -> Summary:
    """Aggregate rewards by (method, N, B).

    The output does not depend on the order of the input rows.

    Raises:
        ValueError: If *results* is empty.
    """
    if results.empty:
        raise ValueError("cannot summarize an empty results table")

    frame = results.copy()
    frame["B"] = frame["B"].map(lambda v: to_rational(str(v)))
    grouped = frame.groupby(["method", "N", "B"], sort=True)["reward"]
    table = grouped.agg(["count", "mean", "std", "min", "max"]).reset_index()
    table["std"] = table["std"].fillna(0.0)

    means = table.pivot_table(index=["N", "B"], columns="method", values="mean")
    if {"lns", "greedy"} <= set(means.columns):
        # only cells where both methods ran
        differences = means[["lns", "greedy"]].dropna().reset_index()
        differences.columns = ["N", "B", "lns_mean", "greedy_mean"]
        differences["lns_minus_greedy"] = differences["lns_mean"] - differences["greedy_mean"]
    else:
        differences = pd.DataFrame(columns=list(DIFFERENCE_COLUMNS))

    table["B"] = table["B"].map(dump_rational)
    differences["B"] = differences["B"].map(dump_rational)
    return Summary(table=table[list(SUMMARY_COLUMNS)], differences=differences)


def write_summary(summary: Summary, out_dir: Path) -> tuple[Path, Path]:
    """Write ``summary.csv`` and ``summary.txt`` (and ``differences.csv``)."""
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "summary.csv"
    txt_path = out_dir / "summary.txt"
    summary.table.to_csv(csv_path, index=False, lineterminator="\n", float_format="%.6g")
    if not summary.differences.empty:
        summary.differences.to_csv(
            out_dir / "differences.csv", index=False, lineterminator="\n", float_format="%.6g"
        )
    txt_path.write_text(summary.to_text(), encoding="utf-8")
    logger.info("summary_written", path=str(csv_path), groups=len(summary.table))
    return csv_path, txt_path
