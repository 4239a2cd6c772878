"""Write run results as CSV plus a JSON column schema."""
import csv
import json
import logging
import os
from fractions import Fraction
from typing import Any, Dict, Sequence

logger = logging.getLogger(__name__)


def format_value(value: Any) -> str:
    """Reals with 6 significant digits; everything else as text."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (float, Fraction)):
        return format(float(value), ".6g")
    if hasattr(value, "item"):
        return format_value(value.item())
    return str(value)


class ResultExporter:
    """Export result rows to an output directory."""

    def __init__(self, output_dir: str):
        """Initialize the exporter."""
        self.output_dir = output_dir
        os.makedirs(output_dir, exist_ok=True)

    def path(self, filename: str) -> str:
        return os.path.join(self.output_dir, filename)

    def export_csv(self, rows: Sequence[Dict[str, Any]], fieldnames: Sequence[str], filename: str) -> str:
        """Export rows as CSV.

        Args:
            rows: One dict per row, keyed by column
            fieldnames: Column order
            filename: File name inside the output directory

        Returns:
            Path of the written file
        """
        output_path = self.path(filename)
        with open(output_path, "w", newline="", encoding="utf-8") as csvfile:
            writer = csv.DictWriter(csvfile, fieldnames=list(fieldnames), lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: format_value(row[k]) for k in fieldnames})

        logger.info(f"Exported {len(rows)} rows to {output_path}")
        return output_path

    def export_schema(self, tables: Dict[str, Dict[str, str]], filename: str = "schema.json") -> str:
        """Document every column of every table written to this directory."""
        output_path = self.path(filename)
        with open(output_path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(tables, f, indent=2, sort_keys=True)
            f.write("\n")
        return output_path
