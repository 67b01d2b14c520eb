import json
import logging
import os
from typing import Any, Optional, Sequence

from pydantic import BaseModel

logger = logging.getLogger(__name__)


def format_table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """Markdown table with columns padded to a common width"""
    cells = [[str(h) for h in headers]] + [[_cell(v) for v in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]

    def line(row):
        return "| " + " | ".join(value.ljust(widths[i]) for i, value in enumerate(row)) + " |"

    rule = "|" + "|".join("-" * (w + 2) for w in widths) + "|"
    return "\n".join([line(cells[0]), rule] + [line(row) for row in cells[1:]])


def _cell(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(getattr(value, "value", value))


def save_report(name: str, record: Any, table: Optional[str] = None, directory: str = "./output", title: Optional[str] = None) -> str:
    """Write `<name>.json` (sorted keys) and, with a table, `<name>.md`; returns the JSON path"""
    os.makedirs(directory, exist_ok=True)
    if isinstance(record, BaseModel):
        record = record.model_dump(mode="json")

    json_path = os.path.join(directory, f"{name}.json")
    with open(json_path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(record, f, indent=2, sort_keys=True)
        f.write("\n")

    if table is not None:
        md_path = os.path.join(directory, f"{name}.md")
        with open(md_path, "w", encoding="utf-8", newline="\n") as f:
            if title:
                f.write(f"# {title}\n\n")
            f.write(table)
            f.write("\n")

    logger.info(f"Report saved as: {json_path}")
    return json_path
