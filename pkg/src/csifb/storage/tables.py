"""CSV result tables.

Every file starts with a `# csifb-<kind> schema v<N>` line followed by
the header row. Floats are written with 12 significant digits, missing
values as empty cells, so reruns with the same inputs are byte-identical.
"""

import csv
import io
import math
from pathlib import Path

from csifb.harness.records import as_row, columns
from csifb.utils.logger import logger

SCHEMA_VERSION = 1


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".12g")
    return str(value)


def render_table(kind: str, record_type, records) -> str:
    buffer = io.StringIO()
    buffer.write(f"# csifb-{kind} schema v{SCHEMA_VERSION}\n")
    header = columns(record_type)
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for record in records:
        row = as_row(record)
        writer.writerow([format_cell(row[name]) for name in header])
    return buffer.getvalue()


def write_table(path, kind: str, record_type, records) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = render_table(kind, record_type, list(records))
    path.write_text(text, encoding="utf-8", newline="")
    logger.info(f"Wrote {kind} table to {path}")
    return path


def read_table(path) -> tuple[str, list[dict]]:
    """(schema line, rows as dicts of strings)."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("# csifb-"):
        raise ValueError(f"{path}: missing csifb schema line")
    reader = csv.DictReader(lines[1:])
    return lines[0], list(reader)
