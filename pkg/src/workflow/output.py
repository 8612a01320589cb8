from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from src.models.experiment import OutputFormat
from src.models.outputs import CommandTable


def _plain(value: Any) -> Any:
    return value.item() if isinstance(value, np.generic) else value


def _json_value(value: Any) -> Any:
    value = _plain(value)
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _csv_value(value: Any) -> str:
    """Missing MC values and non-finite numbers become empty cells."""
    value = _plain(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else ""
    return str(value)


def render_csv(table: CommandTable) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_csv_value(row.get(column)) for column in table.columns])
    return buffer.getvalue()


def render_json(table: CommandTable) -> str:
    payload = {
        "command": table.command,
        "columns": table.columns,
        "rows": [{column: _json_value(row.get(column)) for column in table.columns} for row in table.rows],
        "seed": table.seed,
        "reps": table.reps,
    }
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def render(table: CommandTable, output_format: OutputFormat | str) -> str:
    if OutputFormat(output_format) == OutputFormat.JSON:
        return render_json(table)
    return render_csv(table)


def write_output(text: str, out: str | Path | None) -> None:
    if out is None:
        print(text, end="")
        return
    output_path = Path(out)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    output_path.write_text(text, encoding="utf-8")


def error_payload(exc: BaseException) -> str:
    return json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}, indent=2)
