"""Plain-text result tables: comma-separated rows under a '#' metadata header.

The format is deliberately trivial: every header line is ``# key = value``,
one ``schema`` key declares the column names and types, and all floats are
written with 17 significant digits so the rows survive a write/read round
trip bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import TableFormatError

_CASTS = {"int": int, "float": float, "str": str}


def format_value(value, type_name: str) -> str:
    if type_name == "float":
        return format(float(value), ".17g")
    if type_name == "int":
        return str(int(value))
    return str(value)


@dataclass
class ResultTable:
    """Typed columns, plain rows, and a string-to-string metadata header."""

    schema: tuple[tuple[str, str], ...]
    rows: list[tuple]
    metadata: dict[str, str] = field(default_factory=dict)

    def column(self, name: str) -> list:
        for i, (col, _) in enumerate(self.schema):
            if col == name:
                return [row[i] for row in self.rows]
        raise TableFormatError(f"table has no column {name!r}")

    def meta_float(self, key: str) -> float:
        return float(self.metadata[key])


def write_table(table: ResultTable, path: Path) -> Path:
    path = Path(path)
    lines = []
    for key, value in table.metadata.items():
        value = str(value)
        if "\n" in value or "\n" in key:
            raise TableFormatError(f"metadata entry {key!r} contains a newline")
        lines.append(f"# {key} = {value}")
    schema_str = ",".join(f"{name}:{kind}" for name, kind in table.schema)
    lines.append(f"# schema = {schema_str}")
    lines.append(",".join(name for name, _ in table.schema))
    for row in table.rows:
        lines.append(
            ",".join(format_value(v, kind) for v, (_, kind) in zip(row, table.schema))
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_table(path: Path) -> ResultTable:
    path = Path(path)
    metadata: dict[str, str] = {}
    schema: tuple[tuple[str, str], ...] | None = None
    rows: list[tuple] = []
    header_seen = False
    for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if " = " not in body:
                raise TableFormatError(f"{path}:{line_no}: malformed header line {line!r}")
            key, value = body.split(" = ", 1)
            if key == "schema":
                schema = tuple(
                    tuple(part.split(":", 1)) for part in value.split(",") if part
                )
            else:
                metadata[key] = value
            continue
        if schema is None:
            raise TableFormatError(f"{path}: data encountered before the schema line")
        if not header_seen:
            names = line.split(",")
            if names != [name for name, _ in schema]:
                raise TableFormatError(
                    f"{path}: column header {names} does not match schema {schema}"
                )
            header_seen = True
            continue
        parts = line.split(",")
        if len(parts) != len(schema):
            raise TableFormatError(
                f"{path}:{line_no}: row has {len(parts)} fields, schema has {len(schema)}"
            )
        try:
            rows.append(
                tuple(_CASTS[kind](part) for part, (_, kind) in zip(parts, schema))
            )
        except (KeyError, ValueError) as exc:
            raise TableFormatError(f"{path}:{line_no}: {exc}") from exc
    if schema is None:
        raise TableFormatError(f"{path}: no schema header found")
    return ResultTable(schema=schema, rows=rows, metadata=metadata)
