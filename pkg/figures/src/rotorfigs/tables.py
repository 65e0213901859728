"""Reader for the simulator's result tables.

The format: ``# key = value`` header lines, one ``schema`` key naming the
typed columns, a column-name row, then comma-separated data rows.  This is
an independent reader; the figure scripts never import the simulator.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


class FigureInputError(Exception):
    """Base class for unusable figure inputs."""


class MissingTableError(FigureInputError):
    pass


class SchemaMismatchError(FigureInputError):
    pass


class EmptyTableError(FigureInputError):
    pass


_CASTS = {"int": int, "float": float, "str": str}


@dataclass
class Table:
    path: Path
    schema: dict[str, str]
    columns: dict[str, list]
    metadata: dict[str, str]

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.columns.values()))) if self.columns else 0

    def array(self, name: str) -> np.ndarray:
        return np.asarray(self.columns[name])

    def meta_float(self, key: str) -> float:
        return float(self.metadata[key])


def read_table(path: Path) -> Table:
    path = Path(path)
    if not path.exists():
        raise MissingTableError(f"input table does not exist: {path}")
    metadata: dict[str, str] = {}
    schema: dict[str, str] | None = None
    names: list[str] | None = None
    columns: dict[str, list] = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if " = " not in body:
                raise SchemaMismatchError(f"{path}: malformed header line {line!r}")
            key, value = body.split(" = ", 1)
            if key == "schema":
                schema = dict(part.split(":", 1) for part in value.split(",") if part)
            else:
                metadata[key] = value
            continue
        if schema is None:
            raise SchemaMismatchError(f"{path}: data before the schema header")
        if names is None:
            names = line.split(",")
            columns = {name: [] for name in names}
            continue
        parts = line.split(",")
        for name, part in zip(names, parts):
            columns[name].append(_CASTS[schema[name]](part))
    if schema is None or names is None:
        raise SchemaMismatchError(f"{path}: no schema header found")
    return Table(path=path, schema=schema, columns=columns, metadata=metadata)


def require_columns(table: Table, required: dict[str, str]) -> None:
    """Check names and types; list expected versus found on mismatch."""
    missing = {
        name: kind
        for name, kind in required.items()
        if table.schema.get(name) != kind
    }
    if missing:
        raise SchemaMismatchError(
            f"{table.path}: expected columns {sorted(required.items())}, "
            f"found {sorted(table.schema.items())}"
        )


def require_rows(table: Table) -> None:
    if table.n_rows == 0:
        raise EmptyTableError(f"{table.path}: table has no data rows")
