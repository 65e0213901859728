"""Figure scripts for the PT-symmetric kicked rotor result tables."""

from .render import FigureSpec, build_spec, render
from .tables import (
    EmptyTableError,
    FigureInputError,
    MissingTableError,
    SchemaMismatchError,
    Table,
    read_table,
)

__version__ = "0.1.0"

__all__ = [
    "EmptyTableError",
    "FigureInputError",
    "FigureSpec",
    "MissingTableError",
    "SchemaMismatchError",
    "Table",
    "build_spec",
    "read_table",
    "render",
]
