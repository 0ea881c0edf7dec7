"""Column table written as CSV with a provenance header."""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    return str(value)


@dataclass
class ResultTable:
    """Named, equal-length columns plus ``(key, value)`` provenance lines.

    The CSV starts with ``# key=value`` comment lines, followed by a header
    row and the data rows.  Floats are written with 17 significant digits.
    """

    columns: dict[str, list] = field(default_factory=dict)
    provenance: list[tuple[str, str]] = field(default_factory=list)

    def add_column(self, name: str, values) -> None:
        values = list(values)
        if self.columns and len(values) != self.n_rows:
            raise ValueError(
                f"column {name!r} has {len(values)} rows, table has {self.n_rows}"
            )
        self.columns[name] = values

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.columns.values()))) if self.columns else 0

    def column(self, name: str) -> np.ndarray:
        return np.asarray(self.columns[name])

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key, value in self.provenance:
            buf.write(f"# {key}={value}\n")
        names = list(self.columns)
        buf.write(",".join(names) + "\n")
        for row in zip(*(self.columns[n] for n in names)):
            buf.write(",".join(_fmt(v) for v in row) + "\n")
        return buf.getvalue()

    def meta_text(self) -> str:
        return "".join(f"{key}={value}\n" for key, value in self.provenance)

    def write(self, path) -> Path:
        """Write the CSV to ``path`` and the provenance to ``path`` with suffix ``.meta``."""
        path = Path(path)
        path.write_text(self.to_csv())
        meta = path.with_suffix(".meta")
        meta.write_text(self.meta_text())
        return meta


def read_csv(path) -> tuple[dict[str, str], dict[str, np.ndarray]]:
    """Parse a file written by :meth:`ResultTable.write` back into numbers.

    Non-numeric columns are returned as string arrays.
    """
    provenance = {}
    lines = Path(path).read_text().splitlines()
    body = []
    for line in lines:
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            provenance[key] = value
        else:
            body.append(line)
    names = body[0].split(",")
    rows = [line.split(",") for line in body[1:]]
    columns = {}
    for k, name in enumerate(names):
        raw = [r[k] for r in rows]
        try:
            columns[name] = np.array([float(v) for v in raw])
        except ValueError:
            columns[name] = np.array(raw)
    return provenance, columns
