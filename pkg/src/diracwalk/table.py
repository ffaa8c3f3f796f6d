"""Deterministic tabular results with a diff-friendly CSV form.

Schema: leading '#' comment lines carry the metadata (resolved config echo
and code version), then a header row, then comma-separated values printed
with 17 significant digits so doubles round-trip exactly.  Identical
configs must produce byte-identical files, so nothing time- or
machine-dependent is ever written here.
"""

from dataclasses import dataclass, field

import numpy as np


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add_row(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(
                f"row has {len(values)} entries, expected {len(self.columns)}"
            )
        for v in values:
            if isinstance(v, (float, np.floating)) and not np.isfinite(v):
                raise ValueError(f"non-finite table entry {v!r}")
        self.rows.append(list(values))

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([row[i] for row in self.rows])

    def to_csv(self) -> str:
        lines = [f"# {key} = {fmt(val)}" for key, val in self.metadata.items()]
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join(fmt(v) for v in row))
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(self.to_csv())


def read_csv(path):
    """Parse a file written by ``write_csv`` -> (metadata, columns, rows)."""
    meta, columns, rows = {}, None, []
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].partition("=")
                meta[key.strip()] = val.strip()
            elif columns is None:
                columns = line.split(",")
            else:
                rows.append([float(v) for v in line.split(",")])
    return meta, columns or [], np.array(rows) if rows else np.empty((0, 0))
