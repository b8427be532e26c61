"""CSV schema for benchmark records and validating loaders.

The record schema is fixed: one row per sample with the columns below, plus
optional field-dump files (``<controller>_field.csv``) whose header is ``t``
followed by ``x=<position>`` columns.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

RECORD_COLUMNS = ("t", "setpoint", "y_ref", "dy_ref", "y_true", "y_meas",
                  "u_cmd", "u_eff", "F_est", "aux")


class SchemaError(ValueError):
    """A CSV does not match the record schema; the message names the column."""


@dataclass
class RecordTable:
    """One controller's record: named columns as float arrays."""

    path: Path
    columns: dict[str, np.ndarray]
    has_aux: bool

    @property
    def label(self) -> str:
        return self.path.stem

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]


@dataclass
class FieldTable:
    """A space-time field dump: times, positions, and a (t, x) value grid."""

    path: Path
    t: np.ndarray
    x: np.ndarray
    w: np.ndarray


def load_record(path) -> RecordTable:
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path.name}: empty file, expected header "
                              f"{','.join(RECORD_COLUMNS)}") from None
        for column in RECORD_COLUMNS:
            if column not in header:
                raise SchemaError(f"{path.name}: missing column {column!r}")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path.name}: no data rows")
    idx = {name: header.index(name) for name in RECORD_COLUMNS}
    columns: dict[str, np.ndarray] = {}
    aux_raw = [row[idx["aux"]] for row in rows]
    has_aux = any(cell.strip() for cell in aux_raw)
    for name in RECORD_COLUMNS:
        if name == "aux":
            if has_aux:
                columns[name] = _parse_float_column(path, name,
                                                    [c or "nan" for c in aux_raw])
            else:
                columns[name] = np.full(len(rows), np.nan)
            continue
        columns[name] = _parse_float_column(path, name,
                                            [row[idx[name]] for row in rows])
    return RecordTable(path=path, columns=columns, has_aux=has_aux)


def _parse_float_column(path: Path, name: str, cells) -> np.ndarray:
    try:
        return np.array([float(c) for c in cells])
    except ValueError as exc:
        raise SchemaError(f"{path.name}: column {name!r} holds a non-numeric "
                          f"value ({exc})") from None


def load_field(path) -> FieldTable:
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path.name}: empty field file") from None
        if not header or header[0] != "t":
            raise SchemaError(f"{path.name}: missing column 't'")
        positions = []
        for cell in header[1:]:
            if not cell.startswith("x="):
                raise SchemaError(f"{path.name}: field column {cell!r} must "
                                  f"look like x=<position>")
            positions.append(float(cell[2:]))
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path.name}: no data rows")
    t = np.array([float(r[0]) for r in rows])
    w = np.array([[float(c) for c in r[1:]] for r in rows])
    return FieldTable(path=path, t=t, x=np.array(positions), w=w)


def load_scenario_dir(csv_dir) -> tuple[list[RecordTable], dict[str, FieldTable]]:
    """All controller records in a scenario directory, plus field dumps."""
    csv_dir = Path(csv_dir)
    records = []
    fields = {}
    for path in sorted(csv_dir.glob("*.csv")):
        if path.stem.endswith("_field"):
            fields[path.stem[: -len("_field")]] = load_field(path)
        else:
            records.append(load_record(path))
    if not records:
        raise SchemaError(f"no record CSVs found in {csv_dir}")
    return records, fields
