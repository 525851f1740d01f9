"""Column tables with a metadata block, serialized as CSV or JSON."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

FLOAT_FORMAT = ".16e"  # 17 significant digits: lossless for binary64


def format_number(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, FLOAT_FORMAT)


def _json_number(x: float):
    x = float(x)
    return x if math.isfinite(x) else format_number(x)


def clean_metadata(value):
    """Replace non-finite floats by ``None`` so the block is strict JSON."""
    if isinstance(value, dict):
        return {k: clean_metadata(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [clean_metadata(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, np.generic):
        return clean_metadata(value.item())
    return value


@dataclass
class SweepTable:
    columns: dict[str, np.ndarray]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.columns = {k: np.atleast_1d(np.asarray(v, dtype=float)) for k, v in self.columns.items()}
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ValueError(f"columns have unequal lengths {sorted(lengths)}")

    def __len__(self):
        return len(next(iter(self.columns.values()))) if self.columns else 0

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(self.columns))
        for row in zip(*self.columns.values()):
            writer.writerow([format_number(x) for x in row])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "metadata": clean_metadata(self.metadata),
            "columns": {k: [_json_number(x) for x in v] for k, v in self.columns.items()},
        }
        return json.dumps(doc, indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SweepTable":
        doc = json.loads(text)
        cols = {k: np.array([float(x) for x in v]) for k, v in doc["columns"].items()}
        return cls(cols, doc["metadata"])

    @classmethod
    def from_csv(cls, text: str, metadata: dict | None = None) -> "SweepTable":
        rows = list(csv.reader(io.StringIO(text)))
        header, body = rows[0], rows[1:]
        cols = {name: np.array([float(r[i]) for r in body]) for i, name in enumerate(header)}
        return cls(cols, metadata or {})

    def dumps(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")
