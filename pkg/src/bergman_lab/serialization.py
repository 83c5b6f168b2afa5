"""JSON/CSV encodings: complex numbers are always ``[re, im]`` pairs."""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Iterable, Sequence
from pathlib import Path

import numpy as np


def encode_complex(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def decode_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError(f"complex numbers are [re, im] pairs, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    raise ValueError(f"cannot read a complex number from {v!r}")


def encode_point(p) -> list[list[float]]:
    return [encode_complex(c) for c in np.ravel(np.asarray(p, dtype=complex))]


def decode_point(data) -> np.ndarray:
    """A point from a JSON array of [re, im] pairs (bare reals allowed)."""
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, list) or not data:
        raise ValueError("a point is a non-empty JSON array of [re, im] pairs")
    return np.array([decode_complex(v) for v in data], dtype=np.complex128)


def decode_points(data) -> np.ndarray:
    """A single point or a list of points; returns shape (n, dim)."""
    if isinstance(data, str):
        data = json.loads(data)
    if data and isinstance(data[0], list) and data[0] and isinstance(data[0][0], list):
        return np.stack([decode_point(p) for p in data])
    return decode_point(data)[None, :]


def csv_header(dim: int) -> list[str]:
    return [f"{part}{i}" for i in range(dim) for part in ("re", "im")]


def points_to_csv(points: np.ndarray, extra: dict[str, Sequence] | None = None) -> str:
    points = np.atleast_2d(np.asarray(points, dtype=complex))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    extra = extra or {}
    w.writerow(csv_header(points.shape[1]) + list(extra))
    for k, p in enumerate(points):
        row = [repr(float(v)) for c in p for v in (c.real, c.imag)]
        row += [_cell(col[k]) for col in extra.values()]
        w.writerow(row)
    return buf.getvalue()


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def points_from_csv(source: str | Path | Iterable[str]) -> np.ndarray:
    """Read ``re0,im0,re1,im1,...`` columns (extra columns are ignored)."""
    if isinstance(source, (str, Path)) and Path(source).exists():
        lines = Path(source).read_text().splitlines()
    elif isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = list(source)
    rows = list(csv.DictReader(lines))
    if not rows:
        raise ValueError("CSV has no data rows")
    dim = 0
    while f"re{dim}" in rows[0] and f"im{dim}" in rows[0]:
        dim += 1
    if dim == 0:
        raise ValueError("CSV needs re0,im0,... columns")
    return np.array([[complex(float(r[f"re{i}"]), float(r[f"im{i}"])) for i in range(dim)]
                     for r in rows], dtype=np.complex128)


def rows_to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, default=_default)


def _default(o):
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, (complex, np.complexfloating)):
        return encode_complex(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")
