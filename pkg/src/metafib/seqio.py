"""Binary sequence cache and CSV/JSON series export.

Cache layout (all little-endian)::

    b"MFIB"            magic
    u32                format version
    32 bytes           sha256 of the canonical spec rendering
    u64                number of stored terms
    u8                 1 if evaluation terminated right after the stored terms
    u64 * count        T(1), T(2), ...
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import struct
import warnings
from pathlib import Path
from typing import Optional

import numpy as np

from metafib.engine import SequenceTable, evaluate, extend, make_table
from metafib.errors import CacheFormatError
from metafib.genseq import generation_sequence, partition, spot_trace
from metafib.spec import RecursionSpec, render

MAGIC = b"MFIB"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sI32sQB")
CACHE_ENV = "METAFIB_CACHE_DIR"

SERIES_KINDS = ("values", "trend_deviation", "generation_marks")


def spec_digest(spec: RecursionSpec) -> bytes:
    return hashlib.sha256(render(spec).encode("ascii")).digest()


def save_table(table: SequenceTable, path) -> None:
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, spec_digest(table.spec), table.computed_len,
                          1 if table.terminated_at is not None else 0)
    payload = np.ascontiguousarray(table.values, dtype="<u8").tobytes()
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(header)
        fh.write(payload)
    os.replace(tmp, path)


def load_table(spec: RecursionSpec, path) -> Optional[SequenceTable]:
    """Load a cached table; None (with a warning) if it belongs to another spec."""
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < _HEADER.size:
        raise CacheFormatError(f"{path}: truncated header")
    magic, version, digest, count, term = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CacheFormatError(f"{path}: bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise CacheFormatError(f"{path}: format version {version}, expected {FORMAT_VERSION}")
    if term not in (0, 1):
        raise CacheFormatError(f"{path}: bad terminated flag {term}")
    body = data[_HEADER.size:]
    if len(body) != 8 * count:
        raise CacheFormatError(f"{path}: expected {8 * count} payload bytes, found {len(body)}")
    if digest != spec_digest(spec):
        warnings.warn(f"{path}: cache belongs to a different spec than {render(spec)}", stacklevel=2)
        return None
    vals = np.frombuffer(body, dtype="<u8").astype(np.int64)
    if count and (vals.min() < 1 or np.any(vals[: spec.r] != np.asarray(spec.initial_conditions[:count]))):
        raise CacheFormatError(f"{path}: payload inconsistent with the recursion's initial conditions")
    terminated_at = count + 1 if term else None
    return make_table(spec, vals.tolist(), terminated_at)


def cache_path(cache_dir, spec: RecursionSpec) -> Path:
    return Path(cache_dir) / f"{spec_digest(spec).hex()[:16]}.mfib"


def default_cache_dir() -> Optional[str]:
    return os.environ.get(CACHE_ENV) or None


def cached_evaluate(spec: RecursionSpec, n_max: int, cache_dir=None) -> SequenceTable:
    """evaluate() backed by the on-disk cache; misses recompute and store."""
    if cache_dir is None:
        return evaluate(spec, n_max)
    path = cache_path(cache_dir, spec)
    table = None
    if path.exists():
        try:
            table = load_table(spec, path)
        except CacheFormatError as exc:
            warnings.warn(f"ignoring unreadable cache: {exc}", stacklevel=2)
    if table is not None:
        if table.computed_len >= n_max:
            return _truncate(table, n_max)
        if table.terminated_at is not None:
            return table
        table = extend(table, n_max)
    else:
        table = evaluate(spec, n_max)
    Path(cache_dir).mkdir(parents=True, exist_ok=True)
    save_table(table, path)
    return table


def _truncate(table: SequenceTable, n_max: int) -> SequenceTable:
    # termination past n_max is invisible to evaluate(spec, n_max)
    if table.computed_len == n_max and table.terminated_at is None:
        return table
    return make_table(table.spec, table.values[:n_max].tolist())


def series_rows(table: SequenceTable, kind: str, spot: int = 1, lo: int = 1, hi: Optional[int] = None):
    """(header, rows) for one exportable data series."""
    if table.computed_len == 0:
        raise ValueError("empty table")
    hi = table.computed_len if hi is None else hi
    if not 1 <= lo <= hi <= table.computed_len:
        raise ValueError(f"empty or invalid selection [{lo}, {hi}] for table of length {table.computed_len}")
    if kind == "values":
        vals = table.values[lo - 1:hi].tolist()
        return ("n", "value"), [(n, v) for n, v in zip(range(lo, hi + 1), vals)]
    if kind == "trend_deviation":
        vals = table.values[lo - 1:hi].tolist()
        return ("n", "trend_deviation"), [(n, 2 * v - n) for n, v in zip(range(lo, hi + 1), vals)]
    if kind == "generation_marks":
        part = partition(generation_sequence(spot_trace(table, spot)))
        rows = [(rec.g, rec.alpha, rec.beta) for rec in part.records if lo <= rec.alpha <= hi]
        if not rows:
            raise ValueError(f"no generation starts inside [{lo}, {hi}]")
        return ("g", "alpha", "beta"), rows
    raise ValueError(f"unknown series kind {kind!r}; expected one of {SERIES_KINDS}")


def write_rows(header, rows, path, fmt: str = "csv") -> None:
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    elif fmt == "json":
        records = [dict(zip(header, row)) for row in rows]
        with open(path, "w", newline="\n") as fh:
            json.dump(records, fh, separators=(",", ":"))
            fh.write("\n")
    else:
        raise ValueError(f"unknown format {fmt!r}; expected csv or json")


def export_series(table: SequenceTable, kind: str, path, fmt: str = "csv", spot: int = 1,
                  lo: int = 1, hi: Optional[int] = None) -> None:
    header, rows = series_rows(table, kind, spot=spot, lo=lo, hi=hi)
    write_rows(header, rows, path, fmt)


def export_comparison(comparison, path, fmt: str = "csv") -> None:
    write_rows(comparison.HEADER, comparison.records(), path, fmt)
