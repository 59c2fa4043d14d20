"""Spot sequences, spot-based generation sequences and generation partitions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from metafib.engine import SequenceTable
from metafib.spec import ConwayFamily, spot_count


@dataclass(frozen=True, eq=False)
class SpotTrace:
    """S_p(n) for r < n <= computed_len; ``values[i] == S_p(r + 1 + i)``."""

    p: int
    r: int
    values: np.ndarray

    @property
    def horizon(self) -> int:
        return self.r + len(self.values)

    def __getitem__(self, n: int) -> int:
        if not self.r < n <= self.horizon:
            raise IndexError(f"spot index {n} outside ({self.r}, {self.horizon}]")
        return int(self.values[n - self.r - 1])


@dataclass(frozen=True, eq=False)
class GenerationSequence:
    """M_p(n) for 1 <= n <= computed_len; ``values[n-1] == M_p(n)``."""

    p: int
    values: np.ndarray

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= len(self.values):
            raise IndexError(f"index {n} outside [1, {len(self.values)}]")
        return int(self.values[n - 1])


@dataclass(frozen=True)
class GenerationRecord:
    g: int
    alpha: int
    beta: int
    size: int
    fragmented: bool
    complete: bool


@dataclass(frozen=True)
class GenerationPartition:
    p: int
    records: tuple[GenerationRecord, ...]

    @property
    def interval_structure(self) -> bool:
        return not any(rec.fragmented for rec in self.records if rec.complete)

    def __getitem__(self, g: int) -> GenerationRecord:
        rec = self.records[g - 1]
        assert rec.g == g
        return rec

    def __len__(self):
        return len(self.records)

    def alpha(self, g: int) -> int:
        return self[g].alpha

    def beta(self, g: int) -> int:
        return self[g].beta

    def fragmented(self) -> list[GenerationRecord]:
        return [rec for rec in self.records if rec.fragmented]


def spot_trace(table: SequenceTable, p: int) -> SpotTrace:
    spec = table.spec
    k = spot_count(spec)
    if not 1 <= p <= k:
        raise ValueError(f"spot index p={p} outside [1, {k}]")
    if table.computed_len == 0:
        raise ValueError("empty table")
    r = spec.r
    N = table.computed_len
    vals = table.values.astype(np.int64)
    n = np.arange(r + 1, N + 1, dtype=np.int64)
    fam = spec.family
    if isinstance(fam, ConwayFamily):
        # x = A^k(n-1), composed with vectorized lookups
        x = n - 1
        for _ in range(fam.k):
            x = vals[x - 1]
        s = n - x if p == 1 else x
    else:
        a, b = fam.params[p - 1]
        s = n - a - vals[n - b - 1]
    s = np.ascontiguousarray(s, dtype=np.int64)
    s.flags.writeable = False
    return SpotTrace(p, r, s)


def generation_sequence(trace: SpotTrace, r: int | None = None) -> GenerationSequence:
    """M_p(n) = M_p(S_p(n)) + 1, with M_p = 1 on the first r indices."""
    if r is None:
        r = trace.r
    if r != trace.r:
        raise ValueError(f"r={r} disagrees with the trace's r={trace.r}")
    S = trace.values.tolist()
    M = [0] + [1] * r
    append = M.append
    for s in S:
        append(M[s] + 1)
    arr = np.asarray(M[1:], dtype=np.int64)
    arr.flags.writeable = False
    return GenerationSequence(trace.p, arr)


def partition(gen: GenerationSequence) -> GenerationPartition:
    M = gen.values
    if len(M) == 0:
        raise ValueError("empty generation sequence")
    gmax = int(M.max())
    counts = np.bincount(M, minlength=gmax + 1)
    # first / last occurrence of each generation number (1-based indices)
    first = np.zeros(gmax + 1, dtype=np.int64)
    last = np.zeros(gmax + 1, dtype=np.int64)
    gs, pos = np.unique(M, return_index=True)
    first[gs] = pos + 1
    gs, pos = np.unique(M[::-1], return_index=True)
    last[gs] = len(M) - pos
    records = []
    for g in range(1, gmax + 1):
        if counts[g] == 0:
            raise ValueError(f"generation numbers have a gap at g={g}")
        alpha, beta, size = int(first[g]), int(last[g]), int(counts[g])
        records.append(GenerationRecord(g, alpha, beta, size,
                                        fragmented=size != beta - alpha + 1,
                                        complete=g < gmax))
    return GenerationPartition(gen.p, tuple(records))


def is_slow(values, lo: int = 1, hi: int | None = None) -> bool:
    """True iff values[lo..hi] (1-based, inclusive) only step by 0 or 1."""
    arr = np.asarray(values)
    if hi is None:
        hi = len(arr)
    if not 1 <= lo < hi <= len(arr):
        raise ValueError(f"need 1 <= lo < hi <= {len(arr)}, got lo={lo}, hi={hi}")
    d = np.diff(arr[lo - 1:hi])
    return bool(((d == 0) | (d == 1)).all())


def maternal(table: SequenceTable, p: int = 1):
    """Shortcut: (trace, generation sequence, partition) for spot p."""
    tr = spot_trace(table, p)
    gen = generation_sequence(tr)
    return tr, gen, partition(gen)
