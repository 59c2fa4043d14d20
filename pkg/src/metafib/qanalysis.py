"""Q-sequence block analysis.

Compares maternal generation start points of Q (spot n - Q(n-1)) with
Pinn's generation start points, measures the jump in Q at each start point,
and locates transition points where large oscillations of Q(n) - n/2 resume
after a quiet stretch.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from itertools import product
from math import isqrt
from typing import Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from metafib.engine import SequenceTable
from metafib.genseq import generation_sequence, partition, spot_trace

# Pinn's start points for generations 1..11, read off the graph by eye.
PINN_TABULATED = (1, 3, 6, 12, 23, 48, 96, 192, 384, 768, 1522)


@dataclass(frozen=True)
class TransitionParams:
    """Quiet-region / spike detector settings.

    A quiet region is a run of indices where the maximum of |2T(n) - n| / n
    over the trailing ``window`` terms stays below ``quiet_threshold``; the
    transition is the first later index where that ratio exceeds
    ``spike_factor``.
    """

    window: int = 64
    quiet_threshold: float = 0.015
    spike_factor: float = 0.05

    def __post_init__(self):
        if self.window < 2:
            raise ValueError(f"window must be >= 2, got {self.window}")
        if self.quiet_threshold <= 0 or self.spike_factor <= 0:
            raise ValueError("thresholds must be positive")


DEFAULT_PARAMS = TransitionParams()


@dataclass(frozen=True)
class ComparisonRow:
    g: int
    alpha_maternal: int
    alpha_pinn: int
    dev_maternal: Fraction
    dev_pinn: Fraction
    transition: Optional[int]


@dataclass(frozen=True)
class ComparisonTable:
    rows: tuple[ComparisonRow, ...]
    params: TransitionParams

    HEADER = ("g", "alpha_maternal", "alpha_pinn", "dev_maternal_pct", "dev_pinn_pct", "transition")

    def records(self) -> list[tuple]:
        """Rows as plain tuples with percentages rendered to 2 decimals."""
        return [(row.g, row.alpha_maternal, row.alpha_pinn, format_percent(row.dev_maternal),
                 format_percent(row.dev_pinn), row.transition)
                for row in self.rows]

    def render(self) -> str:
        recs = [self.HEADER] + [tuple("-" if x is None else str(x) for x in rec)
                                for rec in self.records()]
        widths = [max(len(rec[i]) for rec in recs) for i in range(len(self.HEADER))]
        lines = ["  ".join(cell.rjust(w) for cell, w in zip(rec, widths)) for rec in recs]
        p = self.params
        lines.append(f"# transition params: window={p.window} quiet_threshold={p.quiet_threshold} "
                     f"spike_factor={p.spike_factor}")
        return "\n".join(lines) + "\n"


def pinn_start(g: int) -> int:
    if g < 1:
        raise ValueError(f"generation must be >= 1, got {g}")
    if g <= len(PINN_TABULATED):
        return PINN_TABULATED[g - 1]
    # floor(2^(g - 1/2)) = floor(sqrt(2^(2g-1)))
    return isqrt(2 ** (2 * g - 1))


def deviation(table: SequenceTable, idx: int) -> Fraction:
    """|T(idx) - T(idx-1)| / T(idx-1) * 100 as an exact rational."""
    if not 2 <= idx <= table.computed_len:
        raise ValueError(f"idx={idx} outside [2, {table.computed_len}]")
    prev, cur = table[idx - 1], table[idx]
    return Fraction(abs(cur - prev) * 100, prev)


def format_percent(value: Fraction) -> str:
    d = Decimal(value.numerator) / Decimal(value.denominator)
    return str(d.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def trend_deviation(table: SequenceTable) -> np.ndarray:
    """2T(n) - n for n = 1..computed_len (twice Q(n) - n/2, kept integral)."""
    n = np.arange(1, table.computed_len + 1, dtype=np.int64)
    return 2 * table.values - n


def detect_transitions(table: SequenceTable, params: TransitionParams = DEFAULT_PARAMS) -> list[int]:
    N = table.computed_len
    w = params.window
    if w > N:
        raise ValueError(f"window={w} exceeds table length {N}")
    n = np.arange(1, N + 1, dtype=np.int64)
    ratio = np.abs(trend_deviation(table)) / n

    # rolling[i] covers indices i+1 .. i+w (1-based), so ends at n = i + w
    rolling = sliding_window_view(ratio, w).max(axis=1)
    quiet = np.flatnonzero(rolling < params.quiet_threshold)
    if len(quiet) == 0:
        return []
    breaks = np.flatnonzero(np.diff(quiet) > 1)
    region_ends = np.append(quiet[breaks], quiet[-1]) + w

    spikes = np.flatnonzero(ratio > params.spike_factor) + 1
    found = set()
    for end in region_ends:
        j = np.searchsorted(spikes, end, side="right")
        if j < len(spikes):
            found.add(int(spikes[j]))
    return sorted(found)


def maternal_partition(table: SequenceTable):
    return partition(generation_sequence(spot_trace(table, 1)))


def build_comparison(table: SequenceTable, g_max: int,
                     params: TransitionParams = DEFAULT_PARAMS,
                     g_min: int = 1) -> ComparisonTable:
    part = maternal_partition(table)
    if len(part) < g_max:
        raise ValueError(f"table of length {table.computed_len} holds only {len(part)} maternal "
                         f"generations, need {g_max}")
    need = max(part.alpha(g_max), pinn_start(g_max))
    if table.computed_len < need:
        raise ValueError(f"table horizon must be at least {need}, got {table.computed_len}")
    transitions = np.asarray(detect_transitions(table, params), dtype=np.int64)
    # each detection belongs to the generation whose start is nearest on a log scale
    starts = np.array([rec.alpha for rec in part.records], dtype=np.float64)
    owner = np.argmin(np.abs(np.log(transitions[:, None] / starts[None, :])), axis=1) + 1

    rows = []
    for g in range(g_min, g_max + 1):
        alpha = part.alpha(g)
        pinn = pinn_start(g)
        dev_m = deviation(table, alpha) if alpha >= 2 else Fraction(0)
        dev_p = deviation(table, pinn) if pinn >= 2 else Fraction(0)
        cands = transitions[owner == g]
        trans = None
        if len(cands):
            trans = int(cands[np.argmin(np.abs(cands - alpha))])
        rows.append(ComparisonRow(g, alpha, pinn, dev_m, dev_p, trans))
    return ComparisonTable(tuple(rows), params)


def transition_hits(transitions, targets, rel_tol=0.01) -> dict:
    """For each target, the nearest transition within rel_tol (or None)."""
    arr = np.asarray(transitions, dtype=np.int64)
    out = {}
    for t in targets:
        best = None
        if len(arr):
            cand = int(arr[np.argmin(np.abs(arr - t))])
            if abs(cand - t) <= rel_tol * t:
                best = cand
        out[t] = best
    return out


def calibrate(table: SequenceTable, targets, rel_tol=0.01,
              windows=(8, 16, 32, 48, 64, 96, 128, 192, 256),
              quiet=(0.004, 0.006, 0.008, 0.01, 0.012, 0.015, 0.02, 0.025, 0.03),
              spikes=(0.02, 0.03, 0.04, 0.05, 0.06, 0.08, 0.1)):
    """Grid search over detector settings.

    Ranks by number of targets hit, then by fewest detections, then by
    closeness to the default window. Returns (params, hits, n_detections)
    for the best setting.
    """
    best = None
    for w, qt, sp in product(windows, quiet, spikes):
        if sp <= qt or w > table.computed_len:
            continue
        params = TransitionParams(w, qt, sp)
        found = detect_transitions(table, params)
        hits = transition_hits(found, targets, rel_tol)
        n_hit = sum(v is not None for v in hits.values())
        key = (-n_hit, len(found), abs(w - DEFAULT_PARAMS.window), qt, sp)
        if best is None or key < best[0]:
            best = (key, params, hits, len(found))
    if best is None:
        raise ValueError("empty parameter grid")
    return best[1], best[2], best[3]


def params_dict(params: TransitionParams) -> dict:
    return asdict(params)
