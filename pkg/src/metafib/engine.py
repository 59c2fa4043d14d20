"""Memoized evaluation of meta-Fibonacci recursions.

Terms are computed in increasing order into a flat array. For every n past
the initial conditions each spot index must land in [1, n-1]; the first n
where that fails is recorded as the termination index and evaluation stops.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from metafib.errors import CompositionRangeError, TableStateError
from metafib.spec import ConwayFamily, RecursionSpec

INT64_MAX = 2**63 - 1


@dataclass(frozen=True, eq=False)
class SequenceTable:
    """T(1..computed_len) for one spec.

    ``values`` is 0-based (``values[n-1] == T(n)``) and read-only; use
    ``table[n]`` for 1-based access.
    """

    spec: RecursionSpec
    values: np.ndarray
    terminated_at: Optional[int] = None
    _padded: list = field(default=None, repr=False, compare=False)

    @property
    def computed_len(self) -> int:
        return len(self.values)

    @property
    def r(self) -> int:
        return self.spec.r

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= len(self.values):
            raise IndexError(f"index {n} outside computed range [1, {len(self.values)}]")
        return int(self.values[n - 1])

    def __eq__(self, other):
        if not isinstance(other, SequenceTable):
            return NotImplemented
        return (self.spec == other.spec and self.terminated_at == other.terminated_at
                and np.array_equal(self.values, other.values))

    def padded(self) -> list:
        """Python list with a dummy slot 0, for tight 1-based loops."""
        if self._padded is None:
            object.__setattr__(self, "_padded", [0] + self.values.tolist())
        return self._padded


def make_table(spec: RecursionSpec, values, terminated_at: Optional[int] = None) -> SequenceTable:
    """Wrap precomputed T(1), T(2), ... without re-evaluating."""
    return _freeze(spec, [0] + [int(v) for v in values], terminated_at)


def _freeze(spec, vals, terminated_at):
    arr = np.asarray(vals[1:], dtype=np.int64)
    arr.flags.writeable = False
    return SequenceTable(spec, arr, terminated_at, vals)


def _run_homogeneous(params, T, n_max):
    """Extend padded list T in place up to n_max; return termination index or None."""
    n = len(T)
    if len(params) == 2:
        (a1, b1), (a2, b2) = params
        while n <= n_max:
            lim = n - 1
            j1 = n - b1
            j2 = n - b2
            if not (0 < j1 <= lim and 0 < j2 <= lim):
                return n
            s1 = n - a1 - T[j1]
            s2 = n - a2 - T[j2]
            if not (0 < s1 <= lim and 0 < s2 <= lim):
                return n
            v = T[s1] + T[s2]
            if v > INT64_MAX:
                raise OverflowError(f"T({n}) exceeds the 64-bit range")
            T.append(v)
            n += 1
        return None
    while n <= n_max:
        lim = n - 1
        v = 0
        for a, b in params:
            j = n - b
            if not 0 < j <= lim:
                return n
            s = n - a - T[j]
            if not 0 < s <= lim:
                return n
            v += T[s]
        if v > INT64_MAX:
            raise OverflowError(f"T({n}) exceeds the 64-bit range")
        T.append(v)
        n += 1
    return None


def _run_conway(k, T, n_max):
    n = len(T)
    while n <= n_max:
        lim = n - 1
        x = lim
        for _ in range(k):
            x = T[x]
            if x > lim:
                return n
        # x = A^k(n-1) >= 1, so both spots n - x and x lie in [1, n-1] iff x <= n-1
        v = T[n - x] + T[x]
        if v > INT64_MAX:
            raise OverflowError(f"A({n}) exceeds the 64-bit range")
        T.append(v)
        n += 1
    return None


def _continue(spec, T, n_max):
    fam = spec.family
    if isinstance(fam, ConwayFamily):
        return _run_conway(fam.k, T, n_max)
    return _run_homogeneous(fam.params, T, n_max)


def evaluate(spec: RecursionSpec, n_max: int) -> SequenceTable:
    if n_max < 1:
        raise ValueError(f"n_max must be positive, got {n_max}")
    T = [0] + list(spec.initial_conditions[:n_max])
    terminated_at = _continue(spec, T, n_max)
    return _freeze(spec, T, terminated_at)


def extend(table: SequenceTable, new_n_max: int) -> SequenceTable:
    if table.terminated_at is not None:
        raise TableStateError(f"cannot extend a table terminated at n={table.terminated_at}")
    if new_n_max <= table.computed_len:
        raise ValueError(f"new_n_max={new_n_max} must exceed computed_len={table.computed_len}")
    T = list(table.padded())
    terminated_at = _continue(table.spec, T, new_n_max)
    return _freeze(table.spec, T, terminated_at)


def compose(table: SequenceTable, n: int, k: int) -> int:
    """A^k(n): k successive lookups starting from n."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    T = table.padded()
    N = table.computed_len
    x = n
    for depth in range(k):
        if not 1 <= x <= N:
            raise CompositionRangeError(
                f"A^{depth}({n}) = {x} is outside the computed range [1, {N}]", depth=depth)
        x = T[x]
    return x
