"""Finite-horizon checks of the structural claims about the slow sequences and mu.

Each ``check_*`` returns a :class:`CheckReport` that records the first
mismatch found (if any) together with a short label saying which claim
failed. Nothing here proves anything; it only scans the stated ranges.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from metafib.engine import SequenceTable, compose, evaluate
from metafib.genseq import (generation_sequence, is_slow, partition, spot_trace)
from metafib.spec import conway_family, parse_spec, spot_count

# first 50 terms of mu = (1,2,2,1) with three ones
MU_TABLE = (
    1, 1, 1, 2, 2, 2, 3, 3, 4, 4,
    4, 5, 5, 6, 7, 7, 7, 8, 8, 8,
    9, 9, 10, 11, 11, 11, 13, 12, 14, 13,
    14, 15, 15, 15, 16, 16, 16, 17, 17, 18,
    19, 19, 19, 21, 20, 22, 21, 22, 24, 24,
)

DEFAULT_E_LIMIT = 10**6
DEFAULT_MU_HORIZON = 2**20 + 20
DEFAULT_POW2_HORIZON = 2**20


@dataclass
class CheckReport:
    name: str
    range_checked: tuple[int, int]
    first_failure: Optional[tuple] = None
    failed_claim: Optional[str] = None
    notes: list[str] = field(default_factory=list)
    n_checks: int = 0
    # how far each sub-claim reached, e.g. {"gen_max": 25}
    extent: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.first_failure is None

    def expect(self, claim, index, expected, actual) -> bool:
        self.n_checks += 1
        if expected != actual and self.first_failure is None:
            self.first_failure = (index, expected, actual)
            self.failed_claim = claim
        return expected == actual

    def text(self) -> str:
        lo, hi = self.range_checked
        status = "PASS" if self.passed else "FAIL"
        lines = [f"{status} {self.name} [{lo}, {hi}] ({self.n_checks} checks)"]
        if not self.passed:
            idx, exp, act = self.first_failure
            lines.append(f"  first failure: {self.failed_claim} at {idx}: expected {exp}, got {act}")
        lines.extend(f"  note: {note}" for note in self.notes)
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "range_checked": list(self.range_checked),
            "passed": self.passed,
            "first_failure": None if self.first_failure is None else list(self.first_failure),
            "failed_claim": self.failed_claim,
            "n_checks": self.n_checks,
            "notes": list(self.notes),
            "extent": dict(self.extent),
        }

    def json(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def aux_sequence(step: int, n_max: int) -> list[int]:
    """E_1..E_{n_max} with E_n = E_{n-1} + E_{n-step} and E_1..E_step = 1."""
    if step < 1:
        raise ValueError(f"step must be >= 1, got {step}")
    E = [1] * min(step, n_max)
    while len(E) < n_max:
        E.append(E[-1] + E[-step])
    return E


def aux_limit(step: int, limit: int) -> list[int]:
    """E_1..E_m where E_m is the largest term not exceeding ``limit``."""
    E = aux_sequence(step, step)
    while E[-1] + E[-step] <= limit:
        E.append(E[-1] + E[-step])
    return E


def nu2(n: int) -> int:
    """Exponent of the largest power of 2 dividing n > 0."""
    if n <= 0:
        raise ValueError("nu2 needs a positive integer")
    return (n & -n).bit_length() - 1


def _runs(values: np.ndarray):
    """(value, start, length) of maximal constant runs, 1-based starts."""
    change = np.flatnonzero(np.diff(values)) + 1
    starts = np.concatenate(([0], change))
    lengths = np.diff(np.concatenate((starts, [len(values)])))
    return values[starts], starts + 1, lengths


def _maternal(table, p=1):
    trace = spot_trace(table, p)
    gen = generation_sequence(trace)
    return trace, gen, partition(gen)


def _check_horizon(table: SequenceTable, need: int, what: str):
    if table.computed_len < need:
        raise ValueError(f"{what} needs a table of length >= {need}, got {table.computed_len}")


def check_conolly(table: SequenceTable, gen_max: int) -> CheckReport:
    """Slowness, value frequencies nu2(2n), maternal generations [2^(g-1)+1, 2^g]."""
    _check_horizon(table, 2**gen_max, "check_conolly")
    N = table.computed_len
    rep = CheckReport("conolly", (1, N))
    vals = table.values

    rep.expect("C slow", N, True, is_slow(vals))

    # frequencies: C is slow, so occurrences of each value form one run; the
    # final run may continue past the horizon and is skipped
    rv, rs, rl = _runs(vals)
    rep.notes.append(f"value 1 occurs {int(rl[0])} times (initial conditions; nu2(2) = 1)")
    for v, length in zip(rv[1:-1].tolist(), rl[1:-1].tolist()):
        if not rep.expect("occurrences of n == nu2(2n)", v, nu2(2 * v), length):
            break
    last_full = int(rv[-2]) if len(rv) > 2 else 1
    rep.notes.append(f"frequency checked for 2 <= n <= {last_full}")
    rep.extent["freq_max"] = last_full

    _, gen, part = _maternal(table)
    expected = np.ones(2**gen_max, dtype=np.int64)
    for g in range(2, gen_max + 1):
        expected[2 ** (g - 1):2**g] = g
    bad = np.flatnonzero(gen.values[: 2**gen_max] != expected)
    if len(bad):
        i = int(bad[0]) + 1
        rep.expect("M_1(n) on [1, 2^gen_max]", i, int(expected[i - 1]), gen[i])
    else:
        rep.n_checks += 1
    for g in range(2, gen_max + 1):
        rec = part[g]
        rep.expect(f"alpha_1({g})", g, 2 ** (g - 1) + 1, rec.alpha)
        if rec.complete:
            rep.expect(f"beta_1({g})", g, 2**g, rec.beta)
            rep.expect(f"G_1({g}) is an interval", g, False, rec.fragmented)

    for g in range(1, gen_max + 1):
        rep.expect("C(2^g) = 2^(g-1)", 2**g, 2 ** (g - 1), table[2**g])
        rep.expect("C(2^g - 1) = 2^(g-1)", 2**g - 1, 2 ** (g - 1), table[2**g - 1])
    return rep


def check_conway_octaves(table: SequenceTable, m_max: int) -> CheckReport:
    _check_horizon(table, 2 ** (m_max + 1), "check_conway_octaves")
    N = table.computed_len
    rep = CheckReport("conway", (1, N))
    A = table.values
    rep.expect("A slow", N, True, is_slow(A))

    for m in range(1, m_max + 1):
        rep.expect("A(2^m) = 2^(m-1)", 2**m, 2 ** (m - 1), table[2**m])
    # value 2^(m-1) is taken on (2^(m-1), 2^m] exactly at its last m indices
    for m in range(2, m_max + 1):
        lo, hi = 2 ** (m - 1) + 1, 2**m
        hits = np.flatnonzero(A[lo - 1:hi] == 2 ** (m - 1)) + lo
        rep.expect("indices of (2^(m-1), 2^m] with A = 2^(m-1)", m,
                   list(range(hi - m + 1, hi + 1)), hits.tolist())

    n = np.arange(1, N + 1, dtype=np.int64)
    twice = 2 * A
    below = np.flatnonzero(twice < n)
    rep.expect("2A(n) >= n", int(below[0]) + 1 if len(below) else None, 0, len(below))
    eq = (np.flatnonzero(twice == n) + 1).tolist()
    powers = [2**m for m in range(1, N.bit_length()) if 2**m <= N]
    rep.expect("2A(n) = n exactly at n = 2^m, m >= 1", None, powers, eq)

    _, _, part = _maternal(table)
    for g in range(2, len(part) + 1):
        rep.expect(f"alpha_1({g}) = 2^(g-1) + 1", g, 2 ** (g - 1) + 1, part.alpha(g))
    rep.expect("interval structure", None, True, part.interval_structure)
    return rep


def check_newman_conway(r: int, gen_max: Optional[int] = None, n_max: Optional[int] = None,
                        table: Optional[SequenceTable] = None) -> CheckReport:
    if r < 2:
        raise ValueError("check_newman_conway needs r >= 2 (r = 1 is the Conway sequence)")
    E = aux_limit(r, n_max or DEFAULT_E_LIMIT)  # E[i-1] = E_i
    if n_max is None:
        n_max = E[-1]
    if gen_max is None:
        # generation g ends at E_{2r+g-1}; keep only fully observed ones
        gen_max = len(E) - 2 * r + 1
    if 2 * r + gen_max - 1 > len(E):
        raise ValueError(f"horizon {n_max} too small for {gen_max} generations "
                         f"(need E_{2 * r + gen_max - 1})")
    if table is None:
        table = evaluate(parse_spec(f"newman:{r}"), n_max)
    rep = CheckReport(f"newman:{r}", (1, table.computed_len))
    rep.expect("no termination", table.terminated_at, None, table.terminated_at)
    rep.expect("f_r slow", None, True, is_slow(table.values))

    N = table.computed_len
    for i in range(r + 1, len(E) + 1):
        e = E[i - 1]
        if e > N:
            break
        rep.expect("f_r(E_n) = E_(n-r)", e, E[i - r - 1], table[e])
        rep.expect("f_r(E_n - 1) = E_(n-r)", e - 1, E[i - r - 1], table[e - 1])

    _, _, part = _maternal(table)
    rep.expect("alpha_1(2) = r + 2", 2, r + 2, part.alpha(2))
    for g in range(2, gen_max + 1):
        rep.expect(f"alpha_1({g}) = E_(2r+g-2) + 1", g, E[2 * r + g - 3] + 1, part.alpha(g))
    rep.notes.append(f"maternal start points checked for 2 <= g <= {gen_max}")
    rep.extent["gen_max"] = gen_max
    return rep


def check_grytczuk(k: int, gen_max: Optional[int] = None, n_max: Optional[int] = None,
                   table: Optional[SequenceTable] = None) -> CheckReport:
    if k < 2:
        raise ValueError("check_grytczuk needs k >= 2")
    E = aux_limit(k, n_max or DEFAULT_E_LIMIT)
    if n_max is None:
        n_max = E[-1]
    if gen_max is None:
        gen_max = len(E) - k
    if k + gen_max > len(E):
        raise ValueError(f"horizon {n_max} too small for {gen_max} generations "
                         f"(need E_{k + gen_max})")
    if table is None:
        table = evaluate(conway_family(k, [1, 1]), n_max)
    N = table.computed_len
    rep = CheckReport(f"grytczuk:{k}", (1, N))
    rep.expect("no termination", table.terminated_at, None, table.terminated_at)
    rep.expect("A slow", None, True, is_slow(table.values))

    for i in range(k + 1, len(E)):
        e_next = E[i]  # E_{n+1}
        if e_next > N:
            break
        rep.expect("A(E_(n+1)) = E_n", e_next, E[i - 1], table[e_next])
        if e_next < N:
            rep.expect("E_(n+1) is the last index with value E_n", e_next + 1, True,
                       table[e_next + 1] > E[i - 1])
    for i in range(k + 1, len(E) + 1):
        e = E[i - 1]
        if e - 1 > N:
            break
        rep.expect("A^k(E_n - 1) = E_(n-k)", e - 1, E[i - k - 1], compose(table, e - 1, k))

    _, _, part = _maternal(table)
    rep.expect("alpha_1(2) = 3", 2, 3, part.alpha(2))
    for g in range(2, gen_max + 1):
        rep.expect(f"alpha_1({g}) = E_(k+g-1) + 1", g, E[k + g - 2] + 1, part.alpha(g))
    rep.notes.append(f"maternal start points checked for 2 <= g <= {gen_max}")
    rep.extent["gen_max"] = gen_max
    return rep


def _mu_settled_below(vals: np.ndarray) -> int:
    # values below the minimum of the last eighth of the horizon are taken to
    # have all their occurrences (and neighbours) inside the horizon
    N = len(vals)
    return int(vals[N - N // 8:].min()) - 2


def check_mu(n_max: int = DEFAULT_MU_HORIZON, table: Optional[SequenceTable] = None) -> CheckReport:
    if n_max < 50:
        raise ValueError("check_mu needs n_max >= 50")
    if table is None:
        table = evaluate(parse_spec("mu"), n_max)
    N = table.computed_len
    rep = CheckReport("mu", (1, N))
    if table.terminated_at is not None:
        rep.expect("mu defined", table.terminated_at, "defined", "terminated")
        return rep

    vals = table.values
    for i, want in enumerate(MU_TABLE, start=1):
        rep.expect("first 50 terms", i, want, table[i])

    settled = _mu_settled_below(vals)
    for j in range(1, settled.bit_length() + 1):
        v = 2**j
        if v + 1 > settled:
            break
        pos = (np.flatnonzero(vals == v) + 1).tolist()
        rep.expect(f"{v} occurs 3 times", v, 3, len(pos))
        if len(pos) != 3:
            continue
        s = pos[0]
        rep.expect(f"occurrences of {v} consecutive", v, [s, s + 1, s + 2], pos)
        rep.expect(f"two copies of {v - 1} precede the run of {v}", s - 1,
                   [v - 1, v - 1], [table[s - 2], table[s - 1]] if s > 2 else [])
        after = [table[i] for i in range(s + 3, min(s + 6, N + 1))]
        rep.expect(f"exactly two copies of {v + 1} follow the run of {v}", s + 3,
                   True, after[:2] == [v + 1, v + 1] and after[2] != v + 1)
    rep.notes.append(f"power-of-2 runs checked for values 2 .. {2 ** (settled.bit_length() - 1)}"
                     if settled >= 3 else "no power-of-2 run fully inside the horizon")

    _, gen, part = _maternal(table)
    rep.expect("maternal M1 slow", None, True, is_slow(gen.values))
    g_checked = 0
    for g in range(3, len(part) + 1):
        rec = part[g]
        a_exp = 2 ** (g - 1) + g
        if a_exp > N:
            break
        rep.expect(f"alpha_1({g}) = 2^(g-1) + g", g, a_exp, rec.alpha)
        first = int(np.argmax(vals == 2 ** (g - 2) + 1)) + 1
        rep.expect(f"alpha_1({g}) is first occurrence of 2^(g-2)+1", g, first, rec.alpha)
        if not rec.complete:
            continue
        rep.expect(f"beta_1({g}) = 2^g + g", g, 2**g + g, rec.beta)
        if 2 ** (g - 1) + 1 <= settled:
            last = int(len(vals) - np.argmax(vals[::-1] == 2 ** (g - 1)))
            rep.expect(f"beta_1({g}) is last occurrence of 2^(g-1)", g, last, rec.beta)
        g_checked = g
    rep.notes.append(f"generation bounds checked for 3 <= g <= {g_checked}")
    rep.extent["g_max"] = g_checked
    return rep


def check_theorems(table: SequenceTable, p: int) -> CheckReport:
    """Generic consequences of a slow spot: slow M_p, interval structure,
    endpoint mapping between consecutive generations, minimal start points.

    If the spot is not slow the report passes vacuously with a note.
    """
    trace = spot_trace(table, p)
    gen = generation_sequence(trace)
    part = partition(gen)
    N = table.computed_len
    r = table.r
    rep = CheckReport(f"theorems {table.spec} spot {p}", (1, N))
    if len(trace.values) < 2 or not is_slow(trace.values):
        rep.notes.append("spot not slow on the horizon; nothing to check")
        return rep

    rep.expect("M_p slow", None, True, is_slow(gen.values))
    rep.expect("interval structure", None, True, part.interval_structure)
    S = trace
    G = len(part)
    if G >= 2:
        rep.expect("alpha(2) = r + 1", 2, r + 1, part.alpha(2))
        # S_p(alpha(2)) can be any index of the initial block
        rep.expect("S_p(alpha(2)) in G(1)", 2, True, 1 <= S[part.alpha(2)] <= r)
    for g in range(1, G):
        cur, nxt = part[g], part[g + 1]
        if not cur.complete:
            break
        rep.expect("beta(g) = alpha(g+1) - 1", g, nxt.alpha - 1, cur.beta)
        if g >= 2:
            rep.expect("S_p(alpha(g+1)) = alpha(g)", g, cur.alpha, S[nxt.alpha])
        if nxt.complete:
            rep.expect("S_p(beta(g+1)) = beta(g)", g, cur.beta, S[nxt.beta])

    # alpha(g+1) is the first n with S_p(n) = alpha(g)
    sv = S.values
    for g in range(2, G):
        hits = np.flatnonzero(sv == part.alpha(g))
        first = int(hits[0]) + r + 1 if len(hits) else None
        rep.expect("alpha(g+1) = min{n : S_p(n) = alpha(g)}", g, part.alpha(g + 1), first)
    return rep


THEOREM_PRESETS = ("conolly", "conway", "newman:2", "newman:3", "newman:4",
                   "grytczuk:2", "grytczuk:3", "grytczuk:4", "v")


def theorem_suite(n_max: int = 2**18, presets=THEOREM_PRESETS) -> list[CheckReport]:
    reports = []
    for name in presets:
        spec = parse_spec(name)
        table = evaluate(spec, n_max)
        for p in range(1, spot_count(spec) + 1):
            rep = check_theorems(table, p)
            rep.name = f"theorems {name} spot {p}"
            reports.append(rep)
    return reports
