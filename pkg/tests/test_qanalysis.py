from fractions import Fraction

import pytest

from metafib.engine import evaluate, make_table
from metafib.qanalysis import (PINN_TABULATED, TransitionParams, build_comparison, deviation,
                               detect_transitions, format_percent, pinn_start, transition_hits)
from metafib.spec import parse_spec


@pytest.fixture(scope="module")
def q50k():
    return evaluate(parse_spec("q"), 50000)


def test_pinn_start():
    assert pinn_start(5) == 23
    assert pinn_start(12) == 2896
    assert pinn_start(20) == 741455
    assert [pinn_start(g) for g in range(1, 12)] == list(PINN_TABULATED)
    with pytest.raises(ValueError):
        pinn_start(0)


def test_pinn_start_floor_formula():
    # compare against a high-precision float for moderate g
    from decimal import Decimal, getcontext
    getcontext().prec = 60
    for g in range(12, 60):
        assert pinn_start(g) == int(Decimal(2) ** (Decimal(g) - Decimal("0.5")))


def test_pinn_start_increasing():
    vals = [pinn_start(g) for g in range(1, 80)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert abs(vals[-1] / vals[-2] - 2) < 1e-9


def test_deviation(q50k):
    assert format_percent(deviation(q50k, 3031)) == "9.48"
    assert format_percent(deviation(q50k, 46340)) == "1.01"  # exact value 1.0084
    assert deviation(q50k, 3031) == Fraction(abs(q50k[3031] - q50k[3030]) * 100, q50k[3030])
    same = next(i for i in range(2, 1000) if q50k[i] == q50k[i - 1])
    assert deviation(q50k, same) == 0
    with pytest.raises(ValueError):
        deviation(q50k, 1)
    with pytest.raises(ValueError):
        deviation(q50k, 50001)


def test_format_percent_half_up():
    assert format_percent(Fraction(1, 8)) == "0.13"
    assert format_percent(Fraction(1005, 1000)) == "1.01"
    assert format_percent(Fraction(0)) == "0.00"
    assert format_percent(Fraction(100)) == "100.00"


def test_transition_params_validation():
    with pytest.raises(ValueError):
        TransitionParams(window=1)
    with pytest.raises(ValueError):
        TransitionParams(quiet_threshold=0)


def test_constant_table_has_no_transitions():
    # T(n) = n/2 exactly: no deviation, no spike
    vals = [max(1, n // 2) for n in range(1, 2001)]
    table = make_table(parse_spec("q"), vals)
    assert detect_transitions(table) == []
    flat = make_table(parse_spec("q"), [1] * 500)
    assert detect_transitions(flat, TransitionParams(8, 0.5, 0.9)) == []


def test_window_too_large():
    with pytest.raises(ValueError):
        detect_transitions(evaluate(parse_spec("q"), 10), TransitionParams(window=64))


def test_detect_transitions_deterministic(q50k):
    a = detect_transitions(q50k)
    assert a == detect_transitions(q50k)
    assert a == sorted(set(a))
    hits = transition_hits(a, [3032, 6042, 12069, 24064, 48013])
    assert all(v is not None for v in hits.values()), hits


def test_transition_hits():
    assert transition_hits([100, 205], [101, 200, 500]) == {101: 100, 200: None, 500: None}


def test_build_comparison(q50k):
    comp = build_comparison(q50k, 15)
    rows = {row.g: row for row in comp.rows}
    assert [rows[g].alpha_maternal for g in range(1, 12)] == [1, 3, 6, 12, 24, 48, 96, 192, 384, 768, 1522]
    assert [rows[g].alpha_pinn for g in range(1, 12)] == list(PINN_TABULATED)
    assert [g for g in range(1, 12) if rows[g].alpha_maternal != rows[g].alpha_pinn] == [5]
    assert rows[2].alpha_maternal == 3
    assert rows[12].transition is not None and abs(rows[12].transition - 3032) <= 30
    text = comp.render()
    assert "window=64" in text.splitlines()[-1]
    alphas = [row.alpha_maternal for row in comp.rows]
    assert alphas == sorted(alphas)


def test_build_comparison_horizon(q50k):
    with pytest.raises(ValueError):
        build_comparison(evaluate(parse_spec("q"), 5000), 14)


def test_comparison_assigns_each_detection_once(q50k):
    comp = build_comparison(q50k, 15)
    used = [row.transition for row in comp.rows if row.transition is not None]
    assert len(used) == len(set(used))
    assert comp.rows[10].transition is None  # g=11 has no nearby detection


def test_comparison_without_detections():
    table = evaluate(parse_spec("q"), 3000)
    params = TransitionParams(64, 1e-9, 2e-9)
    assert detect_transitions(table, params) == []
    comp = build_comparison(table, 11, params)
    assert all(row.transition is None for row in comp.rows)
