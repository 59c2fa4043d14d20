import json

import pytest

from metafib.engine import evaluate, make_table
from metafib.genseq import generation_sequence, partition, spot_trace
from metafib.spec import parse_spec
from metafib.verify import (MU_TABLE, aux_sequence, check_conolly, check_conway_octaves, check_grytczuk,
                            check_mu, check_newman_conway, check_theorems, nu2, theorem_suite)


def test_aux_sequence():
    assert aux_sequence(2, 7) == [1, 1, 2, 3, 5, 8, 13]
    assert aux_sequence(1, 10) == [2 ** (n - 1) for n in range(1, 11)]
    assert aux_sequence(3, 9) == [1, 1, 1, 2, 3, 4, 6, 9, 13]
    assert aux_sequence(4, 2) == [1, 1]


def test_nu2():
    assert nu2(16) == 4
    for n in range(1, 200):
        assert nu2(2 * n) == 1 + nu2(n)
        if n % 2:
            assert nu2(2 * n) == 1
    with pytest.raises(ValueError):
        nu2(0)


def test_conolly_small():
    table = evaluate(parse_spec("conolly"), 2**12)
    rep = check_conolly(table, 12)
    assert rep.passed, rep.text()
    vals = table.values.tolist()
    assert vals.count(8) == nu2(16) == 4
    assert vals.count(1) == 2
    part = partition(generation_sequence(spot_trace(table, 1)))
    assert (part.alpha(4), part.beta(4)) == (9, 16)


def test_conolly_horizon_error():
    with pytest.raises(ValueError):
        check_conolly(evaluate(parse_spec("conolly"), 100), 8)


def test_conolly_detects_corruption():
    vals = evaluate(parse_spec("conolly"), 2**10).values.tolist()
    vals[300] += 1
    rep = check_conolly(make_table(parse_spec("conolly"), vals), 10)
    assert not rep.passed
    assert rep.first_failure is not None


def test_conway_octaves():
    table = evaluate(parse_spec("conway"), 2**13)
    rep = check_conway_octaves(table, 12)
    assert rep.passed, rep.text()
    assert table[1024] == 512 and 2 * table[64] == 64
    part = partition(generation_sequence(spot_trace(table, 1)))
    assert [(part.alpha(g), part.beta(g)) for g in range(1, 11)] == \
        [(1, 2), (3, 4)] + [(2 ** (g - 1) + 1, 2**g) for g in range(3, 11)]


def test_conway_horizon_error():
    with pytest.raises(ValueError):
        check_conway_octaves(evaluate(parse_spec("conway"), 2**10), 10)


def test_newman_conway_small():
    table = evaluate(parse_spec("newman:2"), 200)
    part = partition(generation_sequence(spot_trace(table, 1)))
    assert part.alpha(2) == 4
    assert part.alpha(3) == 6
    table3 = evaluate(parse_spec("newman:3"), 200)
    assert partition(generation_sequence(spot_trace(table3, 1))).alpha(2) == 5
    for r in (2, 3, 4):
        rep = check_newman_conway(r, n_max=20000)
        assert rep.passed, rep.text()


def test_newman_conway_errors():
    with pytest.raises(ValueError):
        check_newman_conway(1)
    with pytest.raises(ValueError):
        check_newman_conway(2, gen_max=40, n_max=1000)


def test_grytczuk_small():
    table = evaluate(parse_spec("grytczuk:3"), 200)
    part = partition(generation_sequence(spot_trace(table, 1)))
    assert part.alpha(5) == 7
    fib = aux_sequence(2, 20)
    t2 = evaluate(parse_spec("grytczuk:2"), fib[-1] + 1)
    vals = t2.values.tolist()
    for n in range(3, 19):
        last = max(i for i, v in enumerate(vals, start=1) if v == fib[n - 1])
        assert last == fib[n]
    for k in (2, 3, 4):
        rep = check_grytczuk(k, n_max=20000)
        assert rep.passed, rep.text()


def test_grytczuk_errors():
    with pytest.raises(ValueError):
        check_grytczuk(1)
    with pytest.raises(ValueError):
        check_grytczuk(2, gen_max=40, n_max=1000)


def test_mu_small():
    table = evaluate(parse_spec("mu"), 50)
    assert table.values.tolist() == list(MU_TABLE)
    assert (table[27], table[28]) == (13, 12)
    assert [i for i, v in enumerate(MU_TABLE, start=1) if v == 8] == [18, 19, 20]
    part = partition(generation_sequence(spot_trace(evaluate(parse_spec("mu"), 200), 1)))
    assert (part.alpha(3), part.beta(3)) == (7, 11)
    rep = check_mu(2**14 + 14)
    assert rep.passed, rep.text()


def test_mu_detects_corruption():
    vals = evaluate(parse_spec("mu"), 2**12).values.tolist()
    vals[19] = 9  # third 8 becomes 9
    rep = check_mu(len(vals), table=make_table(parse_spec("mu"), vals))
    assert not rep.passed


def test_mu_termination_is_failure():
    spec = parse_spec("mu")
    table = make_table(spec, evaluate(spec, 60).values.tolist(), terminated_at=61)
    rep = check_mu(60, table=table)
    assert not rep.passed
    assert rep.first_failure[0] == 61


def test_theorem_checks_small():
    for rep in theorem_suite(4096):
        assert rep.passed, rep.text()


def test_theorem_check_vacuous_for_q():
    rep = check_theorems(evaluate(parse_spec("q"), 1000), 1)
    assert rep.passed and rep.n_checks == 0
    assert "not slow" in rep.notes[0]


def test_report_rendering():
    rep = check_conway_octaves(evaluate(parse_spec("conway"), 256), 7)
    assert rep.text().startswith("PASS conway [1, 256]")
    obj = json.loads(rep.json())
    assert obj["passed"] is True and obj["first_failure"] is None
    rep.expect("demo", 5, 1, 2)
    assert not rep.passed
    assert "FAIL" in rep.text() and "demo at 5" in rep.text()
    assert json.loads(rep.json())["first_failure"] == [5, 1, 2]


def test_report_passed_iff_no_failure():
    rep = check_conolly(evaluate(parse_spec("conolly"), 64), 6)
    assert rep.passed == (rep.first_failure is None)
