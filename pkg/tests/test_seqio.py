import csv
import json
import struct

import pytest

from metafib import seqio
from metafib.engine import evaluate
from metafib.errors import CacheFormatError
from metafib.qanalysis import build_comparison
from metafib.spec import parse_spec


def test_round_trip(tmp_path):
    table = evaluate(parse_spec("conolly"), 2**20)
    path = tmp_path / "c.mfib"
    seqio.save_table(table, path)
    back = seqio.load_table(parse_spec("conolly"), path)
    assert back == table
    assert back.values.tobytes() == table.values.tobytes()


def test_round_trip_terminated(tmp_path):
    spec = parse_spec("homog:2,1;ic=1")
    table = evaluate(spec, 10)
    seqio.save_table(table, tmp_path / "t.mfib")
    back = seqio.load_table(spec, tmp_path / "t.mfib")
    assert back.terminated_at == 2 and back == table


def test_header_layout(tmp_path):
    table = evaluate(parse_spec("q"), 10)
    seqio.save_table(table, tmp_path / "q.mfib")
    data = (tmp_path / "q.mfib").read_bytes()
    assert data[:4] == b"MFIB"
    assert struct.unpack_from("<I", data, 4)[0] == seqio.FORMAT_VERSION
    assert data[8:40] == seqio.spec_digest(parse_spec("q"))
    assert struct.unpack_from("<Q", data, 40)[0] == 10
    assert data[48] == 0
    assert struct.unpack_from("<10Q", data, 49) == tuple(table.values.tolist())
    assert len(data) == 49 + 80


def test_wrong_spec_is_absent(tmp_path):
    seqio.save_table(evaluate(parse_spec("q"), 100), tmp_path / "q.mfib")
    with pytest.warns(UserWarning):
        assert seqio.load_table(parse_spec("conolly"), tmp_path / "q.mfib") is None


@pytest.mark.parametrize("mutate", [
    lambda b: b[:-3],                          # truncated payload
    lambda b: b[:20],                          # truncated header
    lambda b: b"XFIB" + b[4:],                 # bad magic
    lambda b: b[:4] + struct.pack("<I", 99) + b[8:],  # version mismatch
    lambda b: b[:48] + b"\x07" + b[49:],        # bad flag
])
def test_corrupt_file(tmp_path, mutate):
    path = tmp_path / "q.mfib"
    seqio.save_table(evaluate(parse_spec("q"), 100), path)
    path.write_bytes(mutate(path.read_bytes()))
    with pytest.raises(CacheFormatError):
        seqio.load_table(parse_spec("q"), path)


def test_digest_is_canonical():
    assert seqio.spec_digest(parse_spec("conway")) == seqio.spec_digest(parse_spec("newman:1"))
    assert seqio.spec_digest(parse_spec("q")) != seqio.spec_digest(parse_spec("v"))


def test_cached_evaluate(tmp_path):
    spec = parse_spec("q")
    first = seqio.cached_evaluate(spec, 1000, tmp_path)
    assert seqio.cache_path(tmp_path, spec).exists()
    assert seqio.cached_evaluate(spec, 500, tmp_path) == evaluate(spec, 500)
    assert seqio.cached_evaluate(spec, 3000, tmp_path) == evaluate(spec, 3000)
    assert seqio.load_table(spec, seqio.cache_path(tmp_path, spec)).computed_len == 3000
    assert first == evaluate(spec, 1000)


def test_cached_evaluate_recovers_from_corruption(tmp_path):
    spec = parse_spec("q")
    seqio.cache_path(tmp_path, spec).write_bytes(b"garbage")
    with pytest.warns(UserWarning):
        table = seqio.cached_evaluate(spec, 100, tmp_path)
    assert table == evaluate(spec, 100)


def test_export_values_csv(tmp_path):
    table = evaluate(parse_spec("conway"), 1024)
    path = tmp_path / "a.csv"
    seqio.export_series(table, "values", path)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["n", "value"]
    assert len(rows) == 1025
    assert rows[1024] == ["1024", "512"]
    assert b"\r" not in path.read_bytes()


def test_export_json_and_trend(tmp_path):
    table = evaluate(parse_spec("q"), 800)
    seqio.export_series(table, "trend_deviation", tmp_path / "q.json", fmt="json")
    recs = json.loads((tmp_path / "q.json").read_text())
    assert len(recs) == 800
    assert recs[9] == {"n": 10, "trend_deviation": 2 * table[10] - 10}


def test_export_generation_marks(tmp_path):
    table = evaluate(parse_spec("conway"), 1024)
    seqio.export_series(table, "generation_marks", tmp_path / "g.csv")
    rows = list(csv.reader(open(tmp_path / "g.csv")))
    assert rows[0] == ["g", "alpha", "beta"]
    assert rows[3] == ["3", "5", "8"]
    assert len(rows) == 11


def test_export_errors(tmp_path):
    table = evaluate(parse_spec("q"), 100)
    with pytest.raises(ValueError):
        seqio.export_series(table, "values", tmp_path / "x.csv", lo=50, hi=10)
    with pytest.raises(ValueError):
        seqio.export_series(table, "nope", tmp_path / "x.csv")
    with pytest.raises(ValueError):
        seqio.export_series(table, "values", tmp_path / "x.csv", fmt="xml")
    with pytest.raises(OSError):
        seqio.export_series(table, "values", tmp_path / "missing" / "x.csv")


def test_byte_identical_exports(tmp_path):
    table = evaluate(parse_spec("mu"), 5000)
    for fmt in ("csv", "json"):
        a, b = tmp_path / f"a.{fmt}", tmp_path / f"b.{fmt}"
        seqio.export_series(table, "values", a, fmt)
        seqio.export_series(evaluate(parse_spec("mu"), 5000), "values", b, fmt)
        assert a.read_bytes() == b.read_bytes()
    c, d = tmp_path / "c.mfib", tmp_path / "d.mfib"
    seqio.save_table(table, c)
    seqio.save_table(evaluate(parse_spec("mu"), 5000), d)
    assert c.read_bytes() == d.read_bytes()


def test_export_comparison(tmp_path):
    comp = build_comparison(evaluate(parse_spec("q"), 4000), 12)
    seqio.export_comparison(comp, tmp_path / "c.csv")
    rows = list(csv.reader(open(tmp_path / "c.csv")))
    assert rows[0] == ["g", "alpha_maternal", "alpha_pinn", "dev_maternal_pct", "dev_pinn_pct", "transition"]
    assert rows[12][:5] == ["12", "3031", "2896", "9.48", "0.68"]
    assert rows[1][5] == ""
    seqio.export_comparison(comp, tmp_path / "c.json", fmt="json")
    recs = json.loads((tmp_path / "c.json").read_text())
    assert recs[0]["transition"] is None
