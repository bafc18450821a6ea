import json

import pytest

from gerst import cli
from gerst.fields import QQ
from gerst.algebra import dual_numbers, field_algebra, matrix_algebra


@pytest.fixture()
def files(tmp_path):
    paths = {}
    for name, A in [("dual", dual_numbers(QQ)),
                    ("mat2", matrix_algebra(2, field_algebra(QQ))),
                    ("k1", field_algebra(QQ))]:
        p = tmp_path / (name + ".json")
        p.write_text(json.dumps(A.to_json()))
        paths[name] = str(p)
    poly = tmp_path / "poly.json"
    poly.write_text(json.dumps({"polynomial": {
        "nvars": 2, "weight_cap": 3, "var_names": ["x", "p"]}}))
    paths["poly"] = str(poly)
    return paths


def _run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def _strip_times(payload):
    data = json.loads(json.dumps(payload))
    for c in data["checks"]:
        c.pop("wall_ms", None)
    return json.dumps(data, sort_keys=True)


def test_hh_dimension_tables(capsys, files):
    for name, dims in [("mat2", [1, 0, 0]), ("dual", [2, 1, 1]),
                       ("k1", [1, 0, 0])]:
        code, data = _run(capsys, ["hh", files[name], "--kmax", "2"])
        assert code == 0
        assert data["failures"] == 0
        assert data["artifacts"]["hh_dims"] == dims
        by_name = {c["name"]: c for c in data["checks"]}
        assert by_name["hh-dense-oracle"]["status"] == "pass"


def test_hh_parse_error(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, data = _run(capsys, ["hh", str(p)])
    assert code == 1
    assert "parse error" in data["checks"][0]["detail"]
    assert "line 1" in data["checks"][0]["detail"]


def test_hh_validation_error(capsys, tmp_path):
    data = field_algebra(QQ).to_json()
    data["table"] = [[0, 0, 0, "2/1"]]
    p = tmp_path / "nonassoc.json"
    p.write_text(json.dumps(data))
    code, report = _run(capsys, ["hh", str(p)])
    assert code == 1
    assert "validation error" in report["checks"][0]["detail"]


def test_verify_reports_are_deterministic(capsys):
    argv = ["verify", "cotrace-morphism", "--seed", "5"]
    _, first = _run(capsys, argv)
    _, second = _run(capsys, argv)
    assert _strip_times(first) == _strip_times(second)
    assert first["failures"] == 0
    names = [c["name"] for c in first["checks"]]
    assert names == sorted(names)


def test_verify_threads_match_serial(capsys, monkeypatch):
    argv = ["verify", "jet-poincare"]
    _, serial = _run(capsys, argv)
    monkeypatch.setenv("GERST_THREADS", "2")
    _, threaded = _run(capsys, argv)
    monkeypatch.delenv("GERST_THREADS")
    strip = lambda d: json.dumps(json.loads(_strip_times(d))["checks"])
    assert strip(serial) == strip(threaded)
    assert json.loads(_strip_times(threaded))["configuration"]["threads"] \
        == "2"


def test_verify_unknown_suite(capsys):
    code, data = _run(capsys, ["verify", "nope"])
    assert code == 1
    assert "unknown suite" in data["checks"][0]["detail"]


def test_deform_moyal(capsys, files):
    code, data = _run(capsys, ["deform", files["poly"], "--mc", "moyal",
                               "--order", "3"])
    assert code == 0
    assert data["failures"] == 0
    assert data["artifacts"]["commutator_x_p"] == {"1": {"0": "1/1"}}
    assert len(data["artifacts"]["star_table"]) > 0


def test_deform_zero_parameter_is_plain_product(capsys, files, tmp_path):
    mc = tmp_path / "zero.json"
    mc.write_text(json.dumps({"arity": 2, "entries":
                              [[[1, 1], 1, "0", 1]]}))
    code, data = _run(capsys, ["deform", files["dual"], "--mc", str(mc),
                               "--order", "2"])
    assert code == 0
    table = data["artifacts"]["star_table"]
    assert all(row[2] == 0 for row in table)


def test_deform_corrupted_parameter_fails_with_defect(capsys, files,
                                                      tmp_path):
    mc = tmp_path / "bad_mc.json"
    mc.write_text(json.dumps({"arity": 2, "entries":
                              [[[0, 1], 1, "1", 1]]}))
    code, data = _run(capsys, ["deform", files["dual"], "--mc", str(mc),
                               "--order", "2"])
    by_name = {c["name"]: c for c in data["checks"]}
    assert by_name["maurer-cartan-residual"]["status"] == "fail"
    assert by_name["star-associativity"]["status"] == "fail"
    assert by_name["defect-equals-residual"]["status"] == "pass"
    assert code == data["failures"] == 2


def test_pretty_mode_renders_table(capsys, files):
    code = cli.main(["hh", files["k1"], "--pretty"])
    out = capsys.readouterr().out
    assert code == 0
    assert "failures: 0" in out
    assert "hh-dimension-table" in out
