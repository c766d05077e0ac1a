from __future__ import annotations

import json

import pytest

from coxglue import tables
from coxglue.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_constants_json_deterministic(capsys):
    code1, out1 = run(capsys, "constants", "6", "--json")
    code2, out2 = run(capsys, "constants", "6", "--json")
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["index"] == 51840
    assert payload["vol_polytope"] == "pi^3/15"
    assert payload["chi_congruence"] == "-1/8"


def test_constants_dim2(capsys):
    code, out = run(capsys, "constants", "2", "--json")
    payload = json.loads(out)
    assert payload["vol_polytope"] == "pi/2"
    assert payload["chi_congruence"] == "-1/4"


def test_constants_dim7_numeric(capsys):
    code, out = run(capsys, "constants", "7", "--json")
    payload = json.loads(out)
    assert payload["vol_polytope"] is None
    assert abs(payload["vol_polytope_numeric"] - 7.911556413928843) < 1e-12


def test_build(capsys):
    code, out = run(capsys, "build", "6", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["sides"] == 27 and payload["actual_vertices"] == 72


def test_build_doubled(capsys):
    code, out = run(capsys, "build", "6", "--doubled", "--json")
    payload = json.loads(out)
    assert payload["sides"] == 252 and payload["faces_0"] == 1344


def test_decode(capsys):
    code, out = run(capsys, "decode", tables.manifold_record(1).code, "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["orientable"] is True
    assert payload["partners"][0] == 3
    assert len(payload["transformations"]) == 252


def test_develop(capsys):
    code, out = run(capsys, "develop", "--manifold", "3", "--json")
    assert code == 0
    assert json.loads(out)["code"] == tables.manifold_record(3).code


def test_develop_from_file(tmp_path, capsys):
    path = tmp_path / "arr.txt"
    path.write_text(tables.pairing_array_text(1))
    code, out = run(capsys, "develop", str(path), "--json")
    assert code == 0
    assert json.loads(out)["code"] == tables.manifold_record(1).code


def test_restrict(capsys):
    code, out = run(capsys, "restrict", tables.manifold_record(1).code)
    assert code == 0
    assert "EKB98LLG6R2" in out


def test_verify(capsys):
    code, out = run(capsys, "verify", "--manifold", "1", "--json")
    assert code == 0
    assert json.loads(out)["proper"] is True


def test_search_budget_zero(capsys):
    code, out = run(capsys, "search", "--budget", "0", "--json")
    payload = json.loads(out)
    assert payload["budget_exhausted"] is True
    assert payload["solutions"] == []


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["certify", "--manifold", "10"])
    assert exc.value.code == 2


def test_missing_input_is_an_error(capsys):
    with pytest.raises(SystemExit):
        main(["develop"])


def test_certify_manifold(capsys):
    code, out = run(capsys, "certify", "--manifold", "3", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["ok"] is True
    assert payload["checks"]["extension_status_matches"] is True
    assert payload["homology"]["homology_encoded"] == \
        list(tables.manifold_record(3).homology)


def test_report_all_pass(capsys, monkeypatch):
    monkeypatch.setenv("COXGLUE_JOBS", "1")
    code, out = run(capsys, "report", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["pass"] is True
    assert all(payload["items"].values())
    assert set(payload["matrix"]) == {f"manifold_{i}" for i in range(1, 10)}
    for checks in payload["matrix"].values():
        assert all(checks.values())
