import json
import subprocess
import sys

import pytest

from qplane import __version__
from qplane.cli import main

THREE = {"q": "1/2", "spectrum": {"intervals": [["13/25", "11/20"], ["3/5", "31/50"],
                                                ["7/10", "18/25"]]}}
TWO = {"q": "1/2", "spectrum": {"intervals": [["13/25", "11/20"], ["3/5", "31/50"]]}}


@pytest.fixture
def write_config(tmp_path):
    def write(cfg, name="cfg.json"):
        path = tmp_path / name
        path.write_text(json.dumps(cfg), encoding="utf-8")
        return str(path)
    return write


def test_kgroups_full_unital(capsys):
    assert main(["kgroups", "--unital"]) == 0
    assert "K0 = Z^2, K1 = 0" in capsys.readouterr().out


def test_kgroups_two_components(write_config, capsys):
    assert main(["kgroups", "--config", write_config(TWO)]) == 0
    assert "K0 = Z^3 (non-unital)" in capsys.readouterr().out


@pytest.mark.parametrize("cfg", [
    {"q": "1/2", "spectrum": {"intervals": []}},
    {"q": "2", "spectrum": "full"},
    {"spectrum": "full"},
    {"q": "1/2", "spectrum": "banana"},
    {"q": "1/2", "spectrum": "full", "options": {"bogus": 1}},
])
def test_bad_configs_exit_2(write_config, capsys, cfg):
    assert main(["kgroups", "--config", write_config(cfg)]) == 2
    assert "error" in capsys.readouterr().err


def test_unreadable_config(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{", encoding="utf-8")
    assert main(["kgroups", "--config", str(bad)]) == 2
    assert main(["kgroups", "--config", str(tmp_path / "missing.json")]) == 2


@pytest.mark.parametrize("cls, hom, value", [
    ("bott:3", "F:0", 3), ("bott:-2", "F:0", -2), ("pr:2", "evinf", 0), ("unit", "F:0", 0),
    ("unit", "evinf", 1), ("1-pr:2", "F:y=7/10", -2),
])
def test_pair_full(capsys, cls, hom, value):
    assert main(["pair", "--class", cls, "--hom", hom, "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["result"]["rounded"] == value
    assert out["version"] == __version__


@pytest.mark.parametrize("cls, hom, value", [
    ("chi:(q^3,1)", "F:0", 3), ("chi:[0,q)", "ev0", 1), ("chi:(0.56,1)", "F:2", 0), ("chi:(0.51,1)", "F:2", 1),
    ("chi:(0.56,1)", "F:0", 1), ("chi:(0.65,1)", "F:2", 0),
])
def test_pair_generic(write_config, capsys, cls, hom, value):
    assert main(["pair", "--config", write_config(THREE), "--class", cls, "--hom", hom,
                 "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["result"]["rounded"] == value


@pytest.mark.parametrize("cls, hom", [("bott:0", "F:0"), ("torus:1", "F:0"), ("unit", "G:1"),
                                      ("chi:(3/5,1)", "F:0"), ("chi:1,2", "F:0"),
                                      ("unit", "F:7")])
def test_pair_bad_specs_exit_2(write_config, cls, hom):
    assert main(["pair", "--config", write_config(THREE), "--class", cls, "--hom", hom]) == 2


def test_non_convergence_exit_3(monkeypatch, capsys):
    monkeypatch.setenv("QPLANE_MAX_WINDOW", "64")
    assert main(["pair", "--class", "bott:1", "--hom", "F:0"]) == 3
    assert "last values" in capsys.readouterr().err


def test_usage_errors_exit_2():
    assert main([]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["verify", "--suite", "nope"]) == 2


def test_verify_teo_needs_generic():
    assert main(["verify", "--suite", "teo"]) == 2


@pytest.mark.parametrize("suite", ["tip", "teo", "corollaries", "algebra"])
def test_verify_generic_suites(write_config, capsys, suite):
    assert main(["verify", "--config", write_config(THREE), "--suite", suite]) == 0
    assert f"suite {suite}: PASS" in capsys.readouterr().out


def test_verify_mismatch_exits_1(monkeypatch, write_config, capsys):
    import qplane.suites as suites

    monkeypatch.setattr(suites, "N_RANGE", range(1, 2))
    real = suites.pair

    def broken(F, p, **kw):
        r = real(F, p, **kw)
        r.rounded += 1
        return r

    monkeypatch.setattr(suites, "pair", broken)
    assert main(["verify", "--suite", "tip"]) == 1
    assert "MISMATCH" in capsys.readouterr().out


def test_decompose(write_config, capsys):
    cfg = write_config(THREE)
    assert main(["decompose", "--config", cfg, "--class", "bott:2"]) == 0
    assert capsys.readouterr().out.strip() == "[P_2] = [1] + 2·[χ_(q,1)]"
    assert main(["decompose", "--config", cfg, "--class", "chi:(q^3,1)"]) == 0
    assert capsys.readouterr().out.strip().endswith("= 3·[χ_(q,1)]")
    assert main(["decompose", "--config", cfg, "--class", "unit"]) == 0
    assert capsys.readouterr().out.strip() == "[1] = [1]"
    assert main(["decompose", "--config", cfg, "--class", "unit", "--non-unital"]) == 1


def test_json_is_deterministic(write_config, capsys):
    cfg = write_config(THREE)
    outs = []
    for _ in range(2):
        assert main(["verify", "--config", cfg, "--suite", "teo", "--json"]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    report = json.loads(outs[0])
    assert set(report) == {"command", "config", "result", "version"}
    assert report["config"]["options"]["max_window"] == 8192


def test_record_and_diff(write_config, tmp_path, capsys):
    store = str(tmp_path / "runs.ndjson")
    full = write_config({"q": "1/2", "spectrum": "full"}, "full.json")
    other = write_config({"q": "3/4", "spectrum": "full"}, "other.json")
    assert main(["verify", "--config", full, "--suite", "tip", "--record", "--store", store]) == 0
    assert main(["verify", "--config", full, "--suite", "tip", "--record", "--store", store]) == 0
    assert main(["verify", "--config", other, "--suite", "tip", "--record", "--store", store]) == 0
    capsys.readouterr()
    assert main(["diff", "1", "2", "--store", store]) == 0
    assert "clean" in capsys.readouterr().out
    assert main(["diff", "1", "3", "--store", store]) == 1
    assert "CONFIG MISMATCH" in capsys.readouterr().out
    assert main(["diff", "1", "9", "--store", store]) == 2


def test_selftest(capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qplane", "pair", "--class", "bott:1", "--hom",
                           "F:0"], capture_output=True, text=True, check=True)
    assert proc.stdout.startswith("<F_0, [P_1]> = 1")
