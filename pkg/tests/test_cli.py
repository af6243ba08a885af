import json
import subprocess
import sys

import pytest

from heckedist.cli import load_spectrum_json, main
from heckedist.spectra import eigen_angles


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_trace(capsys):
    assert run(capsys, "trace", "--weight", "12", "--index", "2") == (0, "-24\n", "")


def test_trace_json(capsys):
    code, out, _ = run(capsys, "trace", "--weight", "12", "--index", "4", "--format", "json")
    assert code == 0 and json.loads(out) == {"weight": 12, "index": 4, "trace": "-1472"}


def test_classnum(capsys):
    assert run(capsys, "classnum", "--d", "12") == (0, "4/3\n", "")


def test_classnum_table_uses_cache(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("HECKEDIST_CACHE_DIR", str(tmp_path / "env"))
    code, out, _ = run(capsys, "classnum", "--max", "8", "--format", "csv")
    assert code == 0
    assert out == "d,numerator,denominator\n3,1,3\n4,1,2\n7,1,1\n8,1,1\n"
    assert (tmp_path / "env" / "hurwitz_v1.csv").exists()
    # the flag overrides the environment
    run(capsys, "classnum", "--max", "8", "--cache-dir", str(tmp_path / "flag"))
    assert (tmp_path / "flag" / "hurwitz_v1.csv").exists()


def test_moments_csv(capsys):
    code, out, _ = run(capsys, "moments", "--prime", "2", "--max-n", "4",
                       "--measure", "plancherel", "--format", "csv")
    assert code == 0
    assert out == "n,moment\n0,1\n1,0\n2,1.5\n3,0\n4,3.75\n"


def test_moments_sato_tate_json(capsys):
    code, out, _ = run(capsys, "moments", "--measure", "sato_tate", "--max-n", "6", "--format", "json")
    assert [m["exact"] for m in json.loads(out)["moments"]] == ["1", "0", "1", "0", "2", "0", "5"]


def test_density_csv(capsys):
    code, out, _ = run(capsys, "density", "--prime", "3", "--points", "5", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "theta,density,cdf" and len(lines) == 6
    assert lines[1] == "0,0,0"
    assert lines[3].split(",")[2] == "0.5"


def test_spectrum_json(capsys):
    code, out, _ = run(capsys, "spectrum", "--weight", "24", "--prime", "2", "--digits", "10",
                       "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["dim"] == 2 and len(data["angles"]) == 2
    assert set(data["ks"]) == {"plancherel", "sato_tate"}
    assert load_spectrum_json(out) == eigen_angles(24, 2, 10)


def test_spectrum_round_trip_large(capsys):
    _, out, _ = run(capsys, "spectrum", "--weight", "100", "--prime", "3", "--format", "json")
    assert load_spectrum_json(out) == eigen_angles(100, 3, 12)


def test_output_is_byte_identical(capsys):
    args = ("spectrum", "--weight", "60", "--prime", "5", "--format", "json")
    assert run(capsys, *args) == run(capsys, *args)
    assert "metadata" not in run(capsys, *args)[1]


def test_stamp(capsys):
    _, out, _ = run(capsys, "moments", "--prime", "2", "--max-n", "2", "--format", "json", "--stamp")
    assert "generated" in json.loads(out)["metadata"]


def test_scan(capsys):
    code, out, _ = run(capsys, "scan", "--weights", "12,16,18,20,22,26", "--prime", "2",
                       "--digits", "10", "--format", "csv")
    assert code == 0 and len(out.splitlines()) == 7
    code, out, _ = run(capsys, "scan", "--weights", "40:60", "--prime", "3", "--format", "json")
    assert json.loads(out)["weights"] == list(range(40, 61, 2))


@pytest.mark.parametrize("argv", [
    ("trace", "--weight", "13", "--index", "2"),
    ("trace", "--weight", "12", "--index", "0"),
    ("trace", "--weight", "12", "--index", "2", "--unknown"),
    ("spectrum", "--weight", "24", "--prime", "4"),
    ("spectrum", "--weight", "24", "--prime", "2", "--digits", "0"),
    ("moments", "--measure", "plancherel"),
    ("classnum", "--d", "5"),
    ("scan", "--weights", "4:10", "--prime", "2"),
    ("scan", "--weights", "abc", "--prime", "2"),
    ("verify", "--suite", "nonsense"),
    ("frobnicate",),
])
def test_invalid_parameters(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert json.loads(err)["error"]["code"] == 2


def test_cache_failure(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code, _, err = run(capsys, "classnum", "--max", "50", "--cache-dir", str(blocker / "x"))
    assert code == 4 and json.loads(err)["error"]["kind"] == "cache_io"


def test_computation_failure(capsys, monkeypatch):
    from heckedist import cli, spectra

    def broken(*args, **kwargs):
        raise spectra.RootIsolationError("could not certify")

    monkeypatch.setattr(cli, "eigen_angles", broken)
    code, _, err = run(capsys, "spectrum", "--weight", "24", "--prime", "2")
    assert code == 3 and json.loads(err)["error"]["kind"] == "computation"


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["passed"]
    assert {s["name"] for s in data["suites"]} >= {"oracle_trace", "charpoly", "hurwitz"}


def test_verify_reports_mismatch(capsys, monkeypatch):
    from heckedist import verify

    def bad():
        raise AssertionError("forced mismatch")

    monkeypatch.setitem(verify.SUITES, "tau", bad)
    code, out, _ = run(capsys, "verify", "--suite", "tau")
    assert code == 1 and out.startswith("FAIL tau")


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "heckedist.cli", "trace", "--weight", "16", "--index", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "216\n"
