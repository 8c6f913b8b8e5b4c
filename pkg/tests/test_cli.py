import csv
import json

import pytest

from charp.cli import default_curve, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_claims_p2(capsys, tmp_path):
    out = tmp_path / "r.json"
    meta = tmp_path / "m.json"
    code, _, _ = run(capsys, "verify-claims", "--p", "2", "--curve", "1,0,0,0,1", "--out", str(out),
                     "--metadata", str(meta))
    assert code == 0
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["schema"] == "1" and doc["summary"]["passed"]
    assert all(c["provenance"] in ("paper", "derived", "trivial") for c in doc["checks"])
    assert "section_counts" in json.loads(meta.read_text())
    assert "timings" not in out.read_text()


def test_verify_claims_p3_contents(capsys):
    code, text, _ = run(capsys, "verify-claims", "--p", "3")
    doc = json.loads(text)
    checks = {c["name"]: c for c in doc["checks"]}
    assert checks["claim2.h0[m=3]"]["computed"] == 2
    assert checks["claim2.type[m=3]"]["computed"] == [1, 3]
    assert code == 0
    info = [c for c in doc["checks"] if c["informational"]]
    assert info and all(c["name"].startswith("expectation") for c in info)


def test_verify_claims_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "verify-claims", "--p", "2", "--out", str(a))
    run(capsys, "verify-claims", "--p", "2", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("argv", [["verify-claims", "--p", "4"], ["verify-claims", "--p", "3", "--curve", "1,2"],
                                  ["verify-claims", "--p", "3", "--curve", "0,0,0,0,0"], ["no-such-command"],
                                  ["plurigenera", "--p", "5", "--m-max", "4"],
                                  ["dlt-check"], ["dlt-check", "--paper-config"]])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_plurigenera_p2(capsys, tmp_path):
    code, text, _ = run(capsys, "plurigenera", "--p", "2", "--m-max", "8", "--out-dir", str(tmp_path))
    assert code == 0
    doc = json.loads((tmp_path / "plurigenera_p2_mbar1.json").read_text())
    assert [r["m"] for r in doc["rows"]] == [2, 4, 6, 8]
    assert all(r["jump"] >= 1 for r in doc["rows"])
    with open(tmp_path / "plurigenera_p2_mbar1.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 5
    assert "informational" in text


def test_plurigenera_p5(capsys, tmp_path):
    code, _, _ = run(capsys, "plurigenera", "--p", "5", "--m-max", "10", "--mbar", "1", "--out-dir", str(tmp_path))
    assert code == 0
    doc = json.loads((tmp_path / "plurigenera_p5_mbar1.json").read_text())
    assert [r["m"] for r in doc["rows"]] == [5, 10]
    assert all(r["jump"] >= 4 for r in doc["rows"])


def test_dlt_check_paper_config(capsys):
    code, text, _ = run(capsys, "dlt-check", "--paper-config", "--p", "2", "--mbar", "2")
    assert code == 0 and text.startswith("verdict: dlt")


def test_dlt_check_files(capsys, tmp_path):
    from charp.snc import worked_examples
    ex = worked_examples()
    for name, want, exit_code in (("half", "dlt", 0), ("one", "lc", 0), ("three_halves", "condition-violated", 1)):
        f = tmp_path / f"{name}.json"
        f.write_text(json.dumps(ex[name].to_dict()))
        code, text, _ = run(capsys, "dlt-check", str(f))
        assert code == exit_code
        assert text.splitlines()[0].startswith(f"verdict: {want}")
        if name == "one":
            assert "not dlt-strict" in text.splitlines()[0]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(ex["half"].to_dict())[:40])
    assert run(capsys, "dlt-check", str(bad))[0] == 2
    assert run(capsys, "dlt-check", str(tmp_path / "missing.json"))[0] == 2


def test_curve_info(capsys):
    code, text, _ = run(capsys, "curve-info", "--p", "5", "--curve", "0,0,0,1,0", "--n", "2")
    assert code == 0
    doc = json.loads(text)
    assert doc["n"] == 2 and doc["supersingular"] == doc["supersingular_by_trace"]


def test_default_curves_ordinary():
    from charp.elliptic import WeierstrassCurve
    for p in (2, 3, 5, 7):
        assert not WeierstrassCurve.from_ints(p, default_curve(p)).is_supersingular()


def test_module_entry_point():
    import subprocess
    import sys
    r = subprocess.run([sys.executable, "-m", "charp", "curve-info", "--p", "2"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["p"] == 2
