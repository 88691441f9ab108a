import json

import pytest

from tcs_forge.checks import run_check
from tcs_forge.loaders import DATA_DIR, load_chart
from tcs_forge.main import main


def _run(argv):
    with pytest.raises(SystemExit) as exc_info:
        main(argv)
    return exc_info.value.code


@pytest.fixture
def np_file(tmp_path):
    """Plus-side Picard lattice as a JSON file."""
    path = tmp_path / "np.json"
    path.write_text(json.dumps({"gram": [[0, 3], [3, 2]]}))
    return str(path)


@pytest.fixture
def nm_file(tmp_path):
    """Minus-side Picard lattice as a JSON file."""
    path = tmp_path / "nm.json"
    path.write_text(json.dumps({"gram": [[0, 4], [4, 2]], "ample": [2, 1]}))
    return str(path)


def test_lattice_signature(np_file, capsys):
    assert _run(["lattice", "signature", "--lattice", np_file]) == 0
    cert = json.loads(capsys.readouterr().out)
    assert cert["value"] == [1, 1, 0]
    assert cert["verdict"] == "pass"


def test_lattice_enum(np_file, capsys):
    assert _run(["lattice", "enum", "--lattice", np_file, "--square", "-4", "--bound", "2"]) == 0
    cert = json.loads(capsys.readouterr().out)
    assert cert["value"] == [[-1, 1], [-1, 2], [1, -2], [1, -1]]


def test_lattice_orth(np_file, capsys):
    assert _run(["lattice", "orth", "--lattice", np_file, "--gens", "5,-3"]) == 0
    cert = json.loads(capsys.readouterr().out)
    assert cert["value"] in ([[1, 1]], [[-1, -1]])


def test_stability_stable(np_file):
    assert _run(["stability", "--lattice", np_file, "--ample", "1,1", "--c1=-1,1"]) == 0


def test_stability_inconclusive(nm_file):
    assert _run(["stability", "--lattice", nm_file, "--c1", "2,0"]) == 2


def test_stability_from_chart(capsys):
    chart = str(DATA_DIR / "p1xp2_block.json")
    assert _run(["stability", "--chart", chart, "--c1=-3,-2,1", "--ample", "1,1"]) == 0
    cert = json.loads(capsys.readouterr().out)
    assert cert["inputs"]["c1"] == [-1, 1]


def test_moduli_from_mukai_vector(np_file, capsys):
    assert _run(["moduli", "--lattice", np_file, "--mukai", "2;-1,1;-1"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == 2


def test_moduli_from_chern_classes(np_file, capsys):
    assert _run(["moduli", "--lattice", np_file, "--c1=-1,1", "--c2", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == 2


def test_verify_suite(capsys):
    assert _run(["verify", "matching"]) == 0
    certificates = json.loads(capsys.readouterr().out)
    assert all(c["verdict"] == "pass" for c in certificates)


def test_chart_blowup_writes_block(tmp_path):
    out = tmp_path / "z.json"
    argv = [
        "chart",
        "blowup",
        "--fano",
        str(DATA_DIR / "p1xp2_fano.json"),
        "--base-locus",
        "--name",
        "Z+",
        "--out",
        str(out),
    ]
    assert _run(argv) == 0
    block = load_chart(out)
    assert block.c2_pair == (12, 18, 54)
    assert block.centre_genus == 28


def test_chart_blowup_along_given_centre(tmp_path):
    centre = tmp_path / "centre.json"
    centre.write_text(json.dumps({"degrees": [9, 12], "genus": 28}))
    argv = ["chart", "blowup", "--fano", str(DATA_DIR / "p1xp2_fano.json"), "--centre", str(centre)]
    assert _run(argv) == 0


def test_chart_doublecover(tmp_path):
    out = tmp_path / "cover.json"
    argv = [
        "chart",
        "doublecover",
        "--base",
        str(DATA_DIR / "p1xp2_fano.json"),
        "--half-branch",
        "1,1",
        "--out",
        str(out),
    ]
    assert _run(argv) == 0
    assert load_chart(out).c2_pair == (4, 10)


def test_search_writes_outputs(tmp_path):
    out = tmp_path / "candidates.json"
    summary = tmp_path / "rejections.csv"
    argv = [
        "--threads",
        "2",
        "search",
        "--spec",
        str(DATA_DIR / "search_neg72.json"),
        "--out",
        str(out),
        "--summary",
        str(summary),
    ]
    assert _run(argv) == 0
    assert json.loads(out.read_text())
    assert summary.exists()


def test_empty_search_exits_3(tmp_path):
    spec = json.loads((DATA_DIR / "search_neg72.json").read_text())
    for key in ("chart_p", "chart_m", "configuration"):
        spec[key] = str(DATA_DIR / spec[key])
    spec["box"] = 0
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(spec))
    assert _run(["search", "--spec", str(spec_path), "--out", str(tmp_path / "c.json")]) == 3


def test_recheck(tmp_path):
    cert = run_check("lattice.signature", {"lattice": {"gram": [[0, 1], [1, 0]]}})
    good = tmp_path / "good.json"
    good.write_text(cert.to_json())
    assert _run(["recheck", str(good)]) == 0

    bad = tmp_path / "bad.json"
    bad.write_text(cert.model_copy(update={"value": [0, 2, 0]}).to_json())
    assert _run(["recheck", str(bad)]) == 1


def test_recheck_rejects_non_certificate(tmp_path):
    path = tmp_path / "junk.json"
    path.write_text(json.dumps({"hello": "world"}))
    assert _run(["recheck", str(path)]) == 65


def test_usage_errors_exit_64(np_file):
    """Test that missing arguments and invalid settings exit with 64."""
    assert _run(["lattice"]) == 64
    assert _run(["lattice", "saturate", "--lattice", np_file]) == 64
    assert _run(["moduli", "--lattice", np_file]) == 64
    assert _run(["--threads", "0", "verify", "matching"]) == 64


def test_data_format_errors_exit_65(tmp_path):
    assert _run(["lattice", "signature", "--lattice", str(tmp_path / "missing.json")]) == 65
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"gram": [[1, 2]]}))
    assert _run(["lattice", "signature", "--lattice", str(bad)]) == 65


def test_unknown_suite_exits_64():
    """Test that an unknown suite name is a usage error."""
    assert _run(["verify", "bogus"]) == 64


def test_malformed_spec_exits_65(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps({"chart_p": "a.json", "box": -1}))
    assert _run(["search", "--spec", str(path), "--out", str(tmp_path / "c.json")]) == 65


def test_blowup_of_tampered_fano_fails_noether(tmp_path, capsys):
    """Test that a Fano chart with a wrong c2 yields a failing Noether record."""
    fano = json.loads((DATA_DIR / "p1xp2_fano.json").read_text())
    fano["c2_pair"] = [3, 7]
    path = tmp_path / "fano.json"
    path.write_text(json.dumps(fano))
    assert _run(["chart", "blowup", "--fano", str(path), "--base-locus"]) == 1
    cert = json.loads(capsys.readouterr().out)
    noether = next(r for r in cert["trace"] if r["check"] == "noether")
    assert noether["status"] == "fail"


def test_centre_without_genus_exits_65(tmp_path):
    centre = tmp_path / "centre.json"
    centre.write_text(json.dumps({"degrees": [9, 12]}))
    argv = ["chart", "blowup", "--fano", str(DATA_DIR / "p1xp2_fano.json"), "--centre", str(centre)]
    assert _run(argv) == 65
