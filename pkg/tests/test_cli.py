import json
import subprocess
import sys

import numpy as np
import pytest

from spinholonomy.cli import load_input, main, plane_file_dict
from spinholonomy.gates_lab import catalog_entry
from spinholonomy.spin_core import SpinQuantum
from spinholonomy.stellar import Constellation


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name in ("pi_not", "pi_cnot"):
        e = catalog_entry(name)
        paths[name] = tmp_path / f"{name}.json"
        paths[name].write_text(json.dumps(plane_file_dict(e.s, e.kets, name)))
    chi = catalog_entry("chi")
    paths["chi"] = tmp_path / "chi.json"
    paths["chi"].write_text(json.dumps({"twice_s": 4, "ket": plane_file_dict(chi.s, chi.kets)["kets"][0]}))
    top = np.zeros(7, complex)
    top[0] = 1
    paths["top"] = tmp_path / "top.json"
    paths["top"].write_text(json.dumps(dict(plane_file_dict(SpinQuantum(6), [top]), kind="state")))
    rng = np.random.default_rng(0)
    paths["random"] = tmp_path / "random.json"
    kets = rng.normal(size=(2, 5)) + 1j * rng.normal(size=(2, 5))
    paths["random"].write_text(json.dumps(plane_file_dict(chi.s, kets)))
    paths["mismatch"] = tmp_path / "mismatch.json"
    paths["mismatch"].write_text(json.dumps({"twice_s": 4, "kets": [[[1, 0]] * 4, [[0, 1]] * 4]}))
    paths["rankdef"] = tmp_path / "rankdef.json"
    paths["rankdef"].write_text(json.dumps({"twice_s": 2, "kets": [[[1, 0], [0, 0], [0, 0]]] * 2}))
    paths["garbage"] = tmp_path / "garbage.json"
    paths["garbage"].write_text("{not json")
    paths["badpairs"] = tmp_path / "badpairs.json"
    paths["badpairs"].write_text(json.dumps({"twice_s": 1, "kets": [[1, 0]]}))
    return {k: str(v) for k, v in paths.items()}


def test_demo_not(capsys):
    code, rep = run(capsys, "demo", "not")
    assert code == 0 and rep["verdict"] == "PASS"
    assert rep["outputs"]["max_abs_deviation"] < 1e-8
    assert rep["outputs"]["expected"] == [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]


def test_demo_cnot2_phases(capsys):
    code, rep = run(capsys, "demo", "cnot2")
    assert code == 0
    u = np.array(rep["outputs"]["holonomy"])
    u = u[..., 0] + 1j * u[..., 1]
    phases = np.angle(np.diag(u))
    np.testing.assert_allclose(phases, [0, 0, 4 * np.pi / 5, -4 * np.pi / 5], atol=1e-8)


def test_demo_steps_irrelevant(capsys):
    _, coarse = run(capsys, "demo", "not", "--steps", "101")
    _, fine = run(capsys, "demo", "not", "--steps", "2001")
    a, b = np.array(coarse["outputs"]["holonomy"]), np.array(fine["outputs"]["holonomy"])
    assert np.max(np.abs(a - b)) < 1e-9


def test_demo_fail_verdict(capsys):
    code, rep = run(capsys, "demo", "cnot1", "--tol", "1e-30")
    assert code == 1 and rep["verdict"] == "FAIL"


def test_usage_errors(capsys):
    assert main(["demo", "foo"]) == 2
    assert main([]) == 2
    assert main(["invariance", "not", "--seeds", "0"]) == 2
    assert main(["demo", "not", "--steps", "abc"]) == 2


def test_audit_pi_not(capsys, files):
    code, rep = run(capsys, "audit", files["pi_not"])
    assert code == 0
    out = rep["outputs"]
    assert out["anticoherence_order"] >= 1
    rots = [np.array(r) for r in out["symmetries"]["rotations"]]
    assert any(np.allclose(np.abs(r), [0, np.pi, 0], atol=1e-8) for r in rots)


def test_audit_random_plane(capsys, files):
    code, rep = run(capsys, "audit", files["random"], "--tmax", "2")
    assert code == 0 and rep["outputs"]["anticoherence_order"] == 0


@pytest.mark.parametrize("key, code", [("mismatch", 3), ("rankdef", 3), ("garbage", 2), ("badpairs", 2)])
def test_audit_bad_files(capsys, files, key, code):
    assert main(["audit", files[key]]) == code
    assert main(["constellation", files[key]]) == code


def test_missing_file(capsys, tmp_path):
    assert main(["audit", str(tmp_path / "nope.json")]) == 2


def test_constellation_chi(capsys, files, tmp_path):
    out = tmp_path / "stars.json"
    code, rep = run(capsys, "constellation", files["chi"], "--out", str(out))
    assert code == 0
    star_file = json.loads(out.read_text())
    assert star_file == rep["outputs"]["stars"]
    (mult,) = star_file["multiplets"]
    assert set(mult["stars"][0]) == {"x", "y", "z", "mult"}
    pts = Constellation.from_json(mult["stars"]).expanded()
    d = np.linalg.norm(pts[:, None] - pts[None], axis=2)[np.triu_indices(4, 1)]
    assert d.max() - d.min() < 1e-7


def test_constellation_pi_not(capsys, files):
    _, rep = run(capsys, "constellation", files["pi_not"])
    stars = rep["outputs"]["stars"]
    spin3 = stars["multiplets"][0]
    assert spin3["j"] == 3.0 and len(spin3["stars"]) == 6
    assert stars["multiplets"][1]["stars"] == []
    assert stars["spectator"] == [{"x": 0.0, "y": 0.0, "z": 1.0, "mult": 1}]


def test_constellation_highest_weight_state(capsys, files):
    _, rep = run(capsys, "constellation", files["top"])
    (mult,) = rep["outputs"]["stars"]["multiplets"]
    assert mult["stars"] == [{"x": 0.0, "y": 0.0, "z": 1.0, "mult": 6}]


def test_invariance(capsys):
    code, rep = run(capsys, "invariance", "not", "--seeds", "4", "--amplitude", "0", "1.0")
    assert code == 0 and rep["verdict"] == "PASS"
    table = rep["outputs"]["table"]
    assert len(table) == 8
    assert all(row["deviation"] == 0.0 for row in table if row["amplitude"] == 0.0)
    assert all(row["deviation"] < 1e-7 for row in table)


def test_reports_are_deterministic(capsys, files, tmp_path):
    outs = []
    for _ in range(2):
        main(["invariance", "cnot1", "--seeds", "2", "--amplitude", "2.0", "--seed", "7"])
        outs.append(capsys.readouterr().out)
        main(["audit", files["pi_cnot"]])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[2] and outs[1] == outs[3]
    assert json.loads(outs[0])["args"]["seed"] == 7


def test_out_writes_report(capsys, tmp_path):
    path = tmp_path / "report.json"
    main(["demo", "not", "--out", str(path)])
    assert path.read_text() == capsys.readouterr().out


def test_plane_file_roundtrip(tmp_path):
    rng = np.random.default_rng(3)
    kets = rng.normal(size=(3, 6)) + 1j * rng.normal(size=(3, 6))
    path = tmp_path / "p.json"
    path.write_text(json.dumps(plane_file_dict(SpinQuantum(5), kets, "x")))
    inp, _ = load_input(str(path))
    assert np.array_equal(inp["kets"], kets)
    assert inp["name"] == "x" and inp["kind"] == "plane"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "spinholonomy", "demo", "nope"], capture_output=True, text=True)
    assert res.returncode == 2
    assert "invalid choice" in res.stderr
