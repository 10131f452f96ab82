import json
import subprocess
import sys

import pytest

from lagstar import gallery
from lagstar.cli import main


def run(*argv):
    return main([str(a) for a in argv])


def test_gallery_lists_entries(capsys):
    assert run("gallery") == 0
    assert capsys.readouterr().out.split() == list(gallery.GALLERY)


def test_gallery_spec_round_trip(tmp_path, capsys):
    assert run("gallery", "cylinder", "--param", "R=2", "--out", tmp_path) == 0
    path = tmp_path / "cylinder.json"
    spec = json.loads(path.read_text())
    assert spec == gallery.gallery_spec("cylinder", R=2.0)
    # the written file is accepted as a spec
    assert run("build", path) == 0


def test_classify_cylinder(tmp_path):
    # the gallery entry includes an expected failure (special), hence exit 1
    assert run("classify", "cylinder", "--out", tmp_path) == 1
    doc = json.loads((tmp_path / "cylinder.report.json").read_text())
    got = {c["name"]: c["pass"] for c in doc["checks"]}
    assert got == gallery.gallery_spec("cylinder")["expect"]


def test_classify_all_pass(tmp_path):
    spec = gallery.gallery_spec("shrinker-cylinder")
    spec["checks"] = ["lagrangian", "self_shrinker"]
    path = tmp_path / "s.json"
    path.write_text(json.dumps(spec))
    assert run("classify", path, "--grid", "21x21") == 0


def test_verify_special(tmp_path):
    assert run("verify", "special", "--out", tmp_path) == 0
    doc = json.loads((tmp_path / "special.verify.json").read_text())
    assert all(r["pass"] for r in doc["oracles"])


def test_verify_seeded_is_reproducible(tmp_path, capsys):
    run("verify", "cylinder", "--seed", 3)
    first = capsys.readouterr().out
    run("verify", "cylinder", "--seed", 3)
    assert capsys.readouterr().out == first


def test_mesh_all_projections(tmp_path):
    assert run("mesh", "torus-gerono-lissajous", "--grid", "11x11", "--project", "all", "--out", tmp_path) == 0
    assert sorted(p.name for p in tmp_path.glob("*.obj")) == [
        f"torus-gerono-lissajous.drop{k}.obj" for k in range(4)
    ]


def test_mesh_csv_and_ply(tmp_path):
    assert run("mesh", "cylinder", "--grid", "5x5", "--format", "csv", "--out", tmp_path) == 0
    assert len((tmp_path / "cylinder.csv").read_text().splitlines()) == 26
    assert run("mesh", "cylinder", "--grid", "5x5", "--format", "ply", "--project", "1", "--out", tmp_path) == 0
    assert (tmp_path / "cylinder.drop1.ply").exists()


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["classify"],
    ["classify", "no-such-surface"],
    ["classify", "cylinder", "--grid", "1x5"],
    ["classify", "cylinder", "--trange", "2:1"],
    ["mesh", "cylinder", "--project", "7"],
    ["gallery", "cylinder", "--param", "Q=1"],
])
def test_usage_errors(argv, capsys):
    assert run(*argv) == 2


def test_bad_spec_files(tmp_path):
    assert run("build", tmp_path / "absent.json") == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("build", bad) == 2
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"alpha": {"kind": "spiral"}, "omega": {"kind": "line"}}))
    assert run("build", wrong) == 2


def test_torus_on_aperiodic_is_usage_error(tmp_path):
    spec = gallery.gallery_spec("plane")
    spec["checks"] = ["torus"]
    path = tmp_path / "p.json"
    path.write_text(json.dumps(spec))
    assert run("classify", path) == 2


def test_numeric_failure_exit_code(tmp_path):
    spec = {"alpha": {"kind": "cmc_radial", "params": {"rho": 2.0, "lam": 0.5, "mu": 0.3, "r_init": 0.8},
                      "domain": [0, 3]},
            "omega": {"kind": "line"}}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(spec))
    assert run("build", path) == 3


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "lagstar", "gallery"], capture_output=True, text=True)
    assert out.returncode == 0 and "plane" in out.stdout
