import json

import pytest

from projsel.cli import main


def _gen(tmp_path, *extra, name="inst.json"):
    path = tmp_path / name
    assert main(["gen", *extra, "--out", str(path)]) == 0
    return path


def test_gen_then_select_fr(tmp_path, capsys):
    path = _gen(tmp_path, "--kind", "paper_example", "--name", "fr_counterexample")
    assert main(["select", str(path), "--algorithm", "fr"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["objective"] == pytest.approx(26 / 3)


def test_select_opt_and_omp(tmp_path, capsys):
    path = _gen(tmp_path, "--kind", "paper_example", "--name", "fr_counterexample")
    main(["select", str(path), "--algorithm", "opt"])
    assert json.loads(capsys.readouterr().out)["objective"] == pytest.approx(9.0)
    main(["select", str(path), "--algorithm", "omp", "--literal-residual"])
    out = json.loads(capsys.readouterr().out)
    assert out["literal_residual"] is True


def test_gen_is_reproducible(tmp_path):
    a = _gen(tmp_path, "--kind", "perturbed", "--delta", "0.05", "--n", "6", "--dim", "6",
             "--seed", "3", name="a.json")
    b = _gen(tmp_path, "--kind", "perturbed", "--delta", "0.05", "--n", "6", "--dim", "6",
             "--seed", "3", name="b.json")
    assert a.read_text() == b.read_text()


def test_curvature_command(tmp_path, capsys):
    path = _gen(tmp_path, "--kind", "paper_example", "--name", "fr_counterexample")
    assert main(["curvature", str(path), "--k", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["kappa_fwd"] == pytest.approx(2.0)
    assert "coherence" in out


def test_curvature_sampled(tmp_path, capsys):
    path = _gen(tmp_path, "--n", "6", "--dim", "6")
    assert main(["curvature", str(path), "--mode", "sampled", "--samples", "50"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["mode"].startswith("sampled")


def test_bounds_command(tmp_path, capsys):
    path = _gen(tmp_path, "--kind", "orthogonal", "--n", "5", "--dim", "5", "--k", "2")
    assert main(["bounds", str(path)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["empirical_ratio_fr"] == pytest.approx(1.0)
    assert all(out["satisfied"].values())


def test_exact_guard_exits_2(tmp_path, capsys):
    path = _gen(tmp_path, "--n", "14", "--dim", "14", "--k", "2")
    assert main(["curvature", str(path)]) == 2
    assert "error" in capsys.readouterr().err


def test_validate_matroid(tmp_path, capsys):
    path = _gen(tmp_path, "--kind", "paper_example", "--name", "nonuniform_counterexample")
    assert main(["validate-matroid", str(path)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["augmentation_ok"] is False
    bare = tmp_path / "m.json"
    bare.write_text(json.dumps({"type": "uniform", "k": 2}))
    assert main(["validate-matroid", str(bare), "--n", "4"]) == 0
    assert json.loads(capsys.readouterr().out)["augmentation_ok"] is True


@pytest.mark.parametrize("mutate, field", [
    (lambda d: d.pop("ground"), "ground"),
    (lambda d: d["matroid"].pop("k"), "matroid.k"),
    (lambda d: d.__setitem__("eta", [1.0]), "eta"),
])
def test_malformed_instance_names_field(tmp_path, capsys, mutate, field):
    path = _gen(tmp_path, "--kind", "orthogonal", "--n", "3", "--dim", "3", "--k", "2")
    data = json.loads(path.read_text())
    mutate(data)
    path.write_text(json.dumps(data))
    assert main(["select", str(path)]) == 2
    assert field in capsys.readouterr().err


def test_missing_and_invalid_files(tmp_path, capsys):
    assert main(["bounds", str(tmp_path / "nope.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["select", str(bad)]) == 2
    assert "invalid JSON" in capsys.readouterr().err


def test_sweep_csv_and_json(tmp_path, capsys):
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps({"reps": 2, "configs": [
        {"kind": "orthogonal", "dim": 4, "n": 4, "K": 2, "seed": 1},
        {"kind": "paper_example", "name": "nonuniform_counterexample"}]}))
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["sweep", str(cfg), "--no-times", "--out", str(out1)]) == 0
    assert main(["sweep", str(cfg), "--no-times", "--workers", "2", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert len(out1.read_text().splitlines()) == 5
    assert main(["sweep", str(cfg), "--format", "json", "--reps", "1"]) == 0
    assert len(json.loads(capsys.readouterr().out)) == 2


def test_sweep_bad_config(tmp_path, capsys):
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps([{"kind": "orthogonal", "colour": 1}]))
    assert main(["sweep", str(cfg)]) == 2
    assert "configs[0].colour" in capsys.readouterr().err
