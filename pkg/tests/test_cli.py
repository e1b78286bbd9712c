import json

import pytest

from vecmeasure import catalog
from vecmeasure.cli import main

LINEAR = {"densities": [{"breakpoints": [0, 1], "coeffs": [[1.0]]},
                        {"breakpoints": [0, 1], "coeffs": [[0.0, 2.0]]}]}


def run(tmp_path, capsys, *args, problem=None):
    argv = list(args) + ["--out", str(tmp_path)]
    if problem is not None:
        path = tmp_path / "problem.json"
        path.write_text(json.dumps(problem))
        argv += ["--problem", str(path)]
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


def test_range_writes_csv_and_svg(tmp_path, capsys):
    code, out = run(tmp_path, capsys, "range", problem={"measure": LINEAR})
    assert code == 0
    rows = (tmp_path / "boundary.csv").read_text().splitlines()
    assert rows[0] == "x,y" and rows[1] == "0,0"
    assert (tmp_path / "range.svg").read_text().startswith("<?xml")


def test_maximal_and_minimal(tmp_path, capsys):
    code, out = run(tmp_path, capsys, "maximal", problem={"measure": LINEAR, "p": [0.7, 0.8]})
    assert code == 0
    body = json.loads((tmp_path / "maximal.json").read_text())
    assert body["a_star"] == pytest.approx(11 / 60, abs=1e-10)
    assert body["hausdorff_range_vs_qset"] <= 5e-4
    code, out = run(tmp_path, capsys, "minimal", problem={"measure": LINEAR, "q": [0.3, 0.2]})
    assert code == 0 and out["m_star"][0] == pytest.approx([11 / 60, 29 / 60], abs=1e-10)


def test_qset(tmp_path, capsys):
    code, out = run(tmp_path, capsys, "qset", problem={"measure": LINEAR, "p": [0.7, 0.8]})
    assert code == 0 and (tmp_path / "qset.json").exists()


def test_purify_kernel(tmp_path, capsys):
    kernel = {"labels": ["a", "b"], "weights": [{"breakpoints": [0, 1], "coeffs": [[0.0, 1.0]]},
                                                {"breakpoints": [0, 1], "coeffs": [[1.0, -1.0]]}]}
    code, out = run(tmp_path, capsys, "purify", problem={"measure": LINEAR, "kernel": kernel})
    assert code == 0 and out["passed"]
    body = json.loads((tmp_path / "partition.json").read_text())
    assert set(body["partition"]) == {"a", "b"}


def test_purify_infeasible_exits_one(tmp_path, capsys):
    problem = {"measure": LINEAR, "targets": [[0.5, 0.05], [0.5, 0.95]]}
    code, out = run(tmp_path, capsys, "purify", problem=problem)
    assert code == 1 and out["error"] == "infeasible"
    assert out["report"]["witness"] == [0]
    assert (tmp_path / "error.json").exists()


def test_out_of_range_target_exits_one(tmp_path, capsys):
    code, out = run(tmp_path, capsys, "maximal", problem={"measure": LINEAR, "p": [0.5, 0.05]})
    assert code == 1


@pytest.mark.parametrize("problem", [
    {"measure": {"densities": []}},
    {"measure": LINEAR, "p": [1, 2, 3]},
    {"measure": LINEAR, "extra": 1},
    {"measure": {"densities": [{"breakpoints": [0, 1], "coeffs": [[-1.0]]}] * 2}},
])
def test_bad_problem_exits_two(tmp_path, capsys, problem):
    code, out = run(tmp_path, capsys, "range", problem=problem)
    assert code == 2 and out["error"] == "problem"


def test_missing_key_exits_two(tmp_path, capsys):
    code, _ = run(tmp_path, capsys, "maximal", problem={"measure": LINEAR})
    assert code == 2


def test_counterexample(tmp_path, capsys):
    code, out = run(tmp_path, capsys, "counterexample")
    assert code == 0 and out["passed"]
    assert json.loads((tmp_path / "certificate.json").read_text())["passed"]


@pytest.mark.parametrize("which", sorted(catalog.FIGURES))
def test_figures_are_deterministic(tmp_path, capsys, which):
    run(tmp_path, capsys, "figure", which)
    first = (tmp_path / f"figure_{which}.svg").read_bytes()
    run(tmp_path, capsys, "figure", which)
    assert (tmp_path / f"figure_{which}.svg").read_bytes() == first
    text = first.decode()
    assert 'stroke-dasharray="10 6"' in text and 'stroke-dasharray="2 4"' in text
    assert 'fill="#bbbbbb"' in text


def test_oracle_compare(tmp_path, capsys):
    code, _ = run(tmp_path, capsys, "oracle-compare")
    assert code == 0
    body = json.loads((tmp_path / "oracle.json").read_text())
    assert body["zonogon"][-1]["hausdorff"] <= body["zonogon"][-1]["bound"]


def test_output_dir_from_environment(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("VECMEASURE_OUT", str(tmp_path / "env"))
    assert main(["counterexample"]) == 0
    capsys.readouterr()
    assert (tmp_path / "env" / "certificate.json").exists()
