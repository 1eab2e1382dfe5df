import json

import pytest

from causalchron.bayesnet import Dag, write_dag
from causalchron.cli import main
from causalchron.dataset import load_reads, save_reads


@pytest.fixture
def chain_data(tmp_path):
    from causalchron.pipeline import ScenarioSpec, simulate

    m, _ = simulate(ScenarioSpec(preset="chain-4", n_rows=600, missing_rate=0.0, seed=0))
    path = tmp_path / "data.csv"
    save_reads(m, path)
    return path


class TestSimulateCommand:
    def test_writes_data_and_truth(self, tmp_path, capsys):
        out = tmp_path / "sim"
        code = main([
            "simulate", "--preset", "chain-4", "--n", "100", "--rate", "0.2",
            "--seed", "3", "--out", str(out),
        ])
        assert code == 0
        m = load_reads(out / "data.csv")
        assert m.n_rows == 100
        truth = json.loads((out / "truth.json").read_text())
        assert truth["preset"] == "chain-4"

    def test_bad_preset_exit_1(self, tmp_path, capsys):
        assert main(["simulate", "--preset", "zzz", "--out", str(tmp_path / "x")]) == 1


class TestImputeCommand:
    def test_outputs(self, tmp_path, capsys):
        from causalchron.pipeline import ScenarioSpec, simulate

        m, _ = simulate(ScenarioSpec(preset="chain-4", n_rows=400, missing_rate=0.3, seed=1))
        data = tmp_path / "data.csv"
        save_reads(m, data)
        out = tmp_path / "imp"
        code = main([
            "impute", "--data", str(data), "--method", "mode", "--learner", "hc",
            "--tol", "0.01", "--max-iter", "10", "--seed", "2", "--out", str(out),
        ])
        assert code == 0
        completed = load_reads(out / "data.imputed.csv")
        assert completed.is_complete
        report = json.loads((out / "imputation.json").read_text())
        assert set(report) == {"iterations", "edge_change_history", "converged"}


class TestDiscoverCommand:
    def test_each_algorithm(self, chain_data, tmp_path, capsys):
        for algo in ("hc", "pc", "lingam", "notears"):
            out = tmp_path / algo
            assert main([
                "discover", "--data", str(chain_data), "--algo", algo,
                "--seed", "0", "--out", str(out),
            ]) == 0
            assert (out / f"dag.{algo}.edges").exists()
            assert (out / f"dag.{algo}.dot").exists()

    def test_stability_writes_report(self, chain_data, tmp_path, capsys):
        out = tmp_path / "stab"
        code = main([
            "discover", "--data", str(chain_data), "--algo", "notears-stability",
            "--lambda-grid", "0.01:0.5:4", "--resamples", "4", "--seed", "0",
            "--out", str(out),
        ])
        assert code == 0
        doc = json.loads((out / "stability.json").read_text())
        assert len(doc["lambda_grid"]) == 4
        assert "edge_frequencies" in doc

    def test_bad_grid_exit_1(self, chain_data, tmp_path):
        assert main([
            "discover", "--data", str(chain_data), "--algo", "notears-stability",
            "--lambda-grid", "nope", "--out", str(tmp_path / "x"),
        ]) == 1


class TestEffectsCommand:
    def test_csv_columns(self, chain_data, tmp_path, capsys):
        dag_path = tmp_path / "dag.edges"
        write_dag(Dag(("x1", "x2", "x3", "x4"), [("x1", "x2"), ("x2", "x3")]), dag_path)
        out = tmp_path / "eff"
        code = main([
            "effects", "--dag", str(dag_path), "--data", str(chain_data),
            "--refute", "none", "--seed", "0", "--out", str(out),
        ])
        assert code == 0
        header = (out / "effects.csv").read_text().splitlines()[0]
        assert header.split(",")[:4] == ["treatment", "outcome", "kind", "value"]

    def test_mismatched_dag_exit_1(self, chain_data, tmp_path, capsys):
        dag_path = tmp_path / "dag.edges"
        write_dag(Dag(("q1", "q2"), [("q1", "q2")]), dag_path)
        assert main([
            "effects", "--dag", str(dag_path), "--data", str(chain_data),
            "--out", str(tmp_path / "x"),
        ]) == 1


class TestChronologyCommand:
    def test_tree_outputs(self, chain_data, tmp_path, capsys):
        dag_path = tmp_path / "dag.edges"
        write_dag(Dag(("x1", "x2", "x3", "x4"), [("x1", "x2"), ("x2", "x3")]), dag_path)
        eff = tmp_path / "eff"
        main([
            "effects", "--dag", str(dag_path), "--data", str(chain_data),
            "--refute", "none", "--out", str(eff),
        ])
        out = tmp_path / "chrono"
        code = main([
            "chronology", "--relations", str(eff / "effects.json"),
            "--dag", str(dag_path), "--out", str(out),
        ])
        assert code == 0
        assert (out / "chronology.edges").exists()
        assert "rank=same" in (out / "chronology.dot").read_text()


class TestBaselineCommand:
    def test_runs_on_fixture(self, tmp_path, capsys, table2_matrix):
        data = tmp_path / "t2.csv"
        save_reads(table2_matrix, data)
        out = tmp_path / "base"
        code = main(["baseline", "--data", str(data), "--out", str(out)])
        assert code == 0
        doc = json.loads((out / "baseline.json").read_text())
        assert doc["edges"] == [["ndhD_116785", "ndhD_116494"]]


class TestCompareCommand:
    def test_scores_to_stdout(self, chain_data, tmp_path, capsys):
        d1 = tmp_path / "m1.edges"
        d2 = tmp_path / "m2.edges"
        write_dag(Dag(("x1", "x2", "x3", "x4"), [("x1", "x2")]), d1)
        write_dag(Dag(("x1", "x2", "x3", "x4"), []), d2)
        code = main([
            "compare", "--data", str(chain_data),
            "--model", f"one={d1}", "--model", f"empty={d2}",
        ])
        assert code == 0
        outp = capsys.readouterr().out
        assert outp.splitlines()[0] == "name,bic,log_likelihood"
        assert len(outp.splitlines()) == 3

    def test_bad_model_spec_exit_1(self, chain_data, capsys):
        assert main(["compare", "--data", str(chain_data), "--model", "oops"]) == 1


class TestFalsifyCommand:
    def test_verdict_json(self, chain_data, tmp_path, capsys):
        dag_path = tmp_path / "dag.edges"
        write_dag(
            Dag(("x1", "x2", "x3", "x4"), [("x1", "x2"), ("x2", "x3"), ("x3", "x4")]),
            dag_path,
        )
        out = tmp_path / "verdict.json"
        code = main([
            "falsify", "--dag", str(dag_path), "--data", str(chain_data),
            "--perms", "10", "--seed", "0", "--out", str(out),
        ])
        assert code == 0
        doc = json.loads(out.read_text())
        assert isinstance(doc["falsifiable"], bool)
        assert len(doc["baseline"]) == 10


class TestPipelineCommand:
    def test_end_to_end_with_config(self, tmp_path, capsys):
        cfg = {
            "scenario": {"preset": "chain-4", "n_rows": 400, "missing_rate": 0.2, "seed": 1},
            "algorithms": ["hc", "notears"],
            "refutations": "none",
            "seed": 4,
        }
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(cfg))
        out = tmp_path / "run"
        code = main(["pipeline", "--config", str(cfg_path), "--out", str(out)])
        assert code == 0
        report = json.loads((out / "report.json").read_text())
        assert set(report["models"]) == {"hc", "notears"}

    def test_stage_failure_exit_2(self, tmp_path, capsys):
        cfg = {
            "input_path": str(tmp_path / "nope.csv"),
            "algorithms": ["hc"],
        }
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(cfg))
        assert main(["pipeline", "--config", str(cfg_path), "--out", str(tmp_path / "r")]) == 2

    def test_missing_config_exit_1(self, tmp_path):
        assert main(["pipeline", "--config", str(tmp_path / "absent.json")]) == 1
