"""End-to-end tests of the command-line interface."""

import json
import math

import pytest

from vclab import __version__
from vclab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def data_lines(path):
    return [
        line
        for line in path.read_text().splitlines()
        if line and not line.startswith("#")
    ]


class TestTransition:
    def test_combinatorial_value(self, capsys):
        code, out, _ = run(capsys, "transition", "--rho", "0", "--method", "combinatorial")
        assert code == 0
        payload = json.loads(out)
        assert payload["alpha_star"] == pytest.approx(4.8638761829, abs=1e-6)
        assert payload["method"] == "combinatorial"
        assert payload["residual"] <= 1e-10

    def test_divergence_exit_code(self, capsys):
        code, out, _ = run(capsys, "transition", "--rho", "1")
        assert code == 2
        payload = json.loads(out)
        assert payload["error"] == "NoTransitionError"

    def test_margin_threshold(self, capsys):
        code, out, _ = run(capsys, "transition", "--kappa", "1", "--method", "annealed-margin")
        assert code == 0
        assert json.loads(out)["alpha_star"] == pytest.approx(0.7672, abs=1e-4)

    def test_annealed_pairs(self, capsys):
        code, out, _ = run(capsys, "transition", "--rho", "0", "--method", "annealed-pairs")
        assert code == 0
        expected = (1 + math.log(2 * math.pi)) / (2 * math.log(2))
        assert json.loads(out)["alpha_star"] == pytest.approx(expected, rel=1e-12)

    def test_missing_input_is_validation_error(self, capsys):
        code, out, _ = run(capsys, "transition", "--method", "combinatorial")
        assert code == 1


class TestCount:
    def test_writes_curves_and_header(self, capsys, tmp_path):
        out = tmp_path / "count.csv"
        code, _, _ = run(
            capsys, "count", "--k", "2", "--rho", "0.5",
            "--n", "5,10", "--alpha", "1:3:1", "--out", str(out),
        )
        assert code == 0
        text = out.read_text()
        assert text.startswith(f"# vclab {__version__}\n")
        assert "# config = " in text and "# seed = 0" in text
        rows = data_lines(out)
        assert rows[0] == "source,n,p,alpha,log_count,stderr"
        assert len(rows) == 1 + 6

    def test_empty_grid_is_validation_error(self, capsys, tmp_path):
        code, out, _ = run(
            capsys, "count", "--k", "1", "--n", "3", "--alpha", ",",
            "--out", str(tmp_path / "x.csv"),
        )
        assert code == 1

    def test_plot_script_emitted(self, capsys, tmp_path):
        out = tmp_path / "count.csv"
        script = tmp_path / "count.gp"
        code, _, _ = run(
            capsys, "count", "--k", "1", "--n", "4", "--alpha", "1,2",
            "--out", str(out), "--plot-script", str(script),
        )
        assert code == 0
        assert "plot" in script.read_text()

    def test_montecarlo_rows(self, capsys, tmp_path):
        out = tmp_path / "count.csv"
        code, _, _ = run(
            capsys, "count", "--k", "3", "--rho", "0.2", "--n", "3",
            "--alpha", "1,2", "--trials", "10", "--out", str(out),
        )
        assert code == 0
        rows = data_lines(out)
        assert all(r.startswith("montecarlo") for r in rows[1:])


class TestMc:
    def test_scan_csv_and_crossover_json(self, capsys, tmp_path):
        out = tmp_path / "mc.csv"
        code, stdout, stderr = run(
            capsys, "mc", "--mode", "pairs", "--rho", "0.5", "--n", "3",
            "--alpha", "1..6", "--trials", "40", "--threads", "1",
            "--out", str(out),
        )
        assert code == 0
        rows = data_lines(out)
        assert rows[0] == (
            "mode,rho_or_kappa,n,p,alpha,trials,sat_fraction,stderr,"
            "mean_count,count_stderr,seed"
        )
        assert len(rows) == 1 + 6
        fit = json.loads(stdout)
        assert fit["method"] == "montecarlo-fit"
        assert 1.0 < fit["alpha_star"] < 6.0
        assert "sat_fraction" in stderr  # progress reporting

    def test_byte_identical_rerun(self, capsys, tmp_path):
        args = [
            "mc", "--mode", "pairs", "--rho", "0.3", "--n", "3",
            "--alpha", "1,2", "--trials", "20", "--threads", "1",
        ]
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        assert run(capsys, *args, "--out", str(a))[0] == 0
        assert run(capsys, *args, "--out", str(b))[0] == 0
        # identical except for the self-referential output path in the config
        assert data_lines(a) == data_lines(b)

    def test_zero_trials_validation(self, capsys, tmp_path):
        code, out, _ = run(
            capsys, "mc", "--mode", "pairs", "--rho", "0.5", "--n", "3",
            "--alpha", "1,2", "--trials", "0", "--out", str(tmp_path / "x.csv"),
        )
        assert code == 1

    def test_budget_exit_code_and_hint(self, capsys, tmp_path):
        code, out, _ = run(
            capsys, "mc", "--mode", "pairs", "--rho", "0.5", "--n", "5",
            "--alpha", "5", "--trials", "2", "--out", str(tmp_path / "x.csv"),
        )
        assert code == 3
        assert "random-classifier" in json.loads(out)["message"]

    def test_margin_mode(self, capsys, tmp_path):
        out = tmp_path / "margin.csv"
        code, _, _ = run(
            capsys, "mc", "--mode", "margin", "--kappa", "0.5", "--n", "3",
            "--alpha", "1,2,3,4", "--trials", "30", "--threads", "1",
            "--out", str(out),
        )
        assert code == 0
        rows = data_lines(out)
        assert rows[1].startswith("margin,0.5,3,")


class TestPhaseDiagram:
    def test_layer_files(self, capsys, tmp_path):
        stem = tmp_path / "phase"
        code, _, _ = run(
            capsys, "phase-diagram", "--rho", "0,0.4", "--layers",
            "combinatorial,annealed,crossing", "--n-pairs", "12:6",
            "--out", str(stem),
        )
        assert code == 0
        comb = data_lines(tmp_path / "phase.combinatorial.csv")
        ann = data_lines(tmp_path / "phase.annealed.csv")
        cross = data_lines(tmp_path / "phase.crossing.csv")
        assert len(comb) == len(ann) == 3
        # the annealed layer is a lower bound row by row
        for c, a in zip(comb[1:], ann[1:]):
            assert float(a.split(",")[1]) < float(c.split(",")[1])
        assert len(cross) == 3

    def test_mc_layer(self, capsys, tmp_path):
        stem = tmp_path / "phase"
        code, _, _ = run(
            capsys, "phase-diagram", "--rho", "0.5", "--layers", "mc",
            "--alpha", "1,2", "--trials", "10", "--threads", "1",
            "--out", str(stem),
        )
        assert code == 0
        rows = data_lines(tmp_path / "phase.mc.csv")
        assert rows[0] == "rho,alpha,p,trials,sat_fraction,stderr"
        assert len(rows) == 3

    def test_invalid_rho_grid(self, capsys, tmp_path):
        code, _, _ = run(
            capsys, "phase-diagram", "--rho", "0.5,1.0", "--out",
            str(tmp_path / "phase"),
        )
        assert code == 1


class TestFss:
    def test_scores_and_file(self, capsys, tmp_path):
        out = tmp_path / "fss.csv"
        code, stdout, _ = run(
            capsys, "fss", "--rho", "0", "--n", "50,100,200", "--out", str(out)
        )
        assert code == 0
        payload = json.loads(stdout)
        assert payload["collapse_score"] * 5 <= payload["control_score_beta0"]
        header = out.read_text()
        assert "# collapse_score" in header

    def test_beta_override_degrades(self, capsys, tmp_path):
        out = tmp_path / "fss.csv"
        code, stdout, _ = run(
            capsys, "fss", "--rho", "0", "--n", "50,100", "--beta", "0",
            "--out", str(out),
        )
        payload = json.loads(stdout)
        assert payload["collapse_score"] == pytest.approx(
            payload["control_score_beta0"]
        )

    def test_needs_theta_source(self, capsys, tmp_path):
        code, _, _ = run(capsys, "fss", "--out", str(tmp_path / "x.csv"))
        assert code == 1


class TestPsi:
    def test_single_m(self, capsys):
        code, out, _ = run(
            capsys, "psi", "--k", "2", "--rho", "0.5", "--m", "2",
            "--n", "20", "--samples", "50000",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["estimate"] == pytest.approx(2 / 3, abs=0.02)

    def test_vector(self, capsys):
        code, out, _ = run(
            capsys, "psi", "--k", "3", "--rho", "0.1", "--n", "10",
            "--samples", "5000",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["m"] == [2, 3]
        assert payload["stderr"][0] == 0.0


class TestConfigFile:
    def test_config_file_with_flag_override(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"rho": 0.5, "method": "combinatorial"}))
        code, out, _ = run(capsys, "transition", "--config", str(cfg))
        assert code == 0
        base = json.loads(out)["alpha_star"]
        code, out, _ = run(capsys, "transition", "--config", str(cfg), "--rho", "0.8")
        assert code == 0
        assert json.loads(out)["alpha_star"] > base  # flag overrides file

    def test_bad_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text("{not json")
        code, _, _ = run(capsys, "transition", "--config", str(cfg), "--rho", "0")
        assert code == 1
