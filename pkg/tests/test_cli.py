import json

import pandas as pd
import pytest

import isoxai
from isolation_xai.evaluation import TABLE_COLUMNS

FAST = ["--n-trees", "20", "--subsample", "64"]


def run_cli(*argv):
    return isoxai.main([str(arg) for arg in argv])


def run_failing(capsys, *argv):
    with pytest.raises(SystemExit) as excinfo:
        run_cli(*argv)
    return excinfo.value.code, capsys.readouterr().err


def read_bytes(path):
    with open(path, "rb") as f:
        return f.read()


class TestGenerate:

    def test_xaxis_preset(self, tmp_path):
        assert run_cli("generate", "--preset", "xaxis", "--seed", 7, "--out", tmp_path) == 0
        frame = pd.read_csv(tmp_path / "dataset.csv")
        assert len(frame) == 1100
        assert frame.shape[1] == 7
        assert int(frame["label"].sum()) == 100
        assert (tmp_path / "resolved_config.json").exists()

    def test_bimodal_has_two_features(self, tmp_path):
        run_cli("generate", "--preset", "bimodal", "--out", tmp_path)
        frame = pd.read_csv(tmp_path / "dataset.csv")
        assert [c for c in frame.columns if c != "label"] == ["feature_0", "feature_1"]

    def test_custom_direction(self, tmp_path):
        run_cli("generate", "--u-raw", "1,0", "--n-inliers", 50, "--n-outliers", 5, "--out", tmp_path)
        frame = pd.read_csv(tmp_path / "dataset.csv")
        assert frame.shape == (55, 3)

    def test_refuses_to_overwrite(self, tmp_path, capsys):
        run_cli("generate", "--preset", "xaxis", "--out", tmp_path)
        code, err = run_failing(capsys, "generate", "--preset", "xaxis", "--out", tmp_path)
        assert code == 1
        assert "error kind=output" in err
        assert run_cli("generate", "--preset", "xaxis", "--out", tmp_path, "--force") == 0

    def test_same_seed_same_bytes(self, tmp_path):
        run_cli("generate", "--preset", "bisect", "--seed", 3, "--out", tmp_path / "a")
        run_cli("generate", "--preset", "bisect", "--seed", 3, "--out", tmp_path / "b")
        assert read_bytes(tmp_path / "a" / "dataset.csv") == read_bytes(tmp_path / "b" / "dataset.csv")


class TestFit:

    def test_eif_plus_scenario_two(self, tmp_path):
        run_cli("fit", "--preset", "xaxis", "--model", "eif+", "--scenario", "II", "--eta", 1.5,
                "--n-trees", 100, "--out", tmp_path)
        with open(tmp_path / "metrics.json", encoding="utf-8") as f:
            metrics = json.load(f)
        assert metrics["scenario"] == "II"
        assert metrics["models"]["EIF+"]["avg_precision"] >= 0.9
        assert (tmp_path / "model.json").exists()
        assert (tmp_path / "timings.json").exists()

    def test_dof_is_ignored_by_if(self, tmp_path):
        run_cli("fit", "--preset", "bisect", "--model", "if", *FAST, "--out", tmp_path / "plain")
        run_cli("fit", "--preset", "bisect", "--model", "if", "--dof", 1, *FAST, "--out", tmp_path / "dof")
        with open(tmp_path / "plain" / "model.json", encoding="utf-8") as f:
            plain = json.load(f)
        with open(tmp_path / "dof" / "model.json", encoding="utf-8") as f:
            with_dof = json.load(f)
        assert plain["trees"] == with_dof["trees"]

    def test_zero_eta_is_rejected(self, tmp_path, capsys):
        code, err = run_failing(capsys, "fit", "--preset", "xaxis", "--eta", 0, "--out", tmp_path)
        assert code == 1
        assert "error kind=config" in err

    def test_out_is_required(self, capsys):
        code, err = run_failing(capsys, "fit", "--preset", "xaxis")
        assert code == 1
        assert "--out is required" in err

    def test_missing_dataset(self, tmp_path, capsys):
        code, err = run_failing(capsys, "fit", "--dataset", tmp_path / "nope.csv", "--out", tmp_path / "run")
        assert code == 1
        assert "error kind=dataset" in err

    def test_thread_count_does_not_change_outputs(self, tmp_path):
        for threads in (1, 4):
            run_cli("fit", "--preset", "bisect3d", *FAST, "--threads", threads, "--out", tmp_path / str(threads))
        for name in ("model.json", "metrics.json"):
            assert read_bytes(tmp_path / "1" / name) == read_bytes(tmp_path / "4" / name)

    def test_rerun_from_resolved_config(self, tmp_path):
        run_cli("fit", "--preset", "bisect", "--model", "eif", *FAST, "--seed", 9, "--out", tmp_path / "first")
        run_cli("fit", "--config", tmp_path / "first" / "resolved_config.json", "--out", tmp_path / "second")
        for name in ("model.json", "metrics.json"):
            assert read_bytes(tmp_path / "first" / name) == read_bytes(tmp_path / "second" / name)

    def test_config_for_another_command(self, tmp_path, capsys):
        run_cli("generate", "--preset", "xaxis", "--out", tmp_path / "data")
        code, err = run_failing(capsys, "fit", "--config", tmp_path / "data" / "resolved_config.json",
                                "--out", tmp_path / "run")
        assert code == 1
        assert "error kind=config" in err


class TestScore:

    def test_scores_with_labels(self, tmp_path):
        run_cli("fit", "--preset", "xaxis", *FAST, "--out", tmp_path / "fit")
        run_cli("score", "--preset", "xaxis", "--model-file", tmp_path / "fit" / "model.json", "--out", tmp_path / "score")
        frame = pd.read_csv(tmp_path / "score" / "scores.csv")
        assert list(frame.columns) == ["row", "score", "predicted", "label"]
        assert len(frame) == 1100
        assert int(frame["predicted"].sum()) == 100
        assert frame["score"].between(0.0, 1.0).all()

    def test_unlabeled_without_contamination(self, tmp_path):
        run_cli("generate", "--preset", "bisect", "--out", tmp_path / "data")
        frame = pd.read_csv(tmp_path / "data" / "dataset.csv").drop(columns=["label"])
        frame.to_csv(tmp_path / "unlabeled.csv", index=False)
        run_cli("fit", "--dataset", tmp_path / "unlabeled.csv", *FAST, "--out", tmp_path / "fit")
        run_cli("score", "--dataset", tmp_path / "unlabeled.csv", "--model-file", tmp_path / "fit" / "model.json",
                "--out", tmp_path / "score")
        scores = pd.read_csv(tmp_path / "score" / "scores.csv")
        assert list(scores.columns) == ["row", "score"]

    def test_missing_model_file(self, tmp_path, capsys):
        code, err = run_failing(capsys, "score", "--preset", "xaxis", "--model-file", tmp_path / "none.json",
                                "--out", tmp_path / "score")
        assert code == 1
        assert "error kind=model_file" in err


class TestExplain:

    def test_gfi_report(self, tmp_path):
        run_cli("explain", "--mode", "gfi", "--preset", "xaxis", "--runs", 3, "--n-trees", 30, "--out", tmp_path)
        with open(tmp_path / "gfi_report.json", encoding="utf-8") as f:
            report = json.load(f)
        assert report["n_runs"] == 3
        assert report["explainer"] == "exiffi"
        assert [sum(col) for col in zip(*report["rank_histogram"])] == [3] * 6
        histogram = pd.read_csv(tmp_path / "gfi_histogram.csv")
        assert len(histogram) == 36

    def test_diffi_on_eif_is_an_error(self, tmp_path, capsys):
        code, err = run_failing(capsys, "explain", "--mode", "gfi", "--explainer", "diffi", "--model", "eif",
                                "--preset", "xaxis", "--runs", 1, "--out", tmp_path)
        assert code == 1
        assert "error kind=explain" in err

    @pytest.mark.parametrize("mode, extra", [
        ("lfi", ["--row", "0"]),
        ("scoremap", ["--features", "0,1", "--resolution", "4"]),
        ("depth-profile", []),
    ])
    def test_diffi_rejected_outside_gfi(self, tmp_path, capsys, mode, extra):
        code, err = run_failing(capsys, "explain", "--mode", mode, "--explainer", "diffi", "--model", "if",
                                *extra, "--preset", "xaxis", *FAST, "--out", tmp_path)
        assert code == 1
        assert "error kind=explain" in err
        assert "ExIFFI only" in err
        assert not (tmp_path / "resolved_config.json").exists()

    def test_scoremap_csv(self, tmp_path):
        run_cli("explain", "--mode", "scoremap", "--features", "0,1", "--resolution", 6, "--preset", "xaxis",
                *FAST, "--out", tmp_path)
        grid = pd.read_csv(tmp_path / "scoremap_0_1.csv")
        assert list(grid.columns) == ["x", "y", "winner", "magnitude", "anomaly"]
        assert len(grid) == 36
        assert set(grid["winner"]) <= {0, 1}

    def test_lfi_single_row_and_all(self, tmp_path):
        run_cli("explain", "--mode", "lfi", "--row", 1099, "--preset", "xaxis", *FAST, "--out", tmp_path / "one")
        with open(tmp_path / "one" / "lfi_row.json", encoding="utf-8") as f:
            row = json.load(f)
        assert row["row"] == 1099
        assert len(row["lfi"]) == 6

        run_cli("explain", "--mode", "lfi", "--all", "--preset", "bimodal", *FAST, "--out", tmp_path / "all")
        frame = pd.read_csv(tmp_path / "all" / "lfi.csv")
        assert list(frame.columns) == ["row", "feature_0", "feature_1", "score"]

    def test_lfi_needs_a_row(self, tmp_path, capsys):
        code, err = run_failing(capsys, "explain", "--mode", "lfi", "--preset", "xaxis", *FAST, "--out", tmp_path)
        assert code == 1
        assert "error kind=config" in err

    def test_depth_profile_from_saved_model(self, tmp_path):
        run_cli("fit", "--preset", "bisect", *FAST, "--out", tmp_path / "fit")
        run_cli("explain", "--mode", "depth-profile", "--preset", "bisect",
                "--model-file", tmp_path / "fit" / "model.json", "--out", tmp_path / "explain")
        profile = pd.read_csv(tmp_path / "explain" / "depth_profile.csv")
        assert list(profile.columns) == ["depth", "mean"]
        assert profile["depth"].iloc[0] == 0


class TestEval:

    def test_contamination_sweep(self, tmp_path):
        run_cli("eval", "--mode", "sweep", "--preset", "xaxis", "--levels", "0,0.05", "--models", "if,eif+",
                "--n-seeds", 2, *FAST, "--out", tmp_path)
        table = pd.read_csv(tmp_path / "sweep.csv")
        assert list(table.columns) == TABLE_COLUMNS
        assert len(table) == 2 * 2 * 2
        assert (tmp_path / "sweep_summary.csv").exists()

    def test_sweep_is_thread_independent(self, tmp_path):
        for threads in (1, 3):
            run_cli("eval", "--mode", "sweep", "--preset", "bisect", "--levels", "0.02", "--models", "eif",
                    "--n-seeds", 3, *FAST, "--threads", threads, "--out", tmp_path / str(threads))
        assert read_bytes(tmp_path / "1" / "sweep.csv") == read_bytes(tmp_path / "3" / "sweep.csv")

    def test_feature_selection_outputs(self, tmp_path):
        run_cli("eval", "--mode", "feature-selection", "--preset", "bimodal", "--n-seeds", 1, *FAST, "--out", tmp_path)
        table = pd.read_csv(tmp_path / "feature_selection.csv")
        assert set(table["metric"]) == {"auc_fs"}
        with open(tmp_path / "feature_selection_curves.json", encoding="utf-8") as f:
            curves = json.load(f)
        assert len(curves) == 1

    def test_ndcg_table(self, tmp_path):
        run_cli("eval", "--mode", "ndcg", "--preset", "xaxis", "--n-seeds", 2, *FAST, "--out", tmp_path)
        table = pd.read_csv(tmp_path / "ndcg.csv")
        assert len(table) == 2
        assert table["value"].between(0.0, 1.0).all()

    def test_correlation_rejects_diffi(self, tmp_path, capsys):
        code, err = run_failing(capsys, "eval", "--mode", "correlation", "--explainer", "diffi", "--preset", "xaxis",
                                "--n-seeds", 1, *FAST, "--out", tmp_path)
        assert code == 1
        assert "error kind=explain" in err

    def test_timing(self, tmp_path):
        run_cli("eval", "--mode", "timing", "--sizes", "50", "--dims", "2", "--repeats", 1, "--n-trees", 5,
                "--out", tmp_path)
        table = pd.read_csv(tmp_path / "timing.csv")
        assert len(table) == 3
        assert not (tmp_path / "timing_summary.csv").exists()


class TestMisc:

    def test_version(self, capsys):
        assert run_cli("version") == 0
        assert capsys.readouterr().out.startswith("IsoXAI v")

    def test_no_command(self, capsys):
        code, err = run_failing(capsys)
        assert code == 2
        assert "error kind=usage" in err
