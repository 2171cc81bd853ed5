import os
import sys
import time
import argparse
import argcomplete
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

# Add current directory to Python path
current_dir = Path(__file__).parent
sys.path.insert(0, str(current_dir))

import run_setting
from isolation_xai.config.settings import (
    default_eta,
    default_gfi_runs,
    default_label_column,
    default_n_trees,
    default_scoremap_padding,
    default_scoremap_resolution,
    default_subsample,
    feature_selection_refit,
    parallel_num,
    signed_normals,
)
from isolation_xai.data import (
    Dataset,
    SyntheticSpec,
    generate_dataset,
    load_csv,
    load_relevance_csv,
    make_preset,
    parse_scenario,
    relevance_for_preset,
    resolve_training,
    validate_relevance,
    write_csv,
)
from isolation_xai.errors import ConfigError, ExplainError, IsoXaiError
from isolation_xai.evaluation import (
    EvaluationReport,
    auc_fs_evaluation,
    contamination_sweep,
    correlation_evaluation,
    detection_report,
    eta_sweep,
    ndcg_evaluation,
    summarise,
    timing_benchmark,
)
from isolation_xai.explain import (
    EXPLAINER_EXIFFI,
    complete_scoremap,
    depth_profile,
    exiffi_importances,
    gfi_over_runs,
    parse_explainer,
    scoremap_grid,
)
from isolation_xai.forest import (
    ForestConfig,
    anomaly_scores,
    fit,
    labels_from_scores,
    load_model,
    parse_model,
    save_model,
)
from isolation_xai.templates import (
    EVAL_SUMMARY_TEMPLATE,
    EXPLAIN_SUMMARY_TEMPLATE,
    FINGERPRINT_WARNING_TEMPLATE,
    FIT_SUMMARY_TEMPLATE,
    GENERATE_SUMMARY_TEMPLATE,
    GFI_SUMMARY_TEMPLATE,
    SCORE_SUMMARY_TEMPLATE,
    format_error_line,
)
from isolation_xai.utils.lock_manager import run_directory_lock
from isolation_xai.utils.log_setup import configure_logging
from isolation_xai.utils.report_writer import write_json, write_table
from isolation_xai.utils.summation import safe_divide

logger = logging.getLogger(__name__)

PROG_NAME = 'IsoXAI'

# ==============================================================================
# Parameter defaults per command (flags > --config file > these)
# ==============================================================================
COMMON_DEFAULTS = {"seed": 0, "out": None, "threads": parallel_num}

DATA_DEFAULTS = {"dataset": None, "preset": None, "data_seed": 0, "label_column": default_label_column}

MODEL_DEFAULTS = {
    "model": "eif+",
    "n_trees": default_n_trees,
    "subsample": default_subsample,
    "max_depth": None,
    "eta": default_eta,
    "dof": None,
}

COMMAND_DEFAULTS = {
    "generate": {
        **COMMON_DEFAULTS,
        "preset": None,
        "n_inliers": 1000,
        "n_outliers": 100,
        "r": 5.0,
        "d": 5.0,
        "u_raw": None,
        "value_min": 0.0,
        "value_max": 5.0,
        "label_column": default_label_column,
    },
    "fit": {**COMMON_DEFAULTS, **DATA_DEFAULTS, **MODEL_DEFAULTS, "scenario": "I", "contamination": None},
    "score": {**COMMON_DEFAULTS, **DATA_DEFAULTS, "model_file": None, "contamination": None},
    "explain": {
        **COMMON_DEFAULTS,
        **DATA_DEFAULTS,
        **MODEL_DEFAULTS,
        "model_file": None,
        "mode": "gfi",
        "explainer": "exiffi",
        "runs": default_gfi_runs,
        "contamination": None,
        "scenario": "I",
        "row": None,
        "all_rows": False,
        "features": "0,1",
        "resolution": default_scoremap_resolution,
        "padding": default_scoremap_padding,
        "depth_weighted": False,
        "signed_normals": signed_normals,
    },
    "eval": {
        **COMMON_DEFAULTS,
        **DATA_DEFAULTS,
        **MODEL_DEFAULTS,
        "mode": "sweep",
        "scenario": "II",
        "levels": "0,0.02,0.04,0.06,0.08",
        "models": "if,eif,eif+",
        "n_seeds": 10,
        "explainer": "exiffi",
        "evaluator": "eif+",
        "refit": feature_selection_refit,
        "relevance": None,
        "contamination": None,
        "sizes": "1000,2000,4000",
        "dims": "6",
        "repeats": 3,
        "etas": None,
    },
}

EXPLAIN_MODES = ('gfi', 'lfi', 'scoremap', 'depth-profile')
EVAL_MODES = ('sweep', 'feature-selection', 'ndcg', 'correlation', 'timing', 'eta-sweep')

# Read version from pyproject.toml
def get_version():
    """Get the version from pyproject.toml."""
    try:
        pyproject_path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "pyproject.toml")

        if not os.path.exists(pyproject_path):
            return "unknown"

        # Simple parsing for version line
        with open(pyproject_path, "r", encoding="utf-8") as f:
            for line in f:
                if line.strip().startswith("version = "):
                    return line.split("=")[-1].strip().strip('"')
        return "unknown"
    except OSError as e:
        logger.error(f"Failed to read version from pyproject.toml: {e}")
        return "unknown"

def parse_args(args=None):
    """Parse command line arguments.

    Args:
        args (list, optional): List of arguments to parse. If None, uses sys.argv[1:].

    Returns:
        argparse.Namespace: Parsed arguments.
    """
    parser = argparse.ArgumentParser(
        prog=PROG_NAME,
        description='Isolation forests (IF, EIF, EIF+) with ExIFFI/DIFFI explanations and evaluation'
    )

    # Add version option
    parser.add_argument('-v', '--version', action='store_true',
                      help='Show program version')

    # Create subparsers for different commands
    subparsers = parser.add_subparsers(dest='command', required=False,
                                      help='Available commands')

    # Flags shared by every command; None means "not given" so config files can fill in
    def add_common_args(parser):
        parser.add_argument('--seed', type=int, default=None, help='Master seed (default: 0)')
        parser.add_argument('--out', default=None, help='Run output directory')
        parser.add_argument('--config', default=None, help='JSON run configuration (e.g. a resolved_config.json)')
        parser.add_argument('--threads', type=int, default=None,
                          help=f'Worker threads (default: {parallel_num})')
        parser.add_argument('--force', action='store_true', help='Overwrite existing outputs')

    def add_data_args(parser):
        parser.add_argument('--dataset', default=None, help='CSV dataset path')
        parser.add_argument('--preset', default=None, help='Synthetic preset name instead of a CSV file')
        parser.add_argument('--data-seed', type=int, default=None, help='Seed of the preset generator (default: 0)')
        parser.add_argument('--label-column', default=None,
                          help=f'Label column of the CSV (default: {default_label_column})')

    def add_model_args(parser):
        parser.add_argument('--model', default=None, help='Model: if, eif or eif+ (default: eif+)')
        parser.add_argument('--n-trees', type=int, default=None, help=f'Trees per forest (default: {default_n_trees})')
        parser.add_argument('--subsample', type=int, default=None, help=f'Subsample size psi (default: {default_subsample})')
        parser.add_argument('--max-depth', type=int, default=None, help='Tree depth limit (default: ceil(log2 psi))')
        parser.add_argument('--eta', type=float, default=None, help=f'EIF+ intercept spread (default: {default_eta})')
        parser.add_argument('--dof', type=int, default=None, help='Nonzero normal components for EIF/EIF+ (default: p)')

    def add_contamination_arg(parser):
        parser.add_argument('--contamination', type=float, default=None,
                          help='Threshold fraction (default: true contamination of labeled data)')

    # generate command
    generate_parser = subparsers.add_parser('generate', help='Write a synthetic dataset as CSV')
    add_common_args(generate_parser)
    generate_parser.add_argument('--preset', default=None, help='xaxis, bisect, bisect3d, bisect3d_skewed, bisect6d, bimodal')
    generate_parser.add_argument('--n-inliers', type=int, default=None)
    generate_parser.add_argument('--n-outliers', type=int, default=None)
    generate_parser.add_argument('--r', type=float, default=None, help='Inlier ball radius')
    generate_parser.add_argument('--d', type=float, default=None, help='Outlier offset distance')
    generate_parser.add_argument('--u-raw', default=None, help='Comma-separated outlier direction weights')
    generate_parser.add_argument('--value-min', type=float, default=None)
    generate_parser.add_argument('--value-max', type=float, default=None)
    generate_parser.add_argument('--label-column', default=None)

    # fit command
    fit_parser = subparsers.add_parser('fit', help='Fit a forest, save it and report detection metrics')
    add_common_args(fit_parser)
    add_data_args(fit_parser)
    add_model_args(fit_parser)
    fit_parser.add_argument('--scenario', default=None, help='I, II or a train contamination fraction (default: I)')
    add_contamination_arg(fit_parser)

    # score command
    score_parser = subparsers.add_parser('score', help='Score a dataset with a saved model')
    add_common_args(score_parser)
    add_data_args(score_parser)
    score_parser.add_argument('--model-file', default=None, help='Saved model.json')
    add_contamination_arg(score_parser)

    # explain command
    explain_parser = subparsers.add_parser('explain', help='Compute feature importances and scoremaps')
    add_common_args(explain_parser)
    add_data_args(explain_parser)
    add_model_args(explain_parser)
    explain_parser.add_argument('--model-file', default=None, help='Saved model.json (otherwise fit from model flags)')
    explain_parser.add_argument('--mode', default=None, choices=EXPLAIN_MODES)
    explain_parser.add_argument('--explainer', default=None, choices=('exiffi', 'diffi'))
    explain_parser.add_argument('--runs', type=int, default=None, help=f'GFI refits (default: {default_gfi_runs})')
    explain_parser.add_argument('--scenario', default=None, help='Training scenario of refits (default: I)')
    explain_parser.add_argument('--row', type=int, default=None, help='Row index for --mode lfi')
    explain_parser.add_argument('--all', dest='all_rows', action='store_true', default=None,
                              help='LFI for every row')
    explain_parser.add_argument('--features', default=None, help='Scoremap feature pair "i,j" or "all"')
    explain_parser.add_argument('--resolution', type=int, default=None)
    explain_parser.add_argument('--padding', type=float, default=None)
    explain_parser.add_argument('--depth-weighted', action='store_true', default=None,
                              help='Divide node importance by depth + 1 in the depth profile')
    explain_parser.add_argument('--signed-normals', action=argparse.BooleanOptionalAction, default=None,
                              help='Accumulate signed normals in V')
    add_contamination_arg(explain_parser)

    # eval command
    eval_parser = subparsers.add_parser('eval', help='Run evaluation protocols')
    add_common_args(eval_parser)
    add_data_args(eval_parser)
    add_model_args(eval_parser)
    eval_parser.add_argument('--mode', default=None, choices=EVAL_MODES)
    eval_parser.add_argument('--scenario', default=None, help='I or II (default: II)')
    eval_parser.add_argument('--levels', default=None, help='Comma-separated train contamination levels')
    eval_parser.add_argument('--models', default=None, help='Comma-separated models for sweeps')
    eval_parser.add_argument('--n-seeds', type=int, default=None)
    eval_parser.add_argument('--explainer', default=None, choices=('exiffi', 'diffi'))
    eval_parser.add_argument('--evaluator', default=None, help='Evaluator model of the feature-selection task')
    eval_parser.add_argument('--refit', action=argparse.BooleanOptionalAction, default=None,
                           help='Refit the evaluator at every feature-selection step')
    eval_parser.add_argument('--relevance', default=None, help='Relevance CSV for non-preset data')
    eval_parser.add_argument('--sizes', default=None, help='Comma-separated n values for timing')
    eval_parser.add_argument('--dims', default=None, help='Comma-separated p values for timing')
    eval_parser.add_argument('--repeats', type=int, default=None)
    eval_parser.add_argument('--etas', default=None, help='Comma-separated eta values for the eta sweep')
    add_contamination_arg(eval_parser)

    # version command
    subparsers.add_parser('version', help='Show program version')

    argcomplete.autocomplete(parser)
    return parser.parse_args(args)

# ==============================================================================
# Parameter helpers
# ==============================================================================
def resolve_run(args) -> Dict[str, Any]:
    """Resolve the parameters of a command and check the output directory."""
    defaults = COMMAND_DEFAULTS[args.command]
    flags = {key: getattr(args, key, None) for key in defaults}
    file_config = run_setting.read_config_file(args.config)
    params = run_setting.resolve_parameters(args.command, flags, file_config, defaults)
    if not params.get("out"):
        raise ConfigError("--out is required (directory for the run outputs)")
    return params

def parse_list(value, cast=float) -> List:
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        items = value
    else:
        items = [item.strip() for item in str(value).split(',') if item.strip()]
    try:
        return [cast(item) for item in items]
    except ValueError as e:
        raise ConfigError(f"Cannot parse list {value!r}: {e}") from e

def forest_config(params: Dict[str, Any], model: Optional[str] = None) -> ForestConfig:
    return ForestConfig(
        model=model or params["model"],
        n_trees=params["n_trees"],
        subsample=params["subsample"],
        max_depth=params["max_depth"],
        eta=params["eta"],
        dof=params["dof"],
        seed=params["seed"],
    )

def load_dataset(params: Dict[str, Any]) -> Dataset:
    if params.get("preset"):
        return make_preset(params["preset"], params["data_seed"])
    if params.get("dataset"):
        return load_csv(params["dataset"], params["label_column"], require_label=False)
    raise ConfigError("Give a dataset with --dataset <csv> or --preset <name>")

def threshold_for(params: Dict[str, Any], ds: Dataset) -> float:
    """User contamination if given, else the true contamination of labeled data."""
    if params.get("contamination") is not None:
        return float(params["contamination"])
    if ds.labels is not None and 0 < ds.contamination < 1:
        return ds.contamination
    raise ConfigError(f"--contamination is required: '{ds.name}' has no usable labels")

def warn_on_fingerprint(forest, ds: Dataset) -> None:
    actual = ds.fingerprint()
    if forest.fitted_on and forest.fitted_on != actual:
        logger.warning(FINGERPRINT_WARNING_TEMPLATE.format(expected=forest.fitted_on[:12], actual=actual[:12]))

def require_exiffi(params: Dict[str, Any], mode: str) -> None:
    explainer = parse_explainer(params["explainer"])
    if explainer != EXPLAINER_EXIFFI:
        raise ExplainError(f"Mode '{mode}' uses ExIFFI only, got --explainer {explainer}")

def fmt(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.4f}"

# ==============================================================================
# Commands
# ==============================================================================
def run_generate(params: Dict[str, Any], force: bool) -> None:
    """Write a preset or custom synthetic dataset."""
    out = params["out"]
    run_setting.check_outputs_writable(out, [run_setting.RESOLVED_CONFIG_FILENAME, "dataset.csv"], force)

    if params["preset"]:
        ds = make_preset(params["preset"], params["seed"])
    else:
        u_raw = parse_list(params["u_raw"])
        if not u_raw:
            raise ConfigError("Give --preset or --u-raw for a custom dataset")
        synth = SyntheticSpec(
            n_inliers=params["n_inliers"],
            n_outliers=params["n_outliers"],
            p=len(u_raw),
            r=params["r"],
            d=params["d"],
            u_raw=tuple(u_raw),
            value_range=(params["value_min"], params["value_max"]),
            seed=params["seed"],
        )
        ds = generate_dataset(synth, name="custom")

    with run_directory_lock(out):
        path = os.path.join(out, "dataset.csv")
        write_csv(ds, path, params["label_column"])
        run_setting.write_resolved_config(out, params)

    print(GENERATE_SUMMARY_TEMPLATE.format(name=ds.name, n=ds.n, p=ds.p, contamination=fmt(ds.contamination), path=path))

def run_fit(params: Dict[str, Any], force: bool) -> None:
    """Fit a forest on the scenario's train set and report metrics on the full dataset."""
    out = params["out"]
    outputs = [run_setting.RESOLVED_CONFIG_FILENAME, "model.json", "metrics.json", "timings.json"]
    run_setting.check_outputs_writable(out, outputs, force)

    ds = load_dataset(params)
    config = forest_config(params)
    scenario = parse_scenario(params["scenario"])
    train, evaluation = resolve_training(ds, scenario, params["seed"])

    start = time.perf_counter()
    forest = fit(train, config, max_concurrent=params["threads"])
    fit_seconds = time.perf_counter() - start

    report = EvaluationReport(dataset=ds.name, scenario=scenario.tag)
    metrics = {"avg_precision": None, "precision": None, "roc_auc": None}
    start = time.perf_counter()
    if evaluation.labels is not None and 0 < evaluation.contamination < 1:
        metrics = detection_report(forest, evaluation, params["contamination"])
    else:
        anomaly_scores(forest, evaluation.features)
        logger.warning(f"'{ds.name}' has no usable labels, skipping detection metrics")
    predict_seconds = time.perf_counter() - start
    report.add_model(config.model, {k: v for k, v in metrics.items() if v is not None},
                     {"fit_seconds": fit_seconds, "predict_seconds": predict_seconds})

    with run_directory_lock(out):
        save_model(forest, os.path.join(out, "model.json"))
        write_json(report.metrics_dict(), os.path.join(out, "metrics.json"))
        write_json(report.timings_dict(), os.path.join(out, "timings.json"))
        run_setting.write_resolved_config(out, params)

    print(FIT_SUMMARY_TEMPLATE.format(
        model=config.model, n_trees=config.n_trees, psi=forest.psi, max_depth=forest.max_depth,
        scenario=scenario.tag, train_n=train.n, avg_precision=fmt(metrics["avg_precision"]),
        precision=fmt(metrics["precision"]), roc_auc=fmt(metrics["roc_auc"]), out=out,
    ))

def run_score(params: Dict[str, Any], force: bool) -> None:
    """Write per-row anomaly scores (and predicted labels when a threshold is known)."""
    out = params["out"]
    outputs = [run_setting.RESOLVED_CONFIG_FILENAME, "scores.csv", "scores.json"]
    run_setting.check_outputs_writable(out, outputs, force)
    if not params["model_file"]:
        raise ConfigError("--model-file is required for score")

    forest = load_model(params["model_file"])
    ds = load_dataset(params)
    warn_on_fingerprint(forest, ds)

    scores = anomaly_scores(forest, ds.features)
    frame = pd.DataFrame({"row": np.arange(ds.n), "score": scores})
    flagged = None
    try:
        contamination = threshold_for(params, ds)
    except ConfigError:
        logger.warning("No contamination available, writing scores without predicted labels")
    else:
        frame["predicted"] = labels_from_scores(scores, contamination)
        flagged = int(frame["predicted"].sum())
    if ds.labels is not None:
        frame["label"] = ds.labels

    with run_directory_lock(out):
        write_table(frame, os.path.join(out, "scores"))
        run_setting.write_resolved_config(out, params)

    print(SCORE_SUMMARY_TEMPLATE.format(model=forest.model, n=ds.n, flagged="n/a" if flagged is None else flagged, out=out))

def _explain_forest(params: Dict[str, Any], ds: Dataset):
    if params["model_file"]:
        forest = load_model(params["model_file"])
        warn_on_fingerprint(forest, ds)
        return forest
    train, _ = resolve_training(ds, params["scenario"], params["seed"])
    return fit(train, forest_config(params), max_concurrent=params["threads"])

def run_explain(params: Dict[str, Any], force: bool) -> None:
    """GFI reports, LFI vectors, scoremaps or the depth profile."""
    out = params["out"]
    mode = params["mode"]
    if mode not in EXPLAIN_MODES:
        raise ConfigError(f"Unknown explain mode '{mode}' (expected one of: {', '.join(EXPLAIN_MODES)})")
    ds = load_dataset(params)
    written: List[str] = []

    if mode == "gfi":
        names = ["gfi_report.json", "gfi_summary.csv", "gfi_histogram.csv"]
        run_setting.check_outputs_writable(out, names + [run_setting.RESOLVED_CONFIG_FILENAME], force)
        explainer = parse_explainer(params["explainer"])
        config = load_model(params["model_file"]).config if params["model_file"] else forest_config(params)
        report = gfi_over_runs(
            ds, config, explainer, params["runs"], threshold_for(params, ds), params["seed"],
            scenario=params["scenario"], signed=params["signed_normals"], max_concurrent=params["threads"],
        )
        with run_directory_lock(out):
            write_json({"explainer": explainer, "model": config.model, **report.to_dict()},
                       os.path.join(out, "gfi_report.json"))
            write_table(report.summary_frame(), os.path.join(out, "gfi_summary"))
            write_table(report.histogram_frame(), os.path.join(out, "gfi_histogram"))
            run_setting.write_resolved_config(out, params)
        print(GFI_SUMMARY_TEMPLATE.format(explainer=explainer, n_runs=report.n_runs,
                                          ranking=report.ranking().tolist(), out=out))
        return

    require_exiffi(params, mode)
    run_setting.check_outputs_writable(out, [run_setting.RESOLVED_CONFIG_FILENAME], force)
    forest = _explain_forest(params, ds)

    with run_directory_lock(out):
        if mode == "lfi":
            I, V = exiffi_importances(forest, ds.features, params["signed_normals"])
            lfi = safe_divide(I, V)
            scores = anomaly_scores(forest, ds.features)
            if params["all_rows"]:
                frame = pd.DataFrame(lfi, columns=ds.feature_names)
                frame.insert(0, "row", np.arange(ds.n))
                frame["score"] = scores
                write_table(frame, os.path.join(out, "lfi"))
                written.append("lfi.csv")
            else:
                row = params["row"]
                if row is None or not 0 <= row < ds.n:
                    raise ConfigError(f"--mode lfi needs --all or --row in [0, {ds.n - 1}], got {row}")
                write_json({"row": row, "feature_names": ds.feature_names, "lfi": lfi[row], "I": I[row],
                            "V": V[row], "score": scores[row]}, os.path.join(out, "lfi_row.json"))
                written.append("lfi_row.json")
        elif mode == "scoremap":
            if str(params["features"]).strip().lower() == "all":
                grids = complete_scoremap(forest, ds, params["resolution"], params["padding"])
            else:
                pair = parse_list(params["features"], int)
                if len(pair) != 2:
                    raise ConfigError(f"--features needs two indices 'i,j' or 'all', got {params['features']!r}")
                grids = [scoremap_grid(forest, ds, pair[0], pair[1], params["resolution"], params["padding"])]
            for grid in grids:
                base = f"scoremap_{grid.feat_i}_{grid.feat_j}"
                write_table(grid.to_frame(), os.path.join(out, base))
                written.append(f"{base}.csv")
        else:
            profile = depth_profile(forest, ds, depth_weighted=bool(params["depth_weighted"]))
            write_table(pd.DataFrame(profile, columns=["depth", "mean"]), os.path.join(out, "depth_profile"))
            written.append("depth_profile.csv")
        run_setting.write_resolved_config(out, params)

    print(EXPLAIN_SUMMARY_TEMPLATE.format(mode=mode, files=", ".join(written), out=out))

def _relevance_for(params: Dict[str, Any], ds: Dataset) -> np.ndarray:
    if params["relevance"]:
        return validate_relevance(load_relevance_csv(params["relevance"]), ds.p)
    if params["preset"]:
        return validate_relevance(relevance_for_preset(params["preset"]), ds.p)
    raise ConfigError("NDCG needs a preset dataset or --relevance <csv>")

def run_eval(params: Dict[str, Any], force: bool) -> None:
    """Sweeps, proxy tasks, NDCG, correlation and timing tables."""
    out = params["out"]
    mode = params["mode"]
    if mode not in EVAL_MODES:
        raise ConfigError(f"Unknown eval mode '{mode}' (expected one of: {', '.join(EVAL_MODES)})")
    base = mode.replace("-", "_")
    run_setting.check_outputs_writable(out, [run_setting.RESOLVED_CONFIG_FILENAME, f"{base}.csv"], force)

    threads = params["threads"]
    n_seeds = params["n_seeds"]
    extra_json: Dict[str, Any] = {}

    if mode == "timing":
        dataset_name = "gaussian"
        table = timing_benchmark(parse_list(params["sizes"], int), parse_list(params["dims"], int),
                                 forest_config(params), repeats=params["repeats"], base_seed=params["seed"],
                                 max_concurrent=threads)
        summary = None
    else:
        ds = load_dataset(params)
        dataset_name = ds.name
        config = forest_config(params)
        if mode == "sweep":
            configs = [forest_config(params, parse_model(m)) for m in parse_list(params["models"], str)]
            table = contamination_sweep(ds, configs, parse_list(params["levels"]), n_seeds,
                                        params["seed"], threads)
        elif mode == "eta-sweep":
            etas = parse_list(params["etas"]) if params["etas"] else None
            table = eta_sweep(ds, config, etas, n_seeds, params["scenario"], params["seed"], threads)
        elif mode == "feature-selection":
            evaluator = forest_config(params, parse_model(params["evaluator"]))
            table, curves = auc_fs_evaluation(
                ds, config, evaluator, params["explainer"], n_seeds, params["scenario"],
                params["contamination"], params["seed"], params["refit"], threads,
            )
            extra_json["feature_selection_curves.json"] = {str(seed): data for seed, data in curves.items()}
        elif mode == "ndcg":
            table = ndcg_evaluation(ds, _relevance_for(params, ds), config, params["explainer"], n_seeds,
                                    params["scenario"], params["contamination"], params["seed"], threads)
        else:
            require_exiffi(params, mode)
            table = correlation_evaluation(ds, config, n_seeds, params["scenario"], params["seed"], threads)
        summary = summarise(table)

    with run_directory_lock(out):
        write_table(table, os.path.join(out, base))
        if summary is not None:
            write_table(summary, os.path.join(out, f"{base}_summary"))
        for name, data in extra_json.items():
            write_json(data, os.path.join(out, name))
        run_setting.write_resolved_config(out, params)

    if summary is not None:
        lines = [f"  {row.model} level={row.level} {row.metric}: {row.mean:.4f} +- {row.std:.4f}"
                 for row in summary.itertuples()]
    else:
        lines = [f"  n={row.n} p={row.p} {row.phase}: {row.seconds:.4f}s" for row in table.itertuples()]
    print(EVAL_SUMMARY_TEMPLATE.format(mode=mode, dataset=dataset_name, rows=len(table),
                                       summary="\n".join(lines), out=out))

COMMANDS = {
    'generate': run_generate,
    'fit': run_fit,
    'score': run_score,
    'explain': run_explain,
    'eval': run_eval,
}

def main(argv=None):
    """Main entry point."""
    args = parse_args(argv)
    configure_logging()

    # Handle version option and command
    if args.version or args.command == 'version':
        version = get_version()
        print(f"{PROG_NAME} v{version}")
        return 0

    if not args.command:
        print(format_error_line("usage", "No command specified. Use -v/--version or one of: "
                                + ", ".join(COMMANDS)), file=sys.stderr)
        sys.exit(2)

    logger.info(f"Executing command: {args.command}")
    logger.debug(f"Parsed arguments: {args}")

    try:
        params = resolve_run(args)
        COMMANDS[args.command](params, args.force)
    except IsoXaiError as e:
        logger.debug("Exception details:", exc_info=True)
        print(format_error_line(e.kind, e.message), file=sys.stderr)
        sys.exit(1)
    except OSError as e:
        logger.debug("Exception details:", exc_info=True)
        print(format_error_line("io", str(e)), file=sys.stderr)
        sys.exit(1)
    except Exception as e:
        logger.error(f"An error occurred: {e}")
        logger.exception("Exception details:")
        print(format_error_line("internal", str(e)), file=sys.stderr)
        sys.exit(1)
    return 0

if __name__ == "__main__":
    main()
