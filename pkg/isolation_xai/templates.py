

# ========================================
# Command summaries (printed to stdout)
# ========================================

GENERATE_SUMMARY_TEMPLATE = """[Dataset]
  Name: {name}
  Rows (n): {n}
  Features (p): {p}
  Contamination: {contamination}
  File: {path}"""

FIT_SUMMARY_TEMPLATE = """[Model]
  Model: {model}
  Trees: {n_trees}
  Subsample (psi): {psi}
  Max depth: {max_depth}
  Scenario: {scenario}
  Train rows: {train_n}
[Detection]
  Average precision: {avg_precision}
  Precision: {precision}
  ROC AUC: {roc_auc}
  Output: {out}"""

SCORE_SUMMARY_TEMPLATE = """[Scores]
  Model: {model}
  Rows scored: {n}
  Flagged as anomalous: {flagged}
  Output: {out}"""

GFI_SUMMARY_TEMPLATE = """[Global feature importance]
  Explainer: {explainer}
  Runs: {n_runs}
  Ranking: {ranking}
  Output: {out}"""

EXPLAIN_SUMMARY_TEMPLATE = """[Explanation]
  Mode: {mode}
  Files: {files}
  Output: {out}"""

EVAL_SUMMARY_TEMPLATE = """[Evaluation]
  Mode: {mode}
  Dataset: {dataset}
  Rows: {rows}
{summary}
  Output: {out}"""

# ========================================
# Errors (single line on stderr)
# ========================================

ERROR_LINE_TEMPLATE = 'error kind={kind} message="{message}"'

FINGERPRINT_WARNING_TEMPLATE = (
    "Model was fitted on data with fingerprint {expected}, scoring data has {actual}; "
    "make sure this is the intended dataset"
)


def format_error_line(kind: str, message: str) -> str:
    """One-line machine-parsable error; quotes and newlines in the message are escaped."""
    escaped = str(message).replace("\\", "\\\\").replace('"', '\\"').replace("\n", " ")
    return ERROR_LINE_TEMPLATE.format(kind=kind, message=escaped)
