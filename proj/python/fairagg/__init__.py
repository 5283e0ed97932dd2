"""Accuracy and fairness evaluation of probabilistic prediction algorithms.

The compiled extension exchanges structured values as JSON documents; the
helpers here accept and return plain dicts and lists instead. Document
shapes match the library's canonical encodings: a prediction stream is
``{"space": {"labels": [...]}, "records": [...]}``, a group partition is
``{"group_of": {...}, "groups": [a, b], "positive_label": ...}``.
"""

import json as _json

from ._fairagg import (
    DomainError,
    EmptyPositiveClassError,
    Error,
    RowError,
    SchemaError,
    UnsupportedMeasureError,
    UtilityUndefinedError,
    ZeroProbabilityError,
    check_propriety,
    compas_decile_probability,
    score_distribution,
)
from . import _fairagg as _core

__all__ = [
    "DomainError",
    "EmptyPositiveClassError",
    "Error",
    "RowError",
    "SchemaError",
    "UnsupportedMeasureError",
    "UtilityUndefinedError",
    "ZeroProbabilityError",
    "aggregation_spec",
    "audit_file",
    "audit_text",
    "check_propriety",
    "compas_decile_probability",
    "eq_opp",
    "estimated_accuracy",
    "group_fnr",
    "measure_vector",
    "overall",
    "score_distribution",
    "simplex_sweep",
]


def measure_vector(values, accuracy_count=None):
    """Measure-vector document from an ordered ``{id: value}`` mapping.

    ``accuracy_count`` defaults to all entries; the remainder are counted as
    fairness measures.
    """
    entries = [{"measure_id": key, "value": float(v)} for key, v in values.items()]
    if accuracy_count is None:
        accuracy_count = len(entries)
    return {
        "entries": entries,
        "accuracy_count": accuracy_count,
        "fairness_count": len(entries) - accuracy_count,
    }


def aggregation_spec(alpha, weights, utilities, simplex_mode=False):
    """Aggregation-spec document. ``utilities`` maps each measure id to a
    utility name ("linear", "reciprocal-abs", "log-reciprocal-abs") or to a
    full ``{"kind": ...}`` document."""
    utility_docs = {
        key: u if isinstance(u, dict) else {"kind": u} for key, u in utilities.items()
    }
    return {
        "alpha": alpha,
        "weights": dict(weights),
        "utilities": utility_docs,
        "simplex_mode": simplex_mode,
    }


def estimated_accuracy(stream, estimator="compas-decile", rule="brier", log_floor=False):
    """Uniform-weight estimated accuracy of a prediction-stream document."""
    return _core.estimated_accuracy_json(_json.dumps(stream), estimator, rule, log_floor)


def group_fnr(stream, partition, group, estimator="compas-decile"):
    """One group's false negative rate."""
    return _core.group_fnr_json(
        _json.dumps(stream), _json.dumps(partition), estimator, group
    )


def eq_opp(stream, partition, estimator="compas-decile"):
    """Negated absolute gap between the two groups' false negative rates."""
    return _core.eq_opp_json(_json.dumps(stream), _json.dumps(partition), estimator)


def overall(values, spec):
    """Alpha plus the weighted sum of per-measure utilities."""
    return _core.overall_json(_json.dumps(values), _json.dumps(spec))


def simplex_sweep(values, utilities, resolution=100, with_grid=False):
    """Overall across the positive weight simplex.

    Returns a summary dict; with ``with_grid`` it also carries the full grid
    as CSV text and (for three measures) a ternary-plot SVG.
    """
    utility_docs = {
        key: u if isinstance(u, dict) else {"kind": u} for key, u in utilities.items()
    }
    return _json.loads(
        _core.simplex_sweep_json(
            _json.dumps(values), _json.dumps(utility_docs), resolution, with_grid
        )
    )


def audit_text(csv_text, filter="none", skip_bad_rows=False, resolution=100):
    """Full audit of recidivism CSV text; returns the report as a dict."""
    return _json.loads(
        _core.audit_text_json(csv_text, filter, skip_bad_rows, resolution)
    )


def audit_file(path, filter="none", skip_bad_rows=False, out_dir="", write_svg=True,
               resolution=100):
    """Full audit of a recidivism CSV file; returns the report as a dict."""
    return _json.loads(
        _core.audit_file_json(
            str(path), filter, skip_bad_rows, str(out_dir), write_svg, resolution
        )
    )
