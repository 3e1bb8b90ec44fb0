"""Problem and result files.

Problems and results are UTF-8 JSON.  Complex numbers are written as
two-element ``[re, im]`` arrays (plain numbers are accepted on input),
matrices as row-major arrays of rows, levels as arrays of label
strings.  Result files embed a SHA-256 digest of the problem file they
were computed from so ``verify`` can refuse mismatched pairs, and
contain no timestamps, which keeps reruns byte-identical.
"""

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from ._version import __version__
from .errors import SchemaError
from .gram import (
    MonomialBasisSpec,
    WeightFunction,
    build_explicit,
    fourier_gram,
    monomial_gram,
)
from .grading import GradedIndex

MODES = ("explicit", "fourier", "monomial")
METRICS = ("euclidean", "pseudo")
METHODS = ("graded", "gram-schmidt", "gram")

DEFAULT_DEGENERACY_TOL = 1e-10
DEFAULT_VERIFY_TOL = 1e-9


@dataclass
class Problem:
    mode: str
    metric: str
    source: object
    degeneracy_tol: float
    verify_tol: float
    digest_hex: str


@dataclass
class ResultData:
    metric: str
    method: str
    digest_hex: str
    verify_tol: float
    level_ids: list
    level_labels: list
    blocks: list
    signs: list | None
    report: dict


def _require(obj, field, kind, path):
    if not isinstance(obj, dict) or field not in obj:
        raise SchemaError(f"missing required field '{path}{field}'", field=path + field)
    value = obj[field]
    if kind is not None and not isinstance(value, kind):
        raise SchemaError(
            f"field '{path}{field}' has the wrong type", field=path + field
        )
    return value


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"field '{where}' must be a number", field=where)
    value = float(value)
    if not np.isfinite(value):
        raise SchemaError(f"field '{where}' must be finite", field=where)
    return value


def _entry_to_complex(entry, where):
    if isinstance(entry, (int, float)) and not isinstance(entry, bool):
        return complex(_number(entry, where), 0.0)
    if isinstance(entry, list) and len(entry) == 2:
        return complex(_number(entry[0], where), _number(entry[1], where))
    raise SchemaError(
        f"entry at '{where}' must be a number or an [re, im] pair", field=where
    )


def parse_matrix(obj, path, rows=None, cols=None):
    if not isinstance(obj, list) or not obj:
        raise SchemaError(f"field '{path}' must be a non-empty matrix", field=path)
    if rows is not None and len(obj) != rows:
        raise SchemaError(f"field '{path}' must have {rows} rows", field=path)
    width = None
    data = []
    for i, row in enumerate(obj):
        if not isinstance(row, list) or not row:
            raise SchemaError(f"row '{path}[{i}]' must be a non-empty array", field=path)
        if width is None:
            width = len(row)
            if cols is not None and width != cols:
                raise SchemaError(f"field '{path}' must have {cols} columns", field=path)
        elif len(row) != width:
            raise SchemaError(f"row '{path}[{i}]' has inconsistent length", field=path)
        data.append([_entry_to_complex(e, f"{path}[{i}][{j}]") for j, e in enumerate(row)])
    return np.asarray(data, dtype=np.complex128)


def matrix_to_json(matrix):
    matrix = np.asarray(matrix, dtype=np.complex128)
    return [
        [[float(z.real), float(z.imag)] for z in row]
        for row in matrix
    ]


def _parse_weight(obj, path):
    kind = _require(obj, "kind", str, path)
    if kind == "uniform":
        return WeightFunction.uniform()
    if kind == "samples":
        values = _require(obj, "values", list, path)
        numbers = [_number(v, f"{path}values[{i}]") for i, v in enumerate(values)]
        return WeightFunction.samples(numbers)
    raise SchemaError(
        f"field '{path}kind' must be 'uniform' or 'samples'", field=path + "kind"
    )


def _parse_levels(obj, path):
    if not isinstance(obj, list) or not obj:
        raise SchemaError(f"field '{path}' must be a non-empty array", field=path)
    levels = []
    for i, level in enumerate(obj):
        if not isinstance(level, list) or not level:
            raise SchemaError(
                f"level '{path}[{i}]' must be a non-empty array of labels", field=path
            )
        for label in level:
            if not isinstance(label, str):
                raise SchemaError(
                    f"labels in '{path}[{i}]' must be strings", field=path
                )
        levels.append(level)
    return levels


def _build_source(mode, block):
    if mode == "explicit":
        levels = _parse_levels(_require(block, "levels", list, "explicit."), "explicit.levels")
        index = GradedIndex(levels)
        gram = parse_matrix(
            _require(block, "gram", list, "explicit."),
            "explicit.gram",
            rows=index.total,
            cols=index.total,
        )
        return build_explicit(index, gram)
    if mode == "fourier":
        max_harmonic = _require(block, "max_harmonic", int, "fourier.")
        if isinstance(max_harmonic, bool) or max_harmonic < 0:
            raise SchemaError(
                "field 'fourier.max_harmonic' must be a non-negative integer",
                field="fourier.max_harmonic",
            )
        weight = _parse_weight(_require(block, "weight", dict, "fourier."), "fourier.weight.")
        return fourier_gram(max_harmonic, weight)
    dimension = _require(block, "dimension", int, "monomial.")
    max_degree = _require(block, "max_degree", int, "monomial.")
    box_obj = _require(block, "box", list, "monomial.")
    box = []
    for i, interval in enumerate(box_obj):
        if not isinstance(interval, list) or len(interval) != 2:
            raise SchemaError(
                f"interval 'monomial.box[{i}]' must be [lo, hi]", field="monomial.box"
            )
        box.append(
            (
                _number(interval[0], f"monomial.box[{i}][0]"),
                _number(interval[1], f"monomial.box[{i}][1]"),
            )
        )
    weight = WeightFunction.uniform()
    if "weight" in block:
        weight = _parse_weight(_require(block, "weight", dict, "monomial."), "monomial.weight.")
    order = block.get("quadrature_order")
    if order is not None and (isinstance(order, bool) or not isinstance(order, int)):
        raise SchemaError(
            "field 'monomial.quadrature_order' must be an integer",
            field="monomial.quadrature_order",
        )
    spec = MonomialBasisSpec(
        dimension=dimension,
        max_degree=max_degree,
        box=tuple(box),
        weight=weight,
        quadrature_order=order,
    )
    return monomial_gram(spec)


def _load_json(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        payload = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as err:
        line = getattr(err, "lineno", "?")
        col = getattr(err, "colno", "?")
        raise SchemaError(f"{path}: invalid JSON at line {line}, column {col}") from err
    if not isinstance(payload, dict):
        raise SchemaError(f"{path}: top level must be a JSON object")
    return payload, hashlib.sha256(raw).hexdigest()


def parse_problem(path):
    """Load and validate a problem file; builds the Gram source eagerly."""
    payload, digest = _load_json(path)
    mode = _require(payload, "mode", str, "")
    if mode not in MODES:
        raise SchemaError(f"field 'mode' must be one of {MODES}", field="mode")
    metric = _require(payload, "metric", str, "")
    if metric not in METRICS:
        raise SchemaError(f"field 'metric' must be one of {METRICS}", field="metric")
    for other in MODES:
        if other != mode and other in payload:
            raise SchemaError(
                f"exactly one mode block is allowed; found '{other}' next to "
                f"mode '{mode}'",
                field=other,
            )
    block = _require(payload, mode, dict, "")
    degeneracy_tol = DEFAULT_DEGENERACY_TOL
    verify_tol = DEFAULT_VERIFY_TOL
    if "tolerances" in payload:
        tols = _require(payload, "tolerances", dict, "")
        if "degeneracy_tol" in tols:
            degeneracy_tol = _number(tols["degeneracy_tol"], "tolerances.degeneracy_tol")
        if "verify_tol" in tols:
            verify_tol = _number(tols["verify_tol"], "tolerances.verify_tol")
        if degeneracy_tol <= 0 or verify_tol <= 0:
            raise SchemaError("tolerances must be positive", field="tolerances")
    source = _build_source(mode, block)
    return Problem(
        mode=mode,
        metric=metric,
        source=source,
        degeneracy_tol=degeneracy_tol,
        verify_tol=verify_tol,
        digest_hex=digest,
    )


def result_payload(problem, table, report, method):
    """Assemble the result-file dictionary (fixed key order)."""
    levels = []
    out_ids = table.output_level_ids()
    out_labels = table.output_labels()
    for pos, (lid, labels) in enumerate(zip(out_ids, out_labels)):
        entry = {
            "level": int(lid),
            "labels": list(labels),
            "coefficients": matrix_to_json(table.blocks[pos]),
            "normalizer": matrix_to_json(table.normalizers[pos]),
        }
        mixing = {}
        for (k, j), m in sorted(table.mixings.items()):
            if k == pos:
                mixing[str(int(out_ids[j]))] = matrix_to_json(m)
        if mixing:
            entry["mixing"] = mixing
        if table.signs is not None:
            entry["signs"] = [int(s) for s in table.signs[pos]]
        levels.append(entry)
    payload = {
        "tool": {"name": "gradedortho", "version": __version__},
        "input_digest": {"algorithm": "sha256", "hex": problem.digest_hex},
        "mode": problem.mode,
        "metric": problem.metric,
        "method": method,
        "tolerances": {
            "degeneracy_tol": problem.degeneracy_tol,
            "verify_tol": problem.verify_tol,
        },
        "input_levels": [
            {"level": int(lid), "labels": list(labels)}
            for lid, labels in zip(problem.source.index.level_ids, problem.source.index.levels)
        ],
        "levels": levels,
    }
    if getattr(table, "promotions", None):
        payload["promotions"] = [
            {"from_level": int(a), "label": lbl, "to_level": int(b)}
            for a, lbl, b in table.promotions
        ]
    payload["report"] = {
        "max_residual": report.max_residual,
        "structural_ok": report.structural_ok,
        "condition_numbers": [[int(lid), cond] for lid, cond in report.condition_numbers],
        "verify_tol": report.tolerance,
        "pass": report.passed,
    }
    return payload


def write_result(path, payload):
    text = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def parse_result(path):
    """Load a result file back into arrays for re-verification."""
    payload, _ = _load_json(path)
    digest_obj = _require(payload, "input_digest", dict, "")
    digest_hex = _require(digest_obj, "hex", str, "input_digest.")
    metric = _require(payload, "metric", str, "")
    method = _require(payload, "method", str, "")
    tols = _require(payload, "tolerances", dict, "")
    verify_tol = _number(_require(tols, "verify_tol", None, "tolerances."), "tolerances.verify_tol")
    levels_obj = _require(payload, "levels", list, "")
    if not levels_obj:
        raise SchemaError("result has no levels", field="levels")
    level_ids = []
    level_labels = []
    blocks = []
    signs = [] if metric == "pseudo" else None
    for i, entry in enumerate(levels_obj):
        lid = _require(entry, "level", int, f"levels[{i}].")
        labels = _require(entry, "labels", list, f"levels[{i}].")
        coeff = parse_matrix(
            _require(entry, "coefficients", list, f"levels[{i}]."),
            f"levels[{i}].coefficients",
        )
        level_ids.append(lid)
        level_labels.append([str(s) for s in labels])
        blocks.append(coeff)
        if signs is not None:
            sgn = _require(entry, "signs", list, f"levels[{i}].")
            signs.append(np.asarray([int(s) for s in sgn], dtype=np.int64))
    report = _require(payload, "report", dict, "")
    return ResultData(
        metric=metric,
        method=method,
        digest_hex=digest_hex,
        verify_tol=verify_tol,
        level_ids=level_ids,
        level_labels=level_labels,
        blocks=blocks,
        signs=signs,
        report=report,
    )
