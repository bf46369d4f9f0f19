"""JSON and CSV serialization for masks, families, signals and reports."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import jsonschema
import numpy as np

from .extension import MaskFamily
from .frames import StepFunction
from .masks import WalshPolynomial

__all__ = [
    "SchemaError",
    "MASK_SCHEMA",
    "FAMILY_SCHEMA",
    "SIGNAL_SCHEMA",
    "complex_pairs",
    "from_pairs",
    "mask_to_json",
    "mask_from_json",
    "family_to_json",
    "family_from_json",
    "signal_from_json",
    "load_json",
    "dumps",
    "write_csv",
]


class SchemaError(ValueError):
    """Input file does not match the expected layout."""


_PAIRS = {
    "type": "array",
    "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
}

MASK_SCHEMA = {
    "type": "object",
    "required": ["p", "n", "coeffs"],
    "properties": {
        "p": {"type": "integer", "minimum": 2},
        "n": {"type": "integer", "minimum": 0},
        "coeffs": _PAIRS,
    },
}

FAMILY_SCHEMA = {
    "type": "object",
    "required": ["p", "n", "r", "masks"],
    "properties": {
        "p": {"type": "integer", "minimum": 2},
        "n": {"type": "integer", "minimum": 1},
        "r": {"type": "integer", "minimum": 1},
        "masks": {"type": "array", "items": MASK_SCHEMA, "minItems": 2},
    },
}

SIGNAL_SCHEMA = {
    "type": "object",
    "required": ["p", "M", "N", "domain", "values"],
    "properties": {
        "p": {"type": "integer", "minimum": 2},
        "M": {"type": "integer"},
        "N": {"type": "integer"},
        "domain": {"enum": ["time", "frequency"]},
        "values": _PAIRS,
    },
}


def complex_pairs(values) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex).reshape(-1)]


def from_pairs(pairs) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs], dtype=complex)


def _validate(obj, schema, what: str) -> None:
    try:
        jsonschema.validate(obj, schema)
    except jsonschema.ValidationError as exc:
        loc = "/".join(str(x) for x in exc.absolute_path) or "<root>"
        raise SchemaError(f"{what}: {exc.message} (at {loc})") from None


def mask_to_json(m: WalshPolynomial) -> dict:
    return {"p": m.p, "n": m.n, "coeffs": complex_pairs(m.coeffs)}


def mask_from_json(obj) -> WalshPolynomial:
    _validate(obj, MASK_SCHEMA, "mask")
    p, n = obj["p"], obj["n"]
    if len(obj["coeffs"]) != p**n:
        raise SchemaError(f"mask: expected p^n = {p**n} coefficients, got {len(obj['coeffs'])}")
    return WalshPolynomial(p, n, from_pairs(obj["coeffs"]))


def family_to_json(fam: MaskFamily) -> dict:
    return {"p": fam.p, "n": fam.n, "r": fam.r, "masks": [mask_to_json(m) for m in fam.masks]}


def family_from_json(obj) -> MaskFamily:
    _validate(obj, FAMILY_SCHEMA, "family")
    masks = [mask_from_json(m) for m in obj["masks"]]
    if len(masks) != obj["r"] + 1:
        raise SchemaError(f"family: expected r + 1 = {obj['r'] + 1} masks, got {len(masks)}")
    for m in masks:
        if (m.p, m.n) != (obj["p"], obj["n"]):
            raise SchemaError("family: every mask must share the family's p and n")
    return MaskFamily(obj["p"], obj["n"], obj["r"], tuple(masks))


def signal_from_json(obj) -> StepFunction:
    _validate(obj, SIGNAL_SCHEMA, "signal")
    p, M, N = obj["p"], obj["M"], obj["N"]
    if M + N < 0:
        raise SchemaError(f"signal: need M + N >= 0, got M={M}, N={N}")
    if len(obj["values"]) != p ** (M + N):
        raise SchemaError(f"signal: expected p^(M+N) = {p ** (M + N)} values, got {len(obj['values'])}")
    return StepFunction(obj["domain"], p, M, N, from_pairs(obj["values"]))


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def dumps(obj) -> str:
    # float repr is the shortest string that round-trips, so output is lossless
    return json.dumps(obj, indent=2, sort_keys=True)


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
