"""Strict JSON encodings for operators, channels, generators and reports.

Decoders reject unknown or missing keys and inconsistent dimensions.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import Channel
from .errors import FormatError
from .lindblad import LindbladGenerator


def _check_keys(obj, required: set, optional: set = frozenset(), what: str = "object"):
    if not isinstance(obj, dict):
        raise FormatError(f"{what}: expected a JSON object")
    keys = set(obj)
    missing = required - keys
    unknown = keys - required - set(optional)
    if missing:
        raise FormatError(f"{what}: missing keys {sorted(missing)}")
    if unknown:
        raise FormatError(f"{what}: unknown keys {sorted(unknown)}")


def _dim(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise FormatError(f"{what}: dim must be a positive integer")
    return value


def operator_to_json(a) -> dict:
    a = np.asarray(a, dtype=complex)
    return {"dim": int(a.shape[0]),
            "re": [float(x) for x in a.real.ravel()],
            "im": [float(x) for x in a.imag.ravel()]}


def operator_from_json(obj, dim: int | None = None) -> np.ndarray:
    _check_keys(obj, {"dim", "re", "im"}, what="operator")
    d = _dim(obj["dim"], "operator")
    if dim is not None and d != dim:
        raise FormatError(f"operator: dim {d} where {dim} expected")
    parts = []
    for key in ("re", "im"):
        vals = obj[key]
        if not isinstance(vals, list) or len(vals) != d * d:
            raise FormatError(f"operator: '{key}' must list {d * d} numbers")
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in vals):
            raise FormatError(f"operator: '{key}' holds a non-number")
        parts.append(np.array(vals, dtype=float).reshape(d, d))
    return parts[0] + 1j * parts[1]


def channel_to_json(c: Channel) -> dict:
    return {"dim": c.dim, "label": c.label, "kraus": [operator_to_json(k) for k in c.kraus]}


def channel_from_json(obj) -> Channel:
    _check_keys(obj, {"dim", "kraus"}, {"label"}, what="channel")
    d = _dim(obj["dim"], "channel")
    label = obj.get("label", "")
    if not isinstance(label, str):
        raise FormatError("channel: label must be a string")
    if not isinstance(obj["kraus"], list) or not obj["kraus"]:
        raise FormatError("channel: kraus must be a nonempty list")
    return Channel(tuple(operator_from_json(k, d) for k in obj["kraus"]), label)


def generator_to_json(l: LindbladGenerator) -> dict:
    return {"dim": l.dim, "H": operator_to_json(l.hamiltonian),
            "A_kraus": [operator_to_json(a) for a in l.cp_kraus]}


def generator_from_json(obj) -> LindbladGenerator:
    _check_keys(obj, {"dim", "H", "A_kraus"}, what="generator")
    d = _dim(obj["dim"], "generator")
    if not isinstance(obj["A_kraus"], list) or not obj["A_kraus"]:
        raise FormatError("generator: A_kraus must be a nonempty list")
    h = operator_from_json(obj["H"], d)
    return LindbladGenerator(h, tuple(operator_from_json(a, d) for a in obj["A_kraus"]))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=True)


def read_json(path) -> object:
    with open(Path(path), encoding="utf-8") as fh:
        return json.load(fh)


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj) + "\n", encoding="utf-8")


def load_channel(path) -> Channel:
    return channel_from_json(read_json(path))


def load_generator(path) -> LindbladGenerator:
    return generator_from_json(read_json(path))


def load_operator(path) -> np.ndarray:
    return operator_from_json(read_json(path))
