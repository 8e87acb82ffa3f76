"""Readers and writers for the JSON matrix, state and channel formats.

Matrix:  {"dim": n, "re": [[...]], "im": [[...]]}   (row-major; "im" optional)
Channel: {"d_B": n, "outputs": [matrix, ...]}
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Mapping, Union

import numpy as np

from .cqcoding import CqChannel
from .errors import InputError
from .opalg import DensityOperator, OperatorLike, as_matrix

PathLike = Union[str, Path]


def load_json(path: PathLike) -> Any:
    """Parse *path* as JSON; unreadable or malformed files raise InputError."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror or exc})") from exc
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not UTF-8 text") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc


def _grid(obj: Any, n: int, name: str) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"matrix field {name!r} must be a list of number rows") from exc
    if arr.shape != (n, n):
        raise InputError(f"matrix field {name!r} has shape {arr.shape}, expected ({n}, {n})")
    if not np.isfinite(arr).all():
        raise InputError(f"matrix field {name!r} contains non-finite entries")
    return arr


def matrix_from_json(obj: Any) -> np.ndarray:
    """Complex matrix from the {"dim", "re", "im"} object."""
    if not isinstance(obj, Mapping):
        raise InputError("a matrix must be a JSON object with dim/re/im")
    if "dim" not in obj or "re" not in obj:
        raise InputError("matrix object needs 'dim' and 're'")
    dim = obj["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise InputError(f"matrix 'dim' must be a positive integer, got {dim!r}")
    re = _grid(obj["re"], dim, "re")
    im = _grid(obj["im"], dim, "im") if obj.get("im") is not None else np.zeros_like(re)
    return re + 1j * im


def matrix_to_json(m: OperatorLike) -> Dict[str, Any]:
    """Inverse of ``matrix_from_json``; "im" is always written."""
    a = as_matrix(m)
    return {
        "dim": int(a.shape[0]),
        "re": [[_number(x) for x in row] for row in a.real],
        "im": [[_number(x) for x in row] for row in a.imag],
    }


def _number(x: float) -> float:
    # repr round-trips doubles; -0.0 is normalised so outputs diff cleanly
    x = float(x)
    return 0.0 if x == 0.0 else x


def state_from_json(obj: Any) -> DensityOperator:
    """Validated density operator (PSD within 1e-8, unit trace within 1e-10)."""
    return DensityOperator(matrix_from_json(obj))


def load_state(path: PathLike) -> DensityOperator:
    obj = load_json(path)
    try:
        return state_from_json(obj)
    except InputError as exc:
        raise InputError(f"{Path(path)}: {exc}") from exc


def channel_from_json(obj: Any) -> CqChannel:
    if not isinstance(obj, Mapping) or "outputs" not in obj:
        raise InputError("a channel must be a JSON object with 'outputs'")
    outputs = obj["outputs"]
    if not isinstance(outputs, list) or not outputs:
        raise InputError("channel 'outputs' must be a non-empty list of matrices")
    states = tuple(state_from_json(o) for o in outputs)
    d_b = obj.get("d_B", states[0].dim)
    if d_b != states[0].dim:
        raise InputError(f"channel 'd_B' is {d_b!r} but outputs are {states[0].dim}-dimensional")
    return CqChannel(states)


def channel_to_json(ch: CqChannel) -> Dict[str, Any]:
    return {"d_B": ch.d_B, "outputs": [matrix_to_json(o) for o in ch.outputs]}


def load_channel(path: PathLike) -> CqChannel:
    obj = load_json(path)
    try:
        return channel_from_json(obj)
    except InputError as exc:
        raise InputError(f"{Path(path)}: {exc}") from exc

