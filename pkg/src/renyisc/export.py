"""CSV / JSON renderers and the atomic file writer used by the CLI.

Rendering is deterministic: numbers are written with ``repr`` (shortest
round-tripping form), infinities as ``inf``, and no timestamps are embedded,
so an identical run gives byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

from .divergences import DivergenceResult
from .hypotest import ExponentCurve, TestOutcome
from .loader import matrix_to_json

LN2 = math.log(2.0)

CURVE_HEADER = ("rate", "exponent", "alpha_star")
TRADEOFF_HEADER = ("n", "mu", "type1_success", "type2_error")


def in_unit(x: float, bits: bool) -> float:
    """Convert a nats quantity to bits when *bits* is set."""
    return x / LN2 if bits else x


def json_number(x: Optional[float]) -> Union[float, str, None]:
    """JSON-safe number: infinities become the strings "inf" / "-inf"."""
    if x is None:
        return None
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return 0.0 if x == 0.0 else x


def _cell(x: Union[int, float]) -> str:
    if isinstance(x, int):
        return str(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(0.0 if x == 0.0 else float(x))


def _csv(header: Sequence[str], rows: Iterable[Sequence[Union[int, float]]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(x) for x in row])
    return buf.getvalue()


def divergence_to_json(result: DivergenceResult, bits: bool = False) -> Dict[str, Any]:
    obj: Dict[str, Any] = {
        "value": json_number(in_unit(result.value, bits)),
        "alpha": json_number(result.alpha),
        "kind": result.kind,
        "status": result.status,
        "unit": "bits" if bits else "nats",
        "witness": None,
    }
    if result.witness is not None:
        obj["witness"] = [matrix_to_json(p) for p in result.witness.projectors]
    if result.test is not None:
        obj["test"] = matrix_to_json(result.test)
    if result.upper_bound is not None:
        obj["upper_bound"] = json_number(in_unit(result.upper_bound, bits))
    if not result.converged:
        obj["converged"] = False
    return obj


def render_divergence(result: DivergenceResult, bits: bool = False) -> str:
    return json.dumps(divergence_to_json(result, bits), indent=2) + "\n"


def render_curve(curve: ExponentCurve, fmt: str = "csv", bits: bool = False) -> str:
    """Exponent curve as CSV (``rate,exponent,alpha_star``) or a JSON list of points."""
    rows = [(in_unit(p.rate, bits), in_unit(p.exponent, bits), p.alpha_star) for p in curve.points]
    if fmt == "csv":
        return _csv(CURVE_HEADER, rows)
    points: List[Dict[str, Any]] = [
        {name: json_number(v) for name, v in zip(CURVE_HEADER, row)} for row in rows
    ]
    return json.dumps({"unit": "bits" if bits else "nats", "finite": curve.finite, "points": points}, indent=2) + "\n"


def render_tradeoff(outcomes: Sequence[TestOutcome], fmt: str = "csv") -> str:
    rows = [(o.n, o.mu, o.type1_success, o.type2_error) for o in outcomes]
    if fmt == "csv":
        return _csv(TRADEOFF_HEADER, rows)
    objs = [{name: v if isinstance(v, int) else json_number(v) for name, v in zip(TRADEOFF_HEADER, row)} for row in rows]
    return json.dumps(objs, indent=2) + "\n"


def _clean(obj: Any) -> Any:
    if isinstance(obj, float):
        return json_number(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def render_report(report: Dict[str, Any]) -> str:
    """Verification report as sorted JSON; floats pass through ``json_number``."""
    return json.dumps(_clean(report), indent=2, sort_keys=True) + "\n"


def write_atomic(path: Union[str, Path], text: str, encoding: str = "utf-8") -> None:
    """Write *text* to *path* via a temp file in the same directory and ``os.replace``.

    A failed run never leaves a partial file behind.
    """
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent or Path("."))
    try:
        with os.fdopen(fd, "w", encoding=encoding, newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
