"""JSON and CSV (de)serialisation shared by the CLI and reports.

POVM schema::

    {"outcomes": [...], "effects": [{"alpha": ..., "vec": [x, y, z]}, ...]}
    {"gamma": ..., "c": [x, y, z]}            # dichotomic shorthand
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from .core import DichotomicPovm, DiscretePovm, InvalidOperatorError, QubitOperator


class SchemaError(ValueError):
    pass


def operator_to_json(op: QubitOperator) -> dict:
    return {"alpha": float(op.alpha), "vec": [float(x) for x in op.vec]}


def povm_to_json(povm: Union[DiscretePovm, DichotomicPovm]) -> dict:
    if isinstance(povm, DichotomicPovm):
        return {"gamma": povm.gamma, "c": [float(x) for x in povm.c]}
    return {
        "outcomes": [float(m) for m in povm.outcomes],
        "effects": [operator_to_json(e) for e in povm.effects],
    }


def povm_from_json(obj) -> Union[DiscretePovm, DichotomicPovm]:
    if not isinstance(obj, dict):
        raise SchemaError("POVM must be a JSON object")
    try:
        if "gamma" in obj or "c" in obj:
            return DichotomicPovm(float(obj.get("gamma", 0.0)), obj["c"])
        effects = [QubitOperator(e["alpha"], e["vec"]) for e in obj["effects"]]
        return DiscretePovm(tuple(obj["outcomes"]), tuple(effects))
    except (KeyError, TypeError, InvalidOperatorError) as exc:
        raise SchemaError(f"invalid POVM: {exc}") from exc


def load_povm(text_or_path: str) -> Union[DiscretePovm, DichotomicPovm]:
    """Parse inline JSON, or read it from a file when the argument names one."""
    text = text_or_path
    if not text.lstrip().startswith("{"):
        path = Path(text)
        if not path.is_file():
            raise SchemaError(f"neither inline JSON nor a readable file: {text!r}")
        text = path.read_text()
    try:
        return povm_from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc}") from exc


def as_symmetric_direction(povm) -> np.ndarray:
    """Bloch direction of a symmetric +-1 POVM given in either schema form."""
    if isinstance(povm, DiscretePovm):
        if set(povm.outcomes) != {1.0, -1.0}:
            raise SchemaError("expected a dichotomic POVM with outcomes +1/-1")
        plus = povm.effect(1)
        povm = DichotomicPovm(plus.alpha - 1.0, plus.vec)
    if abs(povm.gamma) > 1e-12:
        raise SchemaError("only symmetric (gamma = 0) observables are supported here")
    return povm.c


def fmt(x) -> str:
    """Round-trip-exact decimal rendering of a number."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(x) for x in row])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, default=_default) + "\n"


def _default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    raise TypeError(f"not serialisable: {type(o).__name__}")
