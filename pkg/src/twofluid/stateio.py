"""State-file parsing and deterministic report serialization.

Input files are JSON documents carrying the EOS constants, one or two
one-sided states, and optional front slopes, secondary-symmetrization
parameter, and tolerance overrides. Loading errors always name the offending
field path. Reports are serialized with sorted keys and 17-significant-digit
floats so identical inputs produce byte-identical output; sweep tables use
RFC 4180 CSV with a header row.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass

import numpy as np

from .eos import EosParams, State
from .jumps import Tolerances
from .waves import FrontSlopes

__all__ = [
    "StateFileError",
    "LoadedStateFile",
    "load_state_file",
    "load_json",
    "format_float",
    "dumps_report",
    "csv_text",
]


class StateFileError(ValueError):
    """Input-file problem, annotated with the field path."""


def load_json(path: str) -> tuple[dict, str]:
    """Read a JSON document and the hex digest of its raw bytes."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise StateFileError(f"{path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise StateFileError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise StateFileError(f"{path}: top-level value must be an object")
    return doc, hashlib.sha256(raw).hexdigest()


def _get_number(doc: dict, key: str, path: str, default=None) -> float:
    where = f"{path}.{key}" if path else key
    if key not in doc:
        if default is not None:
            return default
        raise StateFileError(f"{where}: missing required field")
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise StateFileError(f"{where}: expected a number, got {value!r}")
    if not np.isfinite(value):
        raise StateFileError(f"{where}: must be finite, got {value}")
    return float(value)


def _get_vector3(doc: dict, key: str, path: str) -> np.ndarray:
    value = doc.get(key, [0.0, 0.0, 0.0])
    if not isinstance(value, list) or len(value) != 3:
        raise StateFileError(f"{path}.{key}: expected a list of 3 numbers")
    out = np.empty(3)
    for i, item in enumerate(value):
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise StateFileError(f"{path}.{key}[{i}]: expected a number, got {item!r}")
        if not np.isfinite(item):
            raise StateFileError(f"{path}.{key}[{i}]: must be finite")
        out[i] = item
    return out


def parse_eos(doc: dict, path: str = "eos") -> EosParams:
    if not isinstance(doc, dict):
        raise StateFileError(f"{path}: expected an object")
    try:
        return EosParams(
            alpha=_get_number(doc, "alpha", path),
            gamma=_get_number(doc, "gamma", path),
            A=_get_number(doc, "A", path),
        )
    except ValueError as exc:
        if isinstance(exc, StateFileError):
            raise
        raise StateFileError(f"{path}: {exc}") from exc


def parse_state(doc: dict, path: str) -> State:
    if not isinstance(doc, dict):
        raise StateFileError(f"{path}: expected an object")
    n = _get_number(doc, "n", path)
    rho = _get_number(doc, "rho", path)
    if n <= 0.0:
        raise StateFileError(f"{path}.n: must be > 0, got {n}")
    if rho < 0.0:
        raise StateFileError(f"{path}.rho: must be >= 0, got {rho}")
    return State(n=n, rho=rho, u=_get_vector3(doc, "u", path), H=_get_vector3(doc, "H", path))


def parse_front(doc: dict, path: str = "front") -> FrontSlopes:
    if not isinstance(doc, dict):
        raise StateFileError(f"{path}: expected an object")
    return FrontSlopes(
        phi_t=_get_number(doc, "phi_t", path, default=0.0),
        phi_2=_get_number(doc, "phi_2", path, default=0.0),
        phi_3=_get_number(doc, "phi_3", path, default=0.0),
    )


def parse_tolerances(doc: dict, path: str = "tolerances") -> Tolerances:
    if not isinstance(doc, dict):
        raise StateFileError(f"{path}: expected an object")
    defaults = Tolerances()
    kwargs = {}
    for name in ("rel_rh", "rel_j", "rel_R", "rel_H"):
        kwargs[name] = _get_number(doc, name, path, default=getattr(defaults, name))
        if kwargs[name] <= 0.0:
            raise StateFileError(f"{path}.{name}: must be > 0")
    unknown = set(doc) - set(kwargs)
    if unknown:
        raise StateFileError(f"{path}.{sorted(unknown)[0]}: unknown tolerance")
    return Tolerances(**kwargs)


@dataclass
class LoadedStateFile:
    params: EosParams
    state: State | None
    plus: State | None
    minus: State | None
    front: FrontSlopes
    lam: float | None
    tolerances: Tolerances
    digest: str
    extras: dict


def load_state_file(path: str, sides: str = "one") -> LoadedStateFile:
    """Load and validate a state file.

    ``sides`` selects the schema: "one" requires a single ``state`` entry,
    "two" requires ``plus`` and ``minus``.
    """
    doc, digest = load_json(path)
    if "eos" not in doc:
        raise StateFileError(f"{path}: eos: missing required field")
    params = parse_eos(doc["eos"])

    state = plus = minus = None
    if sides == "one":
        if "state" not in doc:
            raise StateFileError(f"{path}: state: missing required field")
        state = parse_state(doc["state"], "state")
    elif sides == "two":
        for key in ("plus", "minus"):
            if key not in doc:
                raise StateFileError(f"{path}: {key}: missing required field")
        plus = parse_state(doc["plus"], "plus")
        minus = parse_state(doc["minus"], "minus")
    else:
        raise ValueError(f"sides must be 'one' or 'two', got {sides!r}")

    front = parse_front(doc["front"]) if "front" in doc else FrontSlopes()
    lam = _get_number(doc, "lambda", "") if "lambda" in doc else None
    tol = parse_tolerances(doc["tolerances"]) if "tolerances" in doc else Tolerances()
    known = {"eos", "state", "plus", "minus", "front", "lambda", "tolerances"}
    extras = {k: v for k, v in doc.items() if k not in known}
    return LoadedStateFile(
        params=params, state=state, plus=plus, minus=minus,
        front=front, lam=lam, tolerances=tol, digest=digest, extras=extras,
    )


def format_float(x: float) -> str:
    """Round-trip decimal form with 17 significant digits."""
    if np.isnan(x):
        return "NaN"
    if np.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(float(x), ".17g")


def _serialize(obj, out: list[str]) -> None:
    if isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if i:
                out.append(",")
            out.append(json.dumps(str(key)))
            out.append(":")
            _serialize(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _serialize(item, out)
        out.append("]")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        if np.isfinite(x):
            out.append(format_float(x))
        else:
            out.append(json.dumps(format_float(x)))  # NaN/Infinity as strings
    elif obj is None:
        out.append("null")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_report(obj: dict) -> str:
    """Deterministic JSON text: sorted keys, 17-significant-digit floats."""
    out: list[str] = []
    _serialize(obj, out)
    return "".join(out) + "\n"


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    return str(value)


def csv_text(header: list[str], rows: list[list]) -> str:
    """RFC 4180 table with a header row and '.' decimal floats."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format_cell(v) for v in row])
    return buf.getvalue()
