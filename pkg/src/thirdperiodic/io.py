"""Signal CSV/JSON formats and deterministic JSON output."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import SchemaError
from .spectra import PeriodicSignal

__all__ = [
    "read_signal",
    "write_signal_csv",
    "read_signal_csv",
    "read_signal_json",
    "signal_to_json",
    "dumps",
    "write_json",
]

GRID_TOL = 1e-9


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_signal_csv(signal: PeriodicSignal, path, complex_values: bool | None = None) -> None:
    """Write ``t,v0,...`` for real signals or ``t,re0,im0,...`` for complex ones."""
    if complex_values is None:
        complex_values = not signal.is_real
    d = signal.d
    if complex_values:
        header = ["t"] + [f"{p}{i}" for i in range(d) for p in ("re", "im")]
    else:
        header = ["t"] + [f"v{i}" for i in range(d)]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for t, row in zip(signal.times, signal.samples):
            if complex_values:
                vals = [_fmt(v) for z in row for v in (z.real, z.imag)]
            else:
                vals = [_fmt(z.real) for z in row]
            w.writerow([_fmt(t)] + vals)


def _check_grid(t):
    N = len(t)
    expected = 2 * np.pi * np.arange(N) / N
    if np.max(np.abs(np.asarray(t) - expected)) > GRID_TOL:
        raise SchemaError("t column must be the uniform grid 2*pi*j/N without the endpoint")


def read_signal_csv(path) -> PeriodicSignal:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise SchemaError(f"{path}: signal CSV needs a header and at least one row")
    header = [h.strip() for h in rows[0]]
    if not header or header[0] != "t":
        raise SchemaError(f"{path}: first column must be 't'")
    cols = header[1:]
    d_real = [f"v{i}" for i in range(len(cols))]
    d_cplx = [f"{p}{i}" for i in range(len(cols) // 2) for p in ("re", "im")]
    if cols == d_real and cols:
        is_complex = False
    elif cols == d_cplx and cols:
        is_complex = True
    else:
        raise SchemaError(f"{path}: header must be t,v0,v1,... or t,re0,im0,...")
    try:
        data = np.array([[float(x) for x in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric entry ({exc})") from None
    if data.shape[1] != len(header):
        raise SchemaError(f"{path}: ragged rows")
    _check_grid(data[:, 0])
    vals = data[:, 1:]
    samples = vals[:, 0::2] + 1j * vals[:, 1::2] if is_complex else vals
    return PeriodicSignal(samples)


def read_signal_json(path) -> PeriodicSignal:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: invalid JSON ({exc})") from None
    return signal_from_json(obj)


def signal_from_json(obj) -> PeriodicSignal:
    """Parse ``{"N": int, "d": int, "complex": bool, "samples": [[...], ...]}``.

    Complex samples are rows of ``[re, im]`` pairs.
    """
    try:
        N, d, cplx, samples = int(obj["N"]), int(obj["d"]), bool(obj.get("complex", False)), obj["samples"]
    except (KeyError, TypeError, ValueError):
        raise SchemaError("signal JSON needs N, d and samples") from None
    try:
        arr = np.array(samples, dtype=float)
    except (TypeError, ValueError):
        raise SchemaError("signal samples must be numeric") from None
    expected = (N, d, 2) if cplx else (N, d)
    if arr.shape != expected:
        raise SchemaError(f"signal samples have shape {arr.shape}, expected {expected}")
    return PeriodicSignal(arr[..., 0] + 1j * arr[..., 1] if cplx else arr)


def signal_to_json(signal: PeriodicSignal) -> dict:
    cplx = not signal.is_real
    if cplx:
        samples = [[[float(z.real), float(z.imag)] for z in row] for row in signal.samples]
    else:
        samples = [[float(z.real) for z in row] for row in signal.samples]
    return {"N": signal.N, "d": signal.d, "complex": cplx, "samples": samples}


def read_signal(path) -> PeriodicSignal:
    path = Path(path)
    if path.suffix.lower() == ".json":
        return read_signal_json(path)
    return read_signal_csv(path)


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1)) if indent else ""
    end = " " * (indent * level) if indent else ""
    nl = "\n" if indent else ""
    sep = "," + nl if indent else ", "
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        return _fmt(x)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{" + nl + sep.join(items) + nl + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        # short numeric rows stay on one line
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_encode(v, 0, 0) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[" + nl + sep.join(items) + nl + end + "]"
    if isinstance(obj, (complex, np.complexfloating)):
        return _encode([obj.real, obj.imag], indent, level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float at 17 significant digits, so output is byte-stable."""
    return _encode(obj, indent, 0) + "\n"


def write_json(obj, path, indent: int = 2) -> None:
    Path(path).write_text(dumps(obj, indent))
