"""JSON file formats for channels, binary operations and Blackwell measures.

Writers are canonical: fixed key order, 17 significant digits, one row or
atom per line, so that load -> save is a byte-level fixpoint.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .blackwell import BlackwellMeasure, canonicalize
from .channel_core import Channel
from .errors import ParseError
from .operations import BinaryOp, check_uniformity_preserving


def fmt_float(x: float) -> str:
    x = float(x)
    if x == 0.0:
        return "0"
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return format(x, ".17g")


def _vec(v) -> str:
    return "[" + ", ".join(fmt_float(x) for x in v) + "]"


def _reject_constant(name):
    raise ValueError(f"non-finite number {name} is not allowed")


def _loads(text: str, source: str) -> Any:
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    except ValueError as exc:
        raise ParseError(f"{source}: {exc}") from None


def _field(obj: dict, key: str, source: str):
    if not isinstance(obj, dict):
        raise ParseError(f"{source}: top level must be a JSON object")
    if key not in obj:
        raise ParseError(f"{source}: missing field {key!r}")
    return obj[key]


def _int_field(obj: dict, key: str, source: str) -> int:
    v = _field(obj, key, source)
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise ParseError(f"{source}: field {key!r} must be a positive integer")
    return v


def _number_row(row, length: int, where: str, source: str) -> list[float]:
    if not isinstance(row, list):
        raise ParseError(f"{source}: {where} must be a list")
    if len(row) != length:
        raise ParseError(f"{source}: {where} has {len(row)} entries, expected {length}")
    out = []
    for k, v in enumerate(row):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ParseError(f"{source}: {where}[{k}] is not a finite number")
        out.append(float(v))
    return out


# channels

def channel_from_json(obj, source: str = "<channel>") -> Channel:
    n_in = _int_field(obj, "input", source)
    n_out = _int_field(obj, "output", source)
    rows = _field(obj, "rows", source)
    if not isinstance(rows, list) or len(rows) != n_in:
        raise ParseError(f"{source}: 'rows' must hold {n_in} rows")
    m = [_number_row(r, n_out, f"rows[{i}]", source) for i, r in enumerate(rows)]
    return Channel(m)


def channel_to_json(W: Channel) -> str:
    lines = ",\n".join("    " + _vec(r) for r in W.matrix)
    return (f'{{\n  "input": {W.input_size},\n  "output": {W.output_size},\n'
            f'  "rows": [\n{lines}\n  ]\n}}\n')


# binary operations

def op_from_json(obj, source: str = "<op>") -> BinaryOp:
    n = _int_field(obj, "size", source)
    table = _field(obj, "table", source)
    if not isinstance(table, list) or len(table) != n:
        raise ParseError(f"{source}: 'table' must hold {n} rows")
    for i, row in enumerate(table):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"{source}: table[{i}] must have {n} entries")
        if any(isinstance(v, bool) or not isinstance(v, int) for v in row):
            raise ParseError(f"{source}: table[{i}] must hold integers")
    try:
        return check_uniformity_preserving(table)
    except ValueError as exc:
        raise ParseError(f"{source}: {exc}") from None


def op_to_json(op: BinaryOp) -> str:
    lines = ",\n".join("    [" + ", ".join(str(int(v)) for v in r) + "]" for r in op.table)
    return f'{{\n  "size": {op.size},\n  "table": [\n{lines}\n  ]\n}}\n'


# measures

def measure_from_json(obj, source: str = "<measure>") -> BlackwellMeasure:
    n = _int_field(obj, "alphabet", source)
    atoms = _field(obj, "atoms", source)
    if not isinstance(atoms, list) or not atoms:
        raise ParseError(f"{source}: 'atoms' must be a nonempty list")
    P, w = [], []
    for j, atom in enumerate(atoms):
        where = f"atoms[{j}]"
        if not isinstance(atom, dict):
            raise ParseError(f"{source}: {where} must be an object")
        P.append(_number_row(_field(atom, "posterior", f"{source}: {where}"), n, f"{where}.posterior", source))
        wt = _field(atom, "weight", f"{source}: {where}")
        if isinstance(wt, bool) or not isinstance(wt, (int, float)) or not math.isfinite(wt) or wt < 0:
            raise ParseError(f"{source}: {where}.weight must be a nonnegative finite number")
        w.append(float(wt))
    P = np.array(P)
    if np.any(P < 0) or np.any(np.abs(P.sum(axis=1) - 1.0) > 1e-9):
        bad = int(np.flatnonzero((P < 0).any(axis=1) | (np.abs(P.sum(axis=1) - 1.0) > 1e-9))[0])
        raise ParseError(f"{source}: atoms[{bad}].posterior is not a probability vector")
    return canonicalize(P, w, n)


def measure_to_json(mp: BlackwellMeasure) -> str:
    lines = ",\n".join(
        f'    {{"posterior": {_vec(p)}, "weight": {fmt_float(w)}}}'
        for p, w in zip(mp.posteriors, mp.weights))
    return f'{{\n  "alphabet": {mp.alphabet_size},\n  "atoms": [\n{lines}\n  ]\n}}\n'


# generic file access

def read_json(path) -> tuple[Any, str]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror or exc}") from None
    return _loads(text, str(path)), str(path)


def load_channel(path) -> Channel:
    obj, src = read_json(path)
    return channel_from_json(obj, src)


def load_op(path) -> BinaryOp:
    obj, src = read_json(path)
    return op_from_json(obj, src)


def load_measure(path) -> BlackwellMeasure:
    obj, src = read_json(path)
    return measure_from_json(obj, src)


def load_any(path) -> Channel | BinaryOp | BlackwellMeasure:
    """Load a channel, operation or measure file, dispatching on its fields."""
    obj, src = read_json(path)
    if isinstance(obj, dict):
        if "rows" in obj:
            return channel_from_json(obj, src)
        if "atoms" in obj:
            return measure_from_json(obj, src)
        if "table" in obj:
            return op_from_json(obj, src)
    raise ParseError(f"{src}: not a channel, operation or measure file")


def dumps(obj) -> str:
    if isinstance(obj, Channel):
        return channel_to_json(obj)
    if isinstance(obj, BlackwellMeasure):
        return measure_to_json(obj)
    if isinstance(obj, BinaryOp):
        return op_to_json(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def save(obj, path) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")
