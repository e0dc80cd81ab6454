"""Canonical JSON: sorted keys, floats written as ``%.12e``.

Output from ``dumps`` is a pure function of its input, so two runs with the
same seed produce byte-identical files.
"""
from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

FLOAT_FORMAT = "%.12e"


def matrix_to_json(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(data: list, shape: tuple[int, int] | None = None) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.size == 0:
        return np.zeros(shape or (0, 0), dtype=complex)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ValueError(f"expected [[ [re, im], ... ], ...], got array of shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def _float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return FLOAT_FORMAT % x


def _encode(obj: Any, out: list[str]) -> None:
    if obj is None or isinstance(obj, (bool, np.bool_)):
        out.append(json.dumps(None if obj is None else bool(obj)))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_float(float(obj)))
    elif isinstance(obj, (complex, np.complexfloating)):
        _encode([float(obj.real), float(obj.imag)], out)
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj, key=str)):
            if i:
                out.append(",")
            out.append(json.dumps(str(key)))
            out.append(":")
            _encode(obj[key], out)
        out.append("}")
    elif isinstance(obj, np.ndarray):
        _encode(obj.tolist(), out)
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _encode(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    out: list[str] = []
    _encode(obj, out)
    return "".join(out) + "\n"


def blocks_to_json(blocks: dict) -> list[dict]:
    """Sparse block list for natural transformations and Fourier coefficients."""
    rows = []
    for (label, u, v) in sorted(blocks, key=lambda k: (tuple(k[0]), k[1], k[2])):
        rows.append({"irrep": list(label), "u": int(u), "v": int(v), "matrix": matrix_to_json(blocks[(label, u, v)])})
    return rows


def blocks_from_json(rows: list[dict]) -> dict:
    return {(tuple(r["irrep"]), int(r["u"]), int(r["v"])): matrix_from_json(r["matrix"]) for r in rows}


def dual_to_json(dual) -> dict:
    g = dual.groupoid
    return {
        "n_units": g.n_units,
        "n_arrows": g.n_arrows,
        "irreps": [
            {
                "label": list(ir.label),
                "dims": list(ir.rep.dims),
                "matrices": [matrix_to_json(ir.rep(x)) for x in g.arrows],
            }
            for ir in dual
        ],
    }


def element_to_json(el) -> dict:
    return {"u": el.u, "v": el.v,
            "blocks": [{"irrep": list(l), "matrix": matrix_to_json(m)} for l, m in sorted(el.blocks.items())]}
