"""Canonical JSON persistence for truncated modules.

One format for both categories: matrices are nested arrays of "p/q"
strings, keys are emitted in sorted order, and serialization is
deterministic byte for byte (round-tripping a file reproduces it exactly).
"""

from __future__ import annotations

import json
from typing import Optional

from .linalgq import RationalMatrix, format_rational, parse_rational
from .modcore import TruncatedModule
from .skelcat import CatKind


def matrix_to_json(m: RationalMatrix) -> list[list[str]]:
    return [[format_rational(x) for x in row] for row in m.data]


def matrix_from_json(data: list[list[str]], rows: int, cols: int) -> RationalMatrix:
    if len(data) != rows or any(len(r) != cols for r in data):
        raise ValueError(f"matrix shape mismatch: expected {rows}x{cols}")
    m = RationalMatrix.zeros(rows, cols)
    for i, row in enumerate(data):
        for j, x in enumerate(row):
            m.data[i][j] = parse_rational(x)
    return m


def module_to_dict(v: TruncatedModule) -> dict:
    out: dict = {
        "kind": v.kind.value,
        "window": v.window,
        "dims": list(v.dims),
        "bounds": list(v.bounds) if v.bounds is not None else None,
        "support": v.support,
    }
    if v.kind == CatKind.FI:
        out["fi_gens"] = {
            str(n): [matrix_to_json(g) for g in v.gens_at(n)]
            for n in range(2, v.window + 1)
        }
        out["maps"] = {
            str(n): matrix_to_json(v.iota(n)) for n in range(v.window)
        }
    else:
        out["fi_gens"] = None
        out["maps"] = {
            str(n): [matrix_to_json(a) for a in v.maps[n]]
            for n in range(v.window)
        }
    return out


def module_from_dict(data: dict) -> TruncatedModule:
    kind = CatKind(data["kind"])
    window = data["window"]
    dims = list(data["dims"])
    if len(dims) != window + 1:
        raise ValueError("dims length must be window + 1")
    if kind == CatKind.FI:
        gens = {
            n: [
                matrix_from_json(g, dims[n], dims[n])
                for g in data["fi_gens"][str(n)]
            ]
            for n in range(2, window + 1)
        }
        maps = {
            n: matrix_from_json(data["maps"][str(n)], dims[n + 1], dims[n])
            for n in range(window)
        }
    else:
        gens = None
        maps = {
            n: [
                matrix_from_json(a, dims[n + 1], dims[n])
                for a in data["maps"][str(n)]
            ]
            for n in range(window)
        }
    bounds = tuple(data["bounds"]) if data.get("bounds") is not None else None
    return TruncatedModule(
        kind, window, dims, gens, maps, bounds=bounds, support=data.get("support")
    )


def dumps(v: TruncatedModule) -> str:
    return json.dumps(module_to_dict(v), sort_keys=True, indent=2) + "\n"


def loads(text: str) -> TruncatedModule:
    return module_from_dict(json.loads(text))


def save(v: TruncatedModule, path: str) -> None:
    import os
    import tempfile

    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(dumps(v))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load(path: str) -> TruncatedModule:
    with open(path) as fh:
        return loads(fh.read())
