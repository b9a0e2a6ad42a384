"""JSON channel files.

A channel file is a JSON object with integer fields d1 and d2, an optional
label, and a representation object whose "type" is "kraus", "choi", or
"holevo". Matrices are nested row-major lists; every scalar entry is either
a real number or a two-element [re, im] list. Kraus carries "operators"
(list of d1 x d2 matrices), Choi carries "matrix" ((d1*d2) square), Holevo
carries "terms" (list of {"F": d1 x d1, "R": d2 x d2}).
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .channel import (
    Channel,
    ChoiMatrix,
    HolevoEnsemble,
    KrausSet,
    choi_channel,
    holevo_channel,
    kraus_channel,
)
from .errors import ParseError

__all__ = ["channel_to_json", "channel_from_json", "save_channel", "load_channel"]


def _encode_scalar(z: complex) -> Any:
    if z.imag == 0.0:
        return z.real
    return [z.real, z.imag]


def _encode_matrix(m: np.ndarray) -> list:
    return [[_encode_scalar(complex(z)) for z in row] for row in np.asarray(m)]


def _decode_scalar(v: Any, where: str) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if (
        isinstance(v, list)
        and len(v) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
    ):
        return complex(v[0], v[1])
    raise ParseError(f"{where}: entry must be a number or [re, im] pair, got {v!r}")


def _decode_matrix(obj: Any, rows: int, cols: int, where: str) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != rows:
        raise ParseError(f"{where}: expected {rows} rows")
    out = np.empty((rows, cols), dtype=complex)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != cols:
            raise ParseError(f"{where}: row {i} must have {cols} entries")
        for j, v in enumerate(row):
            out[i, j] = _decode_scalar(v, f"{where}[{i}][{j}]")
    return out


def channel_to_json(ch: Channel) -> dict:
    """Plain-dict form of a channel, ready for json.dump."""
    rep = ch.representation
    if isinstance(rep, KrausSet):
        body = {
            "type": "kraus",
            "operators": [_encode_matrix(op) for op in rep.operators],
        }
    elif isinstance(rep, ChoiMatrix):
        body = {"type": "choi", "matrix": _encode_matrix(rep.matrix)}
    elif isinstance(rep, HolevoEnsemble):
        body = {
            "type": "holevo",
            "terms": [
                {"F": _encode_matrix(f), "R": _encode_matrix(r)} for f, r in rep.terms
            ],
        }
    else:
        raise ParseError(f"unknown representation type {type(rep).__name__}")
    doc: dict = {"d1": ch.d1, "d2": ch.d2, "representation": body}
    if ch.label is not None:
        doc["label"] = ch.label
    return doc


def channel_from_json(doc: Any) -> Channel:
    """Parse a plain dict (already json.load-ed) into a channel."""
    if not isinstance(doc, dict):
        raise ParseError("channel file must be a JSON object")
    for field in ("d1", "d2", "representation"):
        if field not in doc:
            raise ParseError(f"missing required field {field!r}")
    d1, d2 = doc["d1"], doc["d2"]
    if not isinstance(d1, int) or not isinstance(d2, int) or d1 < 1 or d2 < 1:
        raise ParseError("d1 and d2 must be positive integers")
    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise ParseError("label must be a string when present")
    rep = doc["representation"]
    if not isinstance(rep, dict) or "type" not in rep:
        raise ParseError("representation must be an object with a 'type' field")
    kind = rep["type"]
    try:
        if kind == "kraus":
            ops = rep.get("operators")
            if not isinstance(ops, list) or not ops:
                raise ParseError("kraus representation needs a nonempty 'operators' list")
            mats = tuple(
                _decode_matrix(op, d1, d2, f"operators[{k}]")
                for k, op in enumerate(ops)
            )
            return kraus_channel(mats, label=label)
        if kind == "choi":
            if "matrix" not in rep:
                raise ParseError("choi representation needs a 'matrix' field")
            n = d1 * d2
            m = _decode_matrix(rep["matrix"], n, n, "matrix")
            return choi_channel(m, d1, d2, label=label)
        if kind == "holevo":
            terms = rep.get("terms")
            if not isinstance(terms, list) or not terms:
                raise ParseError("holevo representation needs a nonempty 'terms' list")
            pairs = []
            for k, term in enumerate(terms):
                if not isinstance(term, dict) or "F" not in term or "R" not in term:
                    raise ParseError(f"terms[{k}] must be an object with 'F' and 'R'")
                f = _decode_matrix(term["F"], d1, d1, f"terms[{k}].F")
                r = _decode_matrix(term["R"], d2, d2, f"terms[{k}].R")
                pairs.append((f, r))
            return holevo_channel(tuple(pairs), label=label)
    except ParseError:
        raise
    except Exception as exc:
        raise ParseError(f"invalid channel data: {exc}") from exc
    raise ParseError(f"unknown representation type {kind!r}")


def save_channel(ch: Channel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(channel_to_json(ch), fh, indent=2)
        fh.write("\n")


def load_channel(path) -> Channel:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    return channel_from_json(doc)
