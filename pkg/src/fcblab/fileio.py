"""JSON file formats for polynomials, witnesses, and certificates.

Polynomial:      {"n": int, "coeffs": [{"subset": [ints], "value": float}]}
Block-multilinear: {"n": int, "d": int,
                    "coeffs": [{"pairs": [[block, index], ...], "value": float}]}
Witness:         {"m": int, "d": int, "u": [...], "v": [...], "A": [[[...]]]}
                 with A indexed 1..n+1, matrices row-major.
Certificate:     witness fields plus {"kind", "certified_value",
                 "implied_bound", "s_or_D"}; block-multilinear witnesses use
                 "A_blocks" (d x n matrices) instead of "A".

Subsets must be sorted ascending and blocks strictly increasing; duplicates
are rejected.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .behavior import Witness
from .errors import ParseError
from .poly import BlockMultilinearPolynomial, Polynomial
from .witnesses import BmlWitness, InfluenceCertificate


def _load_json(path: str | Path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top-level value must be an object")
    return data


def _require(data: dict, key: str, path) -> object:
    if key not in data:
        raise ParseError(f"{path}: missing field {key!r}")
    return data[key]


def load_polynomial(path: str | Path) -> Polynomial:
    data = _load_json(path)
    n = _require(data, "n", path)
    entries = _require(data, "coeffs", path)
    if not isinstance(n, int) or n < 0:
        raise ParseError(f"{path}: n must be a nonnegative integer")
    coeffs = {}
    for entry in entries:
        subset = entry.get("subset")
        if subset is None or "value" not in entry:
            raise ParseError(f"{path}: each coefficient needs 'subset' and 'value'")
        if any(not isinstance(i, int) for i in subset):
            raise ParseError(f"{path}: subset {subset} not integer-valued")
        if list(subset) != sorted(set(subset)):
            raise ParseError(f"{path}: subset not sorted ascending or has duplicates: {subset}")
        key = tuple(subset)
        if key in coeffs:
            raise ParseError(f"{path}: duplicate subset {subset}")
        coeffs[key] = float(entry["value"])
    try:
        return Polynomial(n, coeffs)
    except ValueError as e:
        raise ParseError(f"{path}: {e}") from None


def polynomial_payload(p: Polynomial) -> dict:
    entries = [
        {"subset": list(s), "value": c}
        for s, c in sorted(p.coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))
    ]
    return {"n": p.n, "coeffs": entries}


def save_polynomial(p: Polynomial, path: str | Path) -> None:
    Path(path).write_text(json.dumps(polynomial_payload(p), indent=2) + "\n", encoding="utf-8")


def load_bml(path: str | Path) -> BlockMultilinearPolynomial:
    data = _load_json(path)
    n = _require(data, "n", path)
    d = _require(data, "d", path)
    entries = _require(data, "coeffs", path)
    coeffs = {}
    for entry in entries:
        pairs = entry.get("pairs")
        if pairs is None or "value" not in entry:
            raise ParseError(f"{path}: each coefficient needs 'pairs' and 'value'")
        key = tuple((int(b), int(i)) for b, i in pairs)
        blocks = [b for b, _ in key]
        if blocks != sorted(set(blocks)):
            raise ParseError(f"{path}: blocks not strictly increasing: {pairs}")
        if key in coeffs:
            raise ParseError(f"{path}: duplicate key {pairs}")
        coeffs[key] = float(entry["value"])
    try:
        return BlockMultilinearPolynomial(n, d, coeffs)
    except ValueError as e:
        raise ParseError(f"{path}: {e}") from None


def save_bml(p: BlockMultilinearPolynomial, path: str | Path) -> None:
    entries = [
        {"pairs": [list(pair) for pair in k], "value": c}
        for k, c in sorted(p.coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))
    ]
    Path(path).write_text(
        json.dumps({"n": p.n, "d": p.d, "coeffs": entries}, indent=2) + "\n",
        encoding="utf-8",
    )


def witness_payload(w: Witness) -> dict:
    return {
        "m": w.m,
        "d": w.d,
        "u": w.u.tolist(),
        "v": w.v.tolist(),
        "A": [w.A[i].tolist() for i in range(w.n + 1)],
    }


def bml_witness_payload(w: BmlWitness) -> dict:
    return {
        "m": w.m,
        "d": w.d,
        "n": w.n,
        "u": w.u.tolist(),
        "v": w.v.tolist(),
        "A_blocks": [[w.A[b, i].tolist() for i in range(w.n)] for b in range(w.d)],
    }


def save_witness(w: Witness, path: str | Path) -> None:
    Path(path).write_text(json.dumps(witness_payload(w), indent=2) + "\n", encoding="utf-8")


def _parse_witness(data: dict, path) -> Witness:
    m = _require(data, "m", path)
    d = _require(data, "d", path)
    u = np.array(_require(data, "u", path), dtype=float)
    v = np.array(_require(data, "v", path), dtype=float)
    mats = _require(data, "A", path)
    a = np.array(mats, dtype=float)
    if a.ndim != 3 or a.shape[1:] != (m, m) or u.shape != (m,) or v.shape != (m,):
        raise ParseError(f"{path}: witness dimensions are inconsistent with m={m}")
    try:
        return Witness(d=int(d), u=u, v=v, A=a)
    except ValueError as e:
        raise ParseError(f"{path}: {e}") from None


def load_witness(path: str | Path) -> Witness:
    return _parse_witness(_load_json(path), path)


def _parse_bml_witness(data: dict, path) -> BmlWitness:
    m = _require(data, "m", path)
    u = np.array(_require(data, "u", path), dtype=float)
    v = np.array(_require(data, "v", path), dtype=float)
    a = np.array(_require(data, "A_blocks", path), dtype=float)
    if a.ndim != 4 or a.shape[2:] != (m, m) or u.shape != (m,) or v.shape != (m,):
        raise ParseError(f"{path}: witness dimensions are inconsistent with m={m}")
    return BmlWitness(u=u, v=v, A=a)


def save_certificate(cert: InfluenceCertificate, path: str | Path) -> None:
    if isinstance(cert.witness, Witness):
        payload = witness_payload(cert.witness)
    else:
        payload = bml_witness_payload(cert.witness)
    payload.update(
        {
            "kind": cert.kind,
            "certified_value": cert.certified_value,
            "implied_bound": cert.implied_bound,
            "s_or_D": cert.s_or_d,
        }
    )
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def load_certificate(path: str | Path) -> InfluenceCertificate:
    data = _load_json(path)
    kind = _require(data, "kind", path)
    witness = _parse_witness(data, path) if "A" in data else _parse_bml_witness(data, path)
    return InfluenceCertificate(
        kind=str(kind),
        witness=witness,
        certified_value=float(_require(data, "certified_value", path)),
        implied_bound=float(_require(data, "implied_bound", path)),
        s_or_d=int(_require(data, "s_or_D", path)),
    )
