"""Readers and writers for the mqstate-v1 and mqdm-v1 JSON documents.

mqstate-v1:
    {"format": "mqstate-v1", "local_dim": n, "num_sites": N,
     "amplitudes": [{"index": [a_1, ..., a_N], "re": x, "im": y}, ...]}
mqdm-v1:
    {"format": "mqdm-v1", "local_dim": n, "sites": [...],
     "entries": [{"row": [...], "col": [...], "re": x, "im": y}, ...]}

Indices absent from a document are zero. Site 1 is the leftmost index
digit (big-endian flat layout).
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .errors import DimensionLimitError, ParseError
from .states import DensityMatrix, StateVector, encode

STATE_FORMAT = "mqstate-v1"
DENSITY_FORMAT = "mqdm-v1"

# Dense-storage ceiling on the flat dimension n**N (and per side for mqdm).
MAX_DIM = 1 << 16


def _require(condition: bool, message: str):
    if not condition:
        raise ParseError(message)


def _check_dims(local_dim: int, num_sites: int):
    _require(isinstance(local_dim, int) and local_dim >= 2, "local_dim must be an integer >= 2")
    _require(isinstance(num_sites, int) and num_sites >= 1, "num_sites must be a positive integer")
    if local_dim**num_sites > MAX_DIM:
        raise DimensionLimitError(
            f"dimension {local_dim}**{num_sites} exceeds the dense ceiling {MAX_DIM}"
        )


def _parse_digits(value, length: int, local_dim: int, what: str) -> tuple[int, ...]:
    _require(isinstance(value, list) and len(value) == length, f"{what} must list {length} digits")
    digits = []
    for d in value:
        _require(isinstance(d, int) and 0 <= d < local_dim, f"{what} digit {d!r} out of range")
        digits.append(d)
    return tuple(digits)


def _parse_complex(entry: dict, what: str) -> complex:
    re, im = entry.get("re", 0.0), entry.get("im", 0.0)
    _require(
        isinstance(re, (int, float)) and isinstance(im, (int, float)),
        f"{what} parts must be numbers",
    )
    return complex(re, im)


def state_from_document(doc: dict) -> StateVector:
    _require(isinstance(doc, dict), "document must be a JSON object")
    _require(doc.get("format") == STATE_FORMAT, f"format must be {STATE_FORMAT!r}")
    local_dim, num_sites = doc.get("local_dim"), doc.get("num_sites")
    _check_dims(local_dim, num_sites)
    amplitudes = np.zeros(local_dim**num_sites, dtype=np.complex128)
    entries = doc.get("amplitudes", [])
    _require(isinstance(entries, list), "amplitudes must be a list")
    seen = set()
    for entry in entries:
        _require(isinstance(entry, dict), "amplitude entries must be objects")
        digits = _parse_digits(entry.get("index"), num_sites, local_dim, "index")
        flat = encode(digits, local_dim)
        _require(flat not in seen, f"duplicate amplitude for index {list(digits)}")
        seen.add(flat)
        amplitudes[flat] = _parse_complex(entry, "amplitude")
    return StateVector(num_sites, local_dim, amplitudes)


def state_to_document(psi: StateVector) -> dict:
    table = [
        {
            "index": [int(d) for d in np.unravel_index(flat, (psi.local_dim,) * psi.num_sites)],
            "re": float(a.real),
            "im": float(a.imag),
        }
        for flat, a in enumerate(psi.amplitudes)
        if a != 0
    ]
    return {
        "format": STATE_FORMAT,
        "local_dim": psi.local_dim,
        "num_sites": psi.num_sites,
        "amplitudes": table,
    }


def density_from_document(doc: dict) -> DensityMatrix:
    _require(isinstance(doc, dict), "document must be a JSON object")
    _require(doc.get("format") == DENSITY_FORMAT, f"format must be {DENSITY_FORMAT!r}")
    local_dim, sites = doc.get("local_dim"), doc.get("sites")
    _require(isinstance(sites, list) and sites, "sites must be a nonempty list")
    _require(
        all(isinstance(s, int) and s >= 1 for s in sites) and len(set(sites)) == len(sites),
        "sites must be distinct positive integers",
    )
    _check_dims(local_dim, len(sites))
    k = len(sites)
    dim = local_dim**k
    entries = np.zeros((dim, dim), dtype=np.complex128)
    rows = doc.get("entries", [])
    _require(isinstance(rows, list), "entries must be a list")
    seen = set()
    for entry in rows:
        _require(isinstance(entry, dict), "density entries must be objects")
        row = _parse_digits(entry.get("row"), k, local_dim, "row")
        col = _parse_digits(entry.get("col"), k, local_dim, "col")
        key = (encode(row, local_dim), encode(col, local_dim))
        _require(key not in seen, f"duplicate entry at row {list(row)}, col {list(col)}")
        seen.add(key)
        entries[key] = _parse_complex(entry, "entry")
    return DensityMatrix(tuple(sites), local_dim, entries)


def density_to_document(rho: DensityMatrix) -> dict:
    k, n = rho.num_sites, rho.local_dim
    shape = (n,) * k
    table = []
    for r in range(rho.dim):
        for c in range(rho.dim):
            value = rho.entries[r, c]
            if value != 0:
                table.append(
                    {
                        "row": [int(d) for d in np.unravel_index(r, shape)],
                        "col": [int(d) for d in np.unravel_index(c, shape)],
                        "re": float(value.real),
                        "im": float(value.imag),
                    }
                )
    return {
        "format": DENSITY_FORMAT,
        "local_dim": n,
        "sites": list(rho.sites),
        "entries": table,
    }


def load_state(path) -> StateVector:
    return state_from_document(_load_json(path))


def dump_state(psi: StateVector, path):
    _dump_json(state_to_document(psi), path)


def load_density(path) -> DensityMatrix:
    return density_from_document(_load_json(path))


def dump_density(rho: DensityMatrix, path):
    _dump_json(density_to_document(rho), path)


def _load_json(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _dump_json(doc: dict, path):
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(doc, handle, indent=2)
        handle.write("\n")


def state_digest(psi: StateVector) -> str:
    """Stable identifier of a state's exact contents."""
    h = hashlib.sha256()
    h.update(f"{STATE_FORMAT}:{psi.local_dim}:{psi.num_sites}:".encode())
    h.update(np.ascontiguousarray(psi.amplitudes).tobytes())
    return h.hexdigest()
