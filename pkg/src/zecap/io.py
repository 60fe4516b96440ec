"""JSON file formats for channels, graphs, block graphs, subspaces and codewords.

Complex entries are two-element ``[re, im]`` arrays; matrices are row-major
lists of rows.  The document kind is detected from its top-level keys.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Union

import numpy as np

from .channels import KrausChannel, validate_channel
from .graphs import BlockGraph, NoncommutativeGraph, assemble_block, is_ncgraph
from .linalg import DEFAULT_TOL, OperatorSubspace, Tolerances, orthonormalize_span


class ParseError(ValueError):
    """Malformed input document; the message names the offending location."""


class ValidationError(ValueError):
    """Well-formed document whose value violates an invariant."""


def _clean(x: float) -> float:
    # canonical zero keeps reports byte-stable across platforms
    x = float(x)
    return 0.0 if x == 0.0 else x


def encode_complex(z) -> list[float]:
    z = complex(z)
    return [_clean(z.real), _clean(z.imag)]


def encode_matrix(M) -> list:
    M = np.asarray(M)
    return [[encode_complex(z) for z in row] for row in M]


def encode_vector(v) -> list:
    return [encode_complex(z) for z in np.asarray(v).ravel()]


def _decode_complex(z, where: str) -> complex:
    if isinstance(z, (int, float)) and not isinstance(z, bool):
        return complex(z)
    if (isinstance(z, list) and len(z) == 2
            and all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in z)):
        return complex(z[0], z[1])
    raise ParseError(f"{where}: expected [re, im], got {z!r}")


def decode_matrix(rows, where: str = "matrix") -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ParseError(f"{where}: expected a non-empty list of rows")
    width = len(rows[0])
    out = np.zeros((len(rows), width), dtype=complex)
    for i, r in enumerate(rows):
        if len(r) != width:
            raise ParseError(f"{where}[{i}]: row length {len(r)} differs from {width}")
        for j, z in enumerate(r):
            out[i, j] = _decode_complex(z, f"{where}[{i}][{j}]")
    if not np.all(np.isfinite(out)):
        raise ParseError(f"{where}: non-finite entry")
    return out


def decode_vector(vals, where: str = "vector") -> np.ndarray:
    if not isinstance(vals, list) or not vals:
        raise ParseError(f"{where}: expected a non-empty list")
    return np.array([_decode_complex(z, f"{where}[{i}]") for i, z in enumerate(vals)])


def _int_field(doc: dict, key: str) -> int:
    val = doc.get(key)
    if not isinstance(val, int) or isinstance(val, bool) or val < 1:
        raise ParseError(f"{key}: expected a positive integer, got {val!r}")
    return val


def _matrices(doc: dict, key: str, shape: tuple[int, int], allow_empty: bool = False) -> list[np.ndarray]:
    mats = doc.get(key)
    if not isinstance(mats, list) or (not mats and not allow_empty):
        raise ParseError(f"{key}: expected a list of matrices")
    out = []
    for i, m in enumerate(mats):
        M = decode_matrix(m, f"{key}[{i}]")
        if M.shape != shape:
            raise ValidationError(f"{key}[{i}]: shape {M.shape} does not match {shape}")
        out.append(M)
    return out


# --- serialization -------------------------------------------------------

def channel_to_doc(ch: KrausChannel) -> dict:
    return {"dim_in": ch.dim_in, "dim_out": ch.dim_out, "kraus": [encode_matrix(E) for E in ch.kraus]}


def graph_to_doc(S: NoncommutativeGraph) -> dict:
    return {"dim": S.dim, "basis": [encode_matrix(B) for B in S.basis]}


def subspace_to_doc(U: OperatorSubspace) -> dict:
    return {"rows": U.rows, "cols": U.cols, "basis": [encode_matrix(B) for B in U.basis]}


def block_to_doc(bg: BlockGraph) -> dict:
    return {"dimA": bg.dimA, "dimB": bg.dimB,
            "S": [encode_matrix(B) for B in bg.S.basis],
            "T": [encode_matrix(B) for B in bg.T.basis],
            "U": [encode_matrix(B) for B in bg.U.basis]}


def codewords_to_doc(vectors) -> dict:
    vectors = list(vectors)
    return {"dim": int(len(vectors[0])) if vectors else 0, "vectors": [encode_vector(v) for v in vectors]}


def to_doc(obj) -> dict:
    if isinstance(obj, KrausChannel):
        return channel_to_doc(obj)
    if isinstance(obj, NoncommutativeGraph):
        return graph_to_doc(obj)
    if isinstance(obj, BlockGraph):
        return block_to_doc(obj)
    if isinstance(obj, OperatorSubspace):
        return subspace_to_doc(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# --- parsing -------------------------------------------------------------

def channel_from_doc(doc: dict, tol: Tolerances = DEFAULT_TOL, validate: bool = True) -> KrausChannel:
    din, dout = _int_field(doc, "dim_in"), _int_field(doc, "dim_out")
    ch = KrausChannel(_matrices(doc, "kraus", (dout, din)), din, dout)
    if validate:
        rep = validate_channel(ch, tol)
        if not rep.ok:
            raise ValidationError(f"trace preservation violated: |sum E^dagger E - I| = {rep.deviation_norm:.3g}")
    return ch


def graph_from_doc(doc: dict, tol: Tolerances = DEFAULT_TOL) -> NoncommutativeGraph:
    d = _int_field(doc, "dim")
    sub = orthonormalize_span(_matrices(doc, "basis", (d, d)), tol)
    ok, defects = is_ncgraph(sub, tol)
    if not ok:
        raise ValidationError("noncommutative graph invariant violated: " + "; ".join(defects))
    return NoncommutativeGraph(sub, tol, check=False)


def subspace_from_doc(doc: dict, tol: Tolerances = DEFAULT_TOL) -> OperatorSubspace:
    r, c = _int_field(doc, "rows"), _int_field(doc, "cols")
    return orthonormalize_span(_matrices(doc, "basis", (r, c), allow_empty=True), tol, shape=(r, c))


def block_from_doc(doc: dict, tol: Tolerances = DEFAULT_TOL) -> BlockGraph:
    a, b = _int_field(doc, "dimA"), _int_field(doc, "dimB")
    parts = {}
    for key, shape in (("S", (a, a)), ("T", (b, b))):
        sub = orthonormalize_span(_matrices(doc, key, shape), tol)
        ok, defects = is_ncgraph(sub, tol)
        if not ok:
            raise ValidationError(f"{key}: noncommutative graph invariant violated: " + "; ".join(defects))
        parts[key] = NoncommutativeGraph(sub, tol, check=False)
    U = orthonormalize_span(_matrices(doc, "U", (a, b), allow_empty=True), tol, shape=(a, b))
    return BlockGraph(a, b, parts["S"], parts["T"], U)


def codewords_from_doc(doc: dict) -> list[np.ndarray]:
    d = _int_field(doc, "dim")
    vecs = doc.get("vectors")
    if not isinstance(vecs, list):
        raise ParseError("vectors: expected a list")
    out = []
    for i, v in enumerate(vecs):
        x = decode_vector(v, f"vectors[{i}]")
        if len(x) != d:
            raise ValidationError(f"vectors[{i}]: length {len(x)} differs from dim {d}")
        out.append(x)
    return out


Parsed = Union[KrausChannel, NoncommutativeGraph, BlockGraph, OperatorSubspace]


def detect_kind(doc) -> str:
    if not isinstance(doc, dict):
        raise ParseError("top level: expected a JSON object")
    keys = set(doc)
    if {"dim_in", "dim_out", "kraus"} <= keys:
        return "channel"
    if {"dimA", "dimB", "S", "T", "U"} <= keys:
        return "block"
    if {"rows", "cols", "basis"} <= keys:
        return "subspace"
    if {"dim", "basis"} <= keys:
        return "graph"
    if {"dim", "vectors"} <= keys:
        return "codewords"
    raise ParseError(f"top level: unrecognized document with keys {sorted(keys)}")


def parse_doc(doc, tol: Tolerances = DEFAULT_TOL):
    kind = detect_kind(doc)
    return {
        "channel": channel_from_doc,
        "graph": graph_from_doc,
        "block": block_from_doc,
        "subspace": subspace_from_doc,
        "codewords": lambda d, t: codewords_from_doc(d),
    }[kind](doc, tol)


def parse_input(path: Union[str, Path], tol: Tolerances = DEFAULT_TOL):
    """Read a JSON input file and return the typed, validated value it describes."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_doc(doc, tol)


def write_doc(obj, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(to_doc(obj), indent=1) + "\n")


def as_graph(obj, tol: Tolerances = DEFAULT_TOL) -> NoncommutativeGraph:
    """Coerce a parsed channel, graph or block document into a graph."""
    from .channels import graph_of_channel

    if isinstance(obj, NoncommutativeGraph):
        return obj
    if isinstance(obj, KrausChannel):
        return graph_of_channel(obj, tol)
    if isinstance(obj, BlockGraph):
        return assemble_block(obj)
    raise ValidationError(f"expected a channel, graph or block document, got {type(obj).__name__}")
