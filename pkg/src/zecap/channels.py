"""Kraus channels, trace-preservation checks, and noncommutative-graph extraction."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graphs import I2, X, Y, Z, NoncommutativeGraph
from .linalg import DEFAULT_TOL, DimensionError, Tolerances, as_matrix, orthonormalize_span

__all__ = [
    "ChannelError",
    "KrausChannel",
    "ValidationReport",
    "validate_channel",
    "graph_of_channel",
    "weyl_channel",
    "dephasing_bitflip",
    "depolarizing",
    "example3",
    "example3_printed",
    "example4",
    "example4_offdiag",
    "ZOO",
    "zoo",
]


class ChannelError(ValueError):
    """A Kraus set is malformed or not trace preserving."""


class KrausChannel:
    __slots__ = ("dim_in", "dim_out", "kraus")

    def __init__(self, kraus: Sequence, dim_in: int | None = None, dim_out: int | None = None):
        ops = [as_matrix(E) for E in kraus]
        if not ops:
            raise ChannelError("a channel needs at least one Kraus operator")
        dim_out = ops[0].shape[0] if dim_out is None else dim_out
        dim_in = ops[0].shape[1] if dim_in is None else dim_in
        for i, E in enumerate(ops):
            if E.shape != (dim_out, dim_in):
                raise DimensionError(f"Kraus operator {i} has shape {E.shape}, expected {(dim_out, dim_in)}")
        self.dim_in = int(dim_in)
        self.dim_out = int(dim_out)
        self.kraus = np.stack(ops)
        self.kraus.setflags(write=False)

    def __len__(self):
        return len(self.kraus)

    def __repr__(self):
        return f"<KrausChannel {len(self)} ops, C^{self.dim_in} -> C^{self.dim_out}>"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    deviation_norm: float
    gram: np.ndarray  # sum_i E_i^dagger E_i

    def __bool__(self):
        return self.ok


def validate_channel(ch: KrausChannel, tol: Tolerances = DEFAULT_TOL) -> ValidationReport:
    """Check trace preservation, sum_i E_i^dagger E_i = I, in HS norm."""
    G = np.einsum("kji,kjl->il", ch.kraus.conj(), ch.kraus)
    dev = float(np.linalg.norm(G - np.eye(ch.dim_in)))
    return ValidationReport(dev <= tol.tol_orth, dev, G)


def graph_of_channel(ch: KrausChannel, tol: Tolerances = DEFAULT_TOL, validate: bool = True) -> NoncommutativeGraph:
    """span{E_j^dagger E_k}, orthonormalized."""
    if validate:
        rep = validate_channel(ch, tol)
        if not rep.ok:
            raise ChannelError(f"channel is not trace preserving (deviation {rep.deviation_norm:.3g})")
    prods = np.einsum("jai,kal->jkil", ch.kraus.conj(), ch.kraus).reshape(-1, ch.dim_in, ch.dim_in)
    return NoncommutativeGraph(orthonormalize_span(prods, tol), tol, check=validate)


def _ket(i: int, d: int) -> np.ndarray:
    v = np.zeros((d, 1), dtype=complex)
    v[i, 0] = 1.0
    return v


def weyl_channel(d: int) -> KrausChannel:
    """Clock-phase channel rho -> (1/d) sum_k Z_k rho Z_k^dagger; weights folded into the Kraus ops."""
    if d < 2:
        raise ValueError("Weyl channel needs d >= 2")
    w = np.exp(2j * np.pi / d)
    j = np.arange(d)
    return KrausChannel([np.diag(w ** (j * k)) / math.sqrt(d) for k in range(d)])


def dephasing_bitflip() -> KrausChannel:
    """Half dephasing (tagged |0>) plus half bit flip (tagged |1>), C^2 -> C^2 (x) C^2."""
    k0, k1 = _ket(0, 2), _ket(1, 2)
    return KrausChannel([np.kron(I2, k0) / 2, np.kron(Z, k0) / 2, np.kron(I2, k1) / 2, np.kron(X, k1) / 2])


def depolarizing(p: float) -> KrausChannel:
    if not 0 < p <= 4 / 3:
        raise ValueError("depolarizing parameter must satisfy 0 < p <= 4/3")
    a = math.sqrt(max(0.0, 1 - 3 * p / 4))
    b = math.sqrt(p) / 2
    return KrausChannel([a * I2, b * X, b * Y, b * Z])


def _example3_ops(scale: float) -> list[np.ndarray]:
    P00 = _ket(0, 2) @ _ket(0, 2).T
    P10 = _ket(1, 2) @ _ket(0, 2).T
    P01 = _ket(0, 2) @ _ket(1, 2).T
    return [scale * np.kron(P00, I2), scale * np.kron(P10, X)] + [np.kron(P01, s / 2) for s in (I2, X, Y, Z)]


def example3_printed() -> KrausChannel:
    """The six operators on C^2 (+) C^2 exactly as printed (not trace preserving)."""
    return KrausChannel(_example3_ops(1.0))


def example3() -> KrausChannel:
    """Block channel on C^2 (+) C^2 with the first two operators scaled by 1/sqrt(2)."""
    return KrausChannel(_example3_ops(1 / math.sqrt(2)))


def example4_offdiag() -> list[np.ndarray]:
    """F_0..F_3 as 4x2 matrices (maps C^2 -> C^4)."""
    k0, k1 = _ket(0, 2), _ket(1, 2)
    return [np.kron(I2, k0), np.kron(Z, k0), np.kron(I2, k1), np.kron(X, k1)]


def example4() -> KrausChannel:
    """Block channel on C^4 (+) C^2 -> C^8; each block-domain operator is zero-padded to C^6."""
    k0, k1 = _ket(0, 2), _ket(1, 2)
    w = np.exp(2j * np.pi / 4)
    ops = []

    def padA(M):
        out = np.zeros((8, 6), dtype=complex)
        out[:, :4] = M
        return out

    def padB(M):
        out = np.zeros((8, 6), dtype=complex)
        out[:, 4:] = M
        return out

    ops.append(padA(np.kron(k0, 0.6 * np.eye(4))))
    for j in range(4):
        for k in range(4):
            W = np.zeros((4, 4), dtype=complex)
            for m in range(4):
                W[(m + j) % 4, m] = w ** (m * k)
            ops.append(padA(np.kron(k1, W / 5)))
    for F in example4_offdiag():
        ops.append(padB(np.kron(k0, F / 2)))
    return KrausChannel(ops)


ZOO = {
    "weyl": weyl_channel,
    "dephasing_bitflip": dephasing_bitflip,
    "depolarizing": depolarizing,
    "example3": example3,
    "example3_printed": example3_printed,
    "example4": example4,
}


def zoo(name: str, *params) -> KrausChannel:
    try:
        ctor = ZOO[name]
    except KeyError:
        raise ValueError(f"unknown channel {name!r}; choose from {sorted(ZOO)}") from None
    return ctor(*params)
