"""Hilbert-Schmidt geometry of operator subspaces.

Matrices are vectorized column-stacked (``vec(M) = M.reshape(-1, order="F")``)
whenever a subspace computation needs flat vectors.  Subspace equality is
always decided through projectors, never by comparing bases.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DimensionError",
    "Tolerances",
    "OperatorSubspace",
    "hs_inner",
    "hs_norm",
    "vec",
    "unvec",
    "orthonormalize_span",
    "complement",
    "project",
    "as_matrix",
]


class DimensionError(ValueError):
    """Raised when matrix shapes do not fit together."""


@dataclass(frozen=True)
class Tolerances:
    tol_orth: float = 1e-9
    tol_rank: float = 1e-10
    tol_converge: float = 1e-10

    def __post_init__(self):
        for name in ("tol_orth", "tol_rank", "tol_converge"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.tol_converge > self.tol_orth:
            raise ValueError("tol_converge must not exceed tol_orth")

    def as_dict(self) -> dict:
        return {"tol_orth": self.tol_orth, "tol_rank": self.tol_rank,
                "tol_converge": self.tol_converge}


DEFAULT_TOL = Tolerances()


def as_matrix(M) -> np.ndarray:
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2:
        raise DimensionError(f"expected a matrix, got array of shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def vec(M: np.ndarray) -> np.ndarray:
    return np.asarray(M).reshape(-1, order="F")


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    return np.asarray(v).reshape((rows, cols), order="F")


def hs_inner(M, N) -> complex:
    """Hilbert-Schmidt inner product Tr(M^dagger N)."""
    M = as_matrix(M)
    N = as_matrix(N)
    if M.shape != N.shape:
        raise DimensionError(f"shape mismatch {M.shape} vs {N.shape}")
    return complex(np.vdot(M, N))


def hs_norm(M) -> float:
    return float(np.linalg.norm(np.asarray(M)))


class OperatorSubspace:
    """Subspace of ``rows x cols`` complex matrices, stored by an HS-orthonormal basis.

    ``basis`` is an array of shape ``(k, rows, cols)``.  Instances are treated
    as immutable.
    """

    __slots__ = ("rows", "cols", "basis", "_vecs")

    def __init__(self, rows: int, cols: int, basis: np.ndarray):
        basis = np.asarray(basis, dtype=complex).reshape((-1, rows, cols))
        basis.setflags(write=False)
        self.rows = int(rows)
        self.cols = int(cols)
        self.basis = basis
        self._vecs = None

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def ambient_dim(self) -> int:
        return self.rows * self.cols

    @property
    def vecs(self) -> np.ndarray:
        """Column-stacked basis vectors as the columns of an ``(rows*cols, k)`` matrix."""
        if self._vecs is None:
            V = np.transpose(self.basis, (2, 1, 0)).reshape(self.ambient_dim, self.dim)
            V.setflags(write=False)
            self._vecs = V
        return self._vecs

    def projector(self) -> np.ndarray:
        V = self.vecs
        return V @ V.conj().T

    def same_as(self, other: "OperatorSubspace", tol: float = 1e-8) -> bool:
        if self.shape != other.shape:
            return False
        return float(np.linalg.norm(self.projector() - other.projector())) <= tol

    def contains(self, M, tol: Tolerances = DEFAULT_TOL) -> bool:
        M = as_matrix(M)
        _, res = project(self, M)
        return res <= tol.tol_orth * max(1.0, hs_norm(M))

    def adjoint(self) -> "OperatorSubspace":
        """The subspace of adjoints, shape ``cols x rows`` (orthonormality is preserved)."""
        return OperatorSubspace(self.cols, self.rows, np.conj(np.transpose(self.basis, (0, 2, 1))))

    def __repr__(self):
        return f"<OperatorSubspace dim {self.dim} of {self.rows}x{self.cols} matrices>"

    @classmethod
    def zero(cls, rows: int, cols: int) -> "OperatorSubspace":
        return cls(rows, cols, np.zeros((0, rows, cols), dtype=complex))

    @classmethod
    def full(cls, rows: int, cols: int) -> "OperatorSubspace":
        n = rows * cols
        return cls(rows, cols, np.stack([unvec(e, rows, cols) for e in np.eye(n, dtype=complex)]))


def _stack(mats: Iterable, shape=None) -> np.ndarray:
    arrs = [as_matrix(M) for M in mats]
    if not arrs:
        if shape is None:
            raise DimensionError("cannot infer the shape of an empty span; pass shape")
        return np.zeros((0,) + tuple(shape), dtype=complex)
    s0 = arrs[0].shape
    for A in arrs:
        if A.shape != s0:
            raise DimensionError(f"shape mismatch {A.shape} vs {s0}")
    if shape is not None and tuple(shape) != s0:
        raise DimensionError(f"shape mismatch {s0} vs {tuple(shape)}")
    return np.stack(arrs)


def orthonormalize_span(mats: Sequence, tol: Tolerances = DEFAULT_TOL, shape=None,
                        abs_floor: float = 0.0) -> OperatorSubspace:
    """HS-orthonormal basis of span(mats).

    The dimension is the numerical rank of the vectorized stack, with
    singular values below ``max(tol_rank * sigma_max, abs_floor)`` discarded.
    ``abs_floor`` matters when the inputs may be pure round-off, e.g. block
    restrictions of an orthonormal basis.
    """
    stack = _stack(mats, shape)
    rows, cols = stack.shape[1:]
    if stack.shape[0] == 0:
        return OperatorSubspace.zero(rows, cols)
    V = np.transpose(stack, (2, 1, 0)).reshape(rows * cols, stack.shape[0])
    U, s, _ = np.linalg.svd(V, full_matrices=False)
    if s[0] <= abs_floor or s[0] == 0.0:
        return OperatorSubspace.zero(rows, cols)
    r = int(np.sum(s > max(tol.tol_rank * s[0], abs_floor)))
    basis = np.stack([unvec(U[:, j], rows, cols) for j in range(r)])
    return OperatorSubspace(rows, cols, basis)


def complement(S: OperatorSubspace) -> OperatorSubspace:
    """HS-orthogonal complement within the space of ``rows x cols`` matrices."""
    n = S.ambient_dim
    if S.dim == 0:
        return OperatorSubspace.full(S.rows, S.cols)
    if S.dim == n:
        return OperatorSubspace.zero(S.rows, S.cols)
    U, _, _ = np.linalg.svd(S.vecs, full_matrices=True)
    W = U[:, S.dim:]
    basis = np.stack([unvec(W[:, j], S.rows, S.cols) for j in range(W.shape[1])])
    return OperatorSubspace(S.rows, S.cols, basis)


def project(S: OperatorSubspace, M) -> tuple[np.ndarray, float]:
    """Orthogonal projection of M onto S and the HS norm of the residual."""
    M = as_matrix(M)
    if M.shape != S.shape:
        raise DimensionError(f"shape mismatch {M.shape} vs {S.shape}")
    if S.dim == 0:
        return np.zeros_like(M), hs_norm(M)
    coeffs = np.einsum("kij,ij->k", S.basis.conj(), M)
    P = np.einsum("k,kij->ij", coeffs, S.basis)
    return P, hs_norm(M - P)
