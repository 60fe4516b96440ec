"""Noncommutative graphs: predicates, tensor products, block structure, normal forms."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np
from scipy.stats import unitary_group

from .linalg import (
    DEFAULT_TOL,
    DimensionError,
    OperatorSubspace,
    Tolerances,
    orthonormalize_span,
    project,
)

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


class GraphError(ValueError):
    """A subspace failed the noncommutative-graph invariants."""


class NotBlockClosed(GraphError):
    """The graph does not split into the four blocks of the requested direct sum."""


def is_ncgraph(S: OperatorSubspace, tol: Tolerances = DEFAULT_TOL) -> tuple[bool, list[str]]:
    """Check adjoint-closure and identity membership.

    Returns ``(ok, defects)`` where ``defects`` names each failed condition.
    """
    if S.rows != S.cols:
        raise DimensionError(f"noncommutative graphs are square, got {S.rows}x{S.cols}")
    defects = []
    if S.dim == 0:
        return False, ["identity missing"]
    for k, B in enumerate(S.basis):
        _, res = project(S, B.conj().T)
        if res > tol.tol_orth:
            defects.append(f"not adjoint-closed (basis element {k}, residual {res:.3g})")
            break
    Id = np.eye(S.rows, dtype=complex)
    _, res = project(S, Id)
    if res > tol.tol_orth * math.sqrt(S.rows):
        defects.append(f"identity missing (residual {res:.3g})")
    return not defects, defects


class NoncommutativeGraph:
    """Adjoint-closed operator subspace of L(C^dim) that contains the identity."""

    __slots__ = ("dim", "subspace")

    def __init__(self, subspace: OperatorSubspace, tol: Tolerances = DEFAULT_TOL, check: bool = True):
        if subspace.rows != subspace.cols:
            raise DimensionError(f"noncommutative graphs are square, got {subspace.shape}")
        if check:
            ok, defects = is_ncgraph(subspace, tol)
            if not ok:
                raise GraphError("; ".join(defects))
        self.dim = subspace.rows
        self.subspace = subspace

    @classmethod
    def span(cls, mats: Sequence, tol: Tolerances = DEFAULT_TOL, check: bool = True) -> "NoncommutativeGraph":
        return cls(orthonormalize_span(mats, tol), tol, check)

    @classmethod
    def full(cls, d: int) -> "NoncommutativeGraph":
        return cls(OperatorSubspace.full(d, d), check=False)

    @classmethod
    def scalar(cls, d: int) -> "NoncommutativeGraph":
        return cls(OperatorSubspace(d, d, np.eye(d, dtype=complex)[None] / math.sqrt(d)), check=False)

    @classmethod
    def diagonal(cls, d: int) -> "NoncommutativeGraph":
        units = np.zeros((d, d, d), dtype=complex)
        for t in range(d):
            units[t, t, t] = 1.0
        return cls(OperatorSubspace(d, d, units), check=False)

    @property
    def basis(self) -> np.ndarray:
        return self.subspace.basis

    @property
    def sdim(self) -> int:
        """Dimension of the operator subspace (not of the ambient space)."""
        return self.subspace.dim

    def is_full(self) -> bool:
        return self.sdim == self.dim * self.dim

    def is_scalar(self) -> bool:
        return self.sdim == 1

    def conjugate(self, V: np.ndarray) -> "NoncommutativeGraph":
        """The graph ``V S V^dagger`` for a unitary V."""
        basis = np.einsum("ij,kjl,ml->kim", V, self.basis, V.conj())
        return NoncommutativeGraph(OperatorSubspace(self.dim, self.dim, basis), check=False)

    def same_as(self, other: "NoncommutativeGraph", tol: float = 1e-8) -> bool:
        return self.subspace.same_as(other.subspace, tol)

    def __repr__(self):
        return f"<NoncommutativeGraph dim {self.sdim} in L(C^{self.dim})>"


def tensor_graphs(S: NoncommutativeGraph, T: NoncommutativeGraph) -> NoncommutativeGraph:
    # Kronecker products of two HS-orthonormal bases are HS-orthonormal.
    basis = np.einsum("aij,bkl->abikjl", S.basis, T.basis)
    d = S.dim * T.dim
    basis = basis.reshape(S.sdim * T.sdim, d, d)
    return NoncommutativeGraph(OperatorSubspace(d, d, basis), check=False)


@dataclass(frozen=True)
class BlockGraph:
    """Block noncommutative graph ``S_AA + T_BB + U_BA + U_BA^dagger`` on A (+) B.

    ``U`` holds ``dimA x dimB`` matrices (maps from B into A); the lower-left
    block is stored implicitly as its adjoint.
    """

    dimA: int
    dimB: int
    S: NoncommutativeGraph
    T: NoncommutativeGraph
    U: OperatorSubspace

    def __post_init__(self):
        if self.S.dim != self.dimA or self.T.dim != self.dimB:
            raise DimensionError("diagonal blocks do not match dimA/dimB")
        if self.U.shape != (self.dimA, self.dimB):
            raise DimensionError(f"off-diagonal block must be {self.dimA}x{self.dimB}, got {self.U.shape}")

    @property
    def dim(self) -> int:
        return self.dimA + self.dimB

    def offdiag_full(self) -> bool:
        return self.U.dim == self.dimA * self.dimB


def _pad(M: np.ndarray, d: int, r0: int, c0: int) -> np.ndarray:
    out = np.zeros((d, d), dtype=complex)
    out[r0:r0 + M.shape[0], c0:c0 + M.shape[1]] = M
    return out


def assemble_block(bg: BlockGraph) -> NoncommutativeGraph:
    d, a = bg.dim, bg.dimA
    parts = [_pad(B, d, 0, 0) for B in bg.S.basis]
    parts += [_pad(B, d, a, a) for B in bg.T.basis]
    parts += [_pad(B, d, 0, a) for B in bg.U.basis]
    parts += [_pad(B.conj().T, d, a, 0) for B in bg.U.basis]
    # Disjoint block supports keep the padded bases HS-orthonormal.
    return NoncommutativeGraph(OperatorSubspace(d, d, np.stack(parts)), check=False)


def decompose_block(S: NoncommutativeGraph, dimA: int, tol: Tolerances = DEFAULT_TOL) -> BlockGraph:
    """Split S along C^dimA (+) C^(d - dimA); raise NotBlockClosed if it does not split."""
    d = S.dim
    if not 0 < dimA < d:
        raise ValueError(f"dimA must lie strictly between 0 and {d}")
    a = dimA
    B = S.basis
    SAA = orthonormalize_span(B[:, :a, :a], tol, shape=(a, a), abs_floor=tol.tol_orth)
    TBB = orthonormalize_span(B[:, a:, a:], tol, shape=(d - a, d - a), abs_floor=tol.tol_orth)
    UBA = orthonormalize_span(B[:, :a, a:], tol, shape=(a, d - a), abs_floor=tol.tol_orth)
    VAB = orthonormalize_span(B[:, a:, :a], tol, shape=(d - a, a), abs_floor=tol.tol_orth)
    # The block projections always span a superspace of S; equality of
    # dimensions is equivalent to S being closed under block projection.
    if SAA.dim + TBB.dim + UBA.dim + VAB.dim != S.sdim:
        raise NotBlockClosed(f"graph is not closed under projection onto the {a}+{d - a} blocks")
    if not VAB.same_as(UBA.adjoint(), tol=10 * tol.tol_orth * max(1, UBA.dim)):
        raise NotBlockClosed("lower-left block is not the adjoint of the upper-right block")
    return BlockGraph(a, d - a, NoncommutativeGraph(SAA, tol), NoncommutativeGraph(TBB, tol), UBA)


def block_splits(S: NoncommutativeGraph, tol: Tolerances = DEFAULT_TOL) -> Iterator[BlockGraph]:
    """All coordinate splits A (+) B under which S is a block graph.

    Most balanced splits come first (ties: smaller dimA), so the natural
    two-block reading of a graph is preferred over peeling off one coordinate.
    """
    for a in sorted(range(1, S.dim), key=lambda a: (abs(2 * a - S.dim), a)):
        try:
            yield decompose_block(S, a, tol)
        except NotBlockClosed:
            continue


def hermitian_basis(S: NoncommutativeGraph, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """A basis of S made of Hermitian matrices (exists because S is adjoint-closed)."""
    B = S.basis
    Bh = B.conj().transpose(0, 2, 1)
    gens = np.concatenate([(B + Bh) / 2, (B - Bh) / 2j])
    norms = np.linalg.norm(gens.reshape(len(gens), -1), axis=1)
    gens = gens[norms > tol.tol_orth]
    # Real span of Hermitian generators: orthonormalize their real coordinates.
    R = np.concatenate([gens.real.reshape(len(gens), -1), gens.imag.reshape(len(gens), -1)], axis=1)
    U, s, Vt = np.linalg.svd(R, full_matrices=False)
    r = int(np.sum(s > tol.tol_rank * s[0]))
    n = S.dim * S.dim
    H = Vt[:r, :n] + 1j * Vt[:r, n:]
    return H.reshape(r, S.dim, S.dim)


def detect_diagonal_algebra(S: NoncommutativeGraph, tol: Tolerances = DEFAULT_TOL,
                            seed: int = 0x5EED) -> Optional[np.ndarray]:
    """Find a unitary W with ``W^dagger S W`` equal to the diagonal matrices, if one exists.

    Returns the unitary (columns form the diagonalizing basis) or None.
    """
    d = S.dim
    if S.sdim != d:
        return None
    H = hermitian_basis(S, tol)
    if H.shape[0] != d:
        return None
    for i in range(d):
        for j in range(i + 1, d):
            if np.linalg.norm(H[i] @ H[j] - H[j] @ H[i]) > tol.tol_orth:
                return None
    rng = np.random.default_rng(seed)
    for _ in range(2):
        c = rng.standard_normal(d)
        _, W = np.linalg.eigh(np.einsum("k,kij->ij", c, H))
        D = np.einsum("ji,kjl,lm->kim", W.conj(), H, W)
        off = D - np.einsum("kii->ki", D)[:, :, None] * np.eye(d)
        if np.max(np.linalg.norm(off, axis=(1, 2))) <= tol.tol_orth:
            return W
    return None


class QubitClass(enum.Enum):
    Identity = 1
    Diagonal = 2
    ThreeDim = 3
    Full = 4

    @property
    def alpha(self) -> int:
        return 2 if self.value <= 2 else 1

    @property
    def c0(self) -> float:
        return math.log2(self.alpha)


def classify_qubit_graph(S: NoncommutativeGraph) -> QubitClass:
    # Up to unitary equivalence the subspace dimension fixes the normal form:
    # 2 -> span{I, H} ~ span{I, Z}; 3 -> I plus a Bloch plane ~ span{I, Z, X}.
    if S.dim != 2:
        raise ValueError(f"qubit classification needs ambient dimension 2, got {S.dim}")
    return QubitClass(S.sdim)


def canonical_qubit_graphs() -> dict[QubitClass, NoncommutativeGraph]:
    return {
        QubitClass.Identity: NoncommutativeGraph.span([I2]),
        QubitClass.Diagonal: NoncommutativeGraph.span([I2, Z]),
        QubitClass.ThreeDim: NoncommutativeGraph.span([I2, Z, X]),
        QubitClass.Full: NoncommutativeGraph.span([I2, Z, X, Y]),
    }


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    return unitary_group.rvs(d, random_state=rng) if d > 1 else np.exp(2j * np.pi * rng.random()) * np.eye(1)


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (A + A.conj().T) / 2


def random_graph(d: int, extra: int, rng: np.random.Generator, tol: Tolerances = DEFAULT_TOL) -> NoncommutativeGraph:
    """Span of the identity and ``extra`` random Hermitian matrices."""
    return NoncommutativeGraph.span([np.eye(d)] + [random_hermitian(d, rng) for _ in range(extra)], tol)
