"""Rank-one operators inside operator subspaces.

Decides whether a subspace U of ``rows x cols`` matrices contains some
``v w^dagger``.  Absence is only ever reported when it is proven; a failed
search is reported as ``NotFoundHeuristic`` and must be read as "unknown".
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .linalg import OperatorSubspace, Tolerances, complement

__all__ = [
    "SearchOptions",
    "RankOneStatus",
    "RankOneVerdict",
    "find_rank_one",
    "dimension_criterion",
    "witness_residual",
    "restart_rng",
]

DEFAULT_SEED = 0x5EED


@dataclass(frozen=True)
class SearchOptions:
    restarts: int = 64
    max_iter: int = 500
    seed: int = DEFAULT_SEED
    tol: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if self.restarts < 1 or self.max_iter < 1:
            raise ValueError("restarts and max_iter must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


def restart_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for one restart; depends only on (seed, index)."""
    return np.random.default_rng([seed, index])


class RankOneStatus(enum.Enum):
    FoundWitness = "FoundWitness"
    ProvenAbsent = "ProvenAbsent"
    ProvenPresentNoWitness = "ProvenPresentNoWitness"
    NotFoundHeuristic = "NotFoundHeuristic"


@dataclass(frozen=True)
class RankOneVerdict:
    status: RankOneStatus
    v: Optional[np.ndarray] = None
    w: Optional[np.ndarray] = None
    residual: float = float("nan")
    proof_rule: Optional[str] = None

    @property
    def found(self) -> bool:
        return self.status is RankOneStatus.FoundWitness

    @property
    def present(self) -> bool:
        """True when a rank-one element is known to exist (witnessed or proven)."""
        return self.status in (RankOneStatus.FoundWitness, RankOneStatus.ProvenPresentNoWitness)

    def to_dict(self) -> dict:
        from .io import encode_vector

        out = {"status": self.status.value, "proof_rule": self.proof_rule,
               "residual": None if np.isnan(self.residual) else float(self.residual)}
        if self.found:
            out["v"] = encode_vector(self.v)
            out["w"] = encode_vector(self.w)
        return out


def dimension_criterion(rows: int, cols: int, dim_sub: int) -> bool:
    """True when every ``dim_sub``-dimensional subspace of rows x cols matrices must hold a rank-one element.

    A subspace without rank-one elements has dimension at most
    ``(rows - 1)(cols - 1)``, so exceeding that bound forces one.
    """
    if not 0 <= dim_sub <= rows * cols:
        raise ValueError(f"subspace dimension {dim_sub} out of range for {rows}x{cols} matrices")
    return dim_sub > (rows - 1) * (cols - 1)


def witness_residual(U: OperatorSubspace, v: np.ndarray, w: np.ndarray) -> float:
    """HS distance from the normalized ``v w^dagger`` to U."""
    v = v / np.linalg.norm(v)
    w = w / np.linalg.norm(w)
    M = np.outer(v, w.conj())
    if U.dim == 0:
        return float(np.linalg.norm(M))
    coeffs = np.einsum("kij,ij->k", U.basis.conj(), M)
    return float(np.linalg.norm(M - np.einsum("k,kij->ij", coeffs, U.basis)))


def _top_pair(M: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    u, s, vh = np.linalg.svd(M)
    return u[:, 0], vh[0].conj(), s


def _min_eigvec(A: np.ndarray) -> np.ndarray:
    # eigh sorts ascending; column 0 is the lowest-index minimizer on ties
    return np.linalg.eigh(A)[1][:, 0]


def _alternate(C: np.ndarray, v: np.ndarray, w: np.ndarray, max_iter: int, tol: float):
    """Minimize sum_j |v^dagger C_j w|^2 over unit v, w by alternating eigenvector updates.

    C is a basis of the complement, so the objective is the squared distance
    of ``v w^dagger`` to the subspace, computed without cancellation.
    """
    v = v / np.linalg.norm(v)
    w = w / np.linalg.norm(w)
    Ch = C.conj().transpose(0, 2, 1)
    g = np.inf
    slow = 0
    for _ in range(max_iter):
        K = C @ w                          # (J, rows)
        v = _min_eigvec(K.T @ K.conj())    # sum_j (C_j w)(C_j w)^dagger
        L = Ch @ v                         # (J, cols)
        w = _min_eigvec(L.T @ L.conj())
        g_new = float(np.sum(np.abs(L.conj() @ w) ** 2))
        if np.sqrt(max(g_new, 0.0)) <= tol:
            return v, w, g_new
        slow = slow + 1 if g - g_new <= 1e-7 * g else 0
        g = g_new
        if slow >= 20:
            break
    return v, w, g


def _search(U: OperatorSubspace, opts: SearchOptions):
    """Multi-start alternating search; returns (v, w, residual) of the merged best restart."""
    C = complement(U).basis
    tol = opts.tol.tol_converge
    best = None
    for r in range(opts.restarts):
        rng = restart_rng(opts.seed, r)
        if r == 0 and U.dim > 0:
            c = rng.standard_normal(U.dim) + 1j * rng.standard_normal(U.dim)
            v, w, _ = _top_pair(np.einsum("k,kij->ij", c, U.basis))
        else:
            v = rng.standard_normal(U.rows) + 1j * rng.standard_normal(U.rows)
            w = rng.standard_normal(U.cols) + 1j * rng.standard_normal(U.cols)
        v, w, g = _alternate(C, v, w, opts.max_iter, tol)
        res = np.sqrt(max(g, 0.0))
        if best is None or res < best[2]:
            best = (v, w, res)
        # first success in restart order is the merged answer, whatever the schedule
        if res <= tol:
            break
    return best


def _closed_form_2x2(U: OperatorSubspace):
    """Root of det(B0 + t B1) = 0 for two basis elements of a 2x2 subspace."""
    B0, B1 = U.basis[0], U.basis[1]
    a = np.linalg.det(B0)
    c = np.linalg.det(B1)
    b = B0[0, 0] * B1[1, 1] + B0[1, 1] * B1[0, 0] - B0[0, 1] * B1[1, 0] - B0[1, 0] * B1[0, 1]
    cands = [B1] if abs(c) < 1e-300 else [B0 + t * B1 for t in np.roots([c, b, a])]
    if abs(a) < 1e-300:
        cands.append(B0)
    best = None
    for M in cands:
        v, w, _ = _top_pair(M)
        res = witness_residual(U, v, w)
        if best is None or res < best[2]:
            best = (v, w, res)
    return best


def _polish(U, v, w, opts):
    C = complement(U).basis
    if C.shape[0] == 0:
        return v, w, witness_residual(U, v, w)
    v, w, _ = _alternate(C, v, w, 50, opts.tol.tol_converge)
    return v, w, witness_residual(U, v, w)


def find_rank_one(U: OperatorSubspace, opts: SearchOptions = SearchOptions()) -> RankOneVerdict:
    """Decide whether U contains a rank-one operator; the first conclusive rule wins."""
    tol = opts.tol
    if U.dim == 0:
        return RankOneVerdict(RankOneStatus.ProvenAbsent, proof_rule="zero_subspace")

    for B in U.basis:
        v, w, s = _top_pair(B)
        if len(s) == 1 or s[1] <= tol.tol_rank * s[0]:
            res = witness_residual(U, v, w)
            if res > tol.tol_orth:
                v, w, res = _polish(U, v, w, opts)
            if res <= tol.tol_orth:
                return RankOneVerdict(RankOneStatus.FoundWitness, v, w, res, "rank_one_basis_element")
    if U.dim == 1:
        return RankOneVerdict(RankOneStatus.ProvenAbsent, proof_rule="single_element_rank")

    if U.rows == 2 and U.cols == 2:
        v, w, res = _closed_form_2x2(U)
        if res > tol.tol_orth:
            v, w, res = _polish(U, v, w, opts)
        if res <= tol.tol_orth:
            return RankOneVerdict(RankOneStatus.FoundWitness, v, w, res, "determinant_2x2")

    guaranteed = dimension_criterion(U.rows, U.cols, U.dim)
    v, w, res = _search(U, opts)
    res = witness_residual(U, v, w)
    if res <= tol.tol_orth:
        return RankOneVerdict(RankOneStatus.FoundWitness, v / np.linalg.norm(v), w / np.linalg.norm(w), res,
                              "alternating_search")
    if guaranteed:
        return RankOneVerdict(RankOneStatus.ProvenPresentNoWitness, residual=res, proof_rule="dimension_criterion")
    return RankOneVerdict(RankOneStatus.NotFoundHeuristic, residual=res)
