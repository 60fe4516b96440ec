"""Independence numbers of noncommutative graphs: codewords, bounds, searches, exact values.

A codeword set for S is a list of unit vectors psi_1..psi_m with
``|psi_s><psi_t| ⟂ S`` for s != t.  Since I is in S the vectors are
orthonormal, so the ``m(m-1)`` outer products are orthonormal inside S^⟂;
that gives the pair-count upper bound used throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .graphs import (
    BlockGraph,
    NoncommutativeGraph,
    QubitClass,
    I2,
    X,
    Z,
    assemble_block,
    block_splits,
    classify_qubit_graph,
    detect_diagonal_algebra,
    hermitian_basis,
    tensor_graphs,
)
from .linalg import DEFAULT_TOL, Tolerances, complement
from .rankone import RankOneStatus, SearchOptions, find_rank_one, restart_rng

__all__ = [
    "CodewordSet",
    "CodewordCheck",
    "SearchOutcome",
    "AlphaResult",
    "InvalidCodewords",
    "verify_codewords",
    "alpha_upper_bound",
    "alpha_lower_search",
    "product_codewords",
    "compress_qubit_codewords",
    "block_alpha",
    "alpha_exact",
]


class InvalidCodewords(ValueError):
    """Codewords that do not satisfy a required orthogonality precondition."""


def canonical_phase(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate the global phase so the first non-negligible entry is real positive."""
    v = np.asarray(v, dtype=complex)
    idx = np.flatnonzero(np.abs(v) > tol * max(1.0, np.max(np.abs(v))))
    if idx.size == 0:
        return v
    z = v[idx[0]]
    return v * (abs(z) / z)


@dataclass
class CodewordSet:
    dim: int
    vectors: np.ndarray  # shape (m, dim)
    residual: float = 0.0

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=complex).reshape(-1, self.dim)

    def __len__(self):
        return self.vectors.shape[0]

    @classmethod
    def from_vectors(cls, vectors: Sequence, canonical: bool = True) -> "CodewordSet":
        vecs = [np.asarray(v, dtype=complex) / np.linalg.norm(v) for v in vectors]
        if canonical:
            vecs = [canonical_phase(v) for v in vecs]
        return cls(len(vecs[0]), np.array(vecs))

    @classmethod
    def trivial(cls, d: int) -> "CodewordSet":
        e = np.zeros((1, d), dtype=complex)
        e[0, 0] = 1.0
        return cls(d, e)

    def to_dict(self) -> dict:
        from .io import encode_vector

        return {"dim": self.dim, "vectors": [encode_vector(v) for v in self.vectors]}


@dataclass(frozen=True)
class CodewordCheck:
    ok: bool
    residual: float
    pair: Optional[tuple[int, int]] = None  # first offending pair when not ok

    def __bool__(self):
        return self.ok


def pair_residuals(S: NoncommutativeGraph, vectors: np.ndarray) -> np.ndarray:
    """Matrix of ``||P_S(|psi_s><psi_t|)||`` (diagonal zeroed)."""
    V = np.asarray(vectors, dtype=complex)
    G = np.einsum("si,kij,tj->kst", V.conj(), S.basis, V)
    R = np.sqrt(np.sum(np.abs(G) ** 2, axis=0))
    np.fill_diagonal(R, 0.0)
    return R


def verify_codewords(S: NoncommutativeGraph, cs: CodewordSet, tol: Tolerances = DEFAULT_TOL) -> CodewordCheck:
    if cs.dim != S.dim:
        raise ValueError(f"codeword length {cs.dim} differs from graph dimension {S.dim}")
    norms = np.linalg.norm(cs.vectors, axis=1)
    for s, n in enumerate(norms):
        if abs(n - 1) > tol.tol_orth:
            return CodewordCheck(False, abs(n - 1), (s, s))
    if len(cs) < 2:
        return CodewordCheck(True, 0.0)
    R = pair_residuals(S, cs.vectors)
    worst = float(R.max())
    bad = np.argwhere(R > tol.tol_orth)
    if bad.size:
        s, t = bad[0]
        return CodewordCheck(False, worst, (int(s), int(t)))
    return CodewordCheck(True, worst)


def pair_count_bound(dim_perp: int) -> int:
    """Largest m with m(m-1) <= dim_perp."""
    m = (1 + math.isqrt(1 + 4 * dim_perp)) // 2
    while m * (m - 1) > dim_perp:
        m -= 1
    while (m + 1) * m <= dim_perp:
        m += 1
    return m


def alpha_upper_bound(S: NoncommutativeGraph) -> int:
    return min(S.dim, pair_count_bound(S.dim * S.dim - S.sdim))


@dataclass
class SearchOutcome:
    found: bool
    residual: float
    codewords: Optional[CodewordSet] = None
    restart: Optional[int] = None


def _random_orthonormal(rng, d: int, m: int) -> np.ndarray:
    A = rng.standard_normal((d, m)) + 1j * rng.standard_normal((d, m))
    Q, _ = np.linalg.qr(A)
    return Q.T.copy()  # rows are vectors


def _quad(blocks: Sequence[np.ndarray]) -> np.ndarray:
    """Sum of y y^dagger over all rows y of the given arrays."""
    Y = np.concatenate([b.reshape(-1, b.shape[-1]) for b in blocks])
    return Y.T @ Y.conj()


def _min_eigvec(A: np.ndarray) -> np.ndarray:
    return np.linalg.eigh(A)[1][:, 0]


def _seesaw_codewords(B: np.ndarray, Psi: np.ndarray, max_iter: int, tol: float):
    """Cyclic minimal-eigenvector updates of R = sum_{s<t} ||P_S(psi_s psi_t^dagger)||^2."""
    Bh = B.conj().transpose(0, 2, 1)
    m = Psi.shape[0]
    R = np.inf
    slow = 0
    for _ in range(max_iter):
        for s in range(m):
            others = np.delete(Psi, s, axis=0)
            Y1 = np.einsum("kij,tj->tki", B, others)
            Y2 = np.einsum("kij,tj->tki", Bh, others)
            Psi[s] = _min_eigvec(_quad([Y1, Y2]) / 2)
        G = np.einsum("si,kij,tj->kst", Psi.conj(), B, Psi)
        R_new = float(np.sum(np.abs(G[:, np.triu_indices(m, 1)[0], np.triu_indices(m, 1)[1]]) ** 2))
        if math.sqrt(max(R_new, 0.0)) <= tol:
            return Psi, R_new
        slow = slow + 1 if R - R_new <= 1e-7 * R_new else 0
        R = R_new
        if slow >= 20:
            break
    return Psi, R


def alpha_lower_search(S: NoncommutativeGraph, m: int, opts: SearchOptions = SearchOptions()) -> SearchOutcome:
    """Multi-start search for m codewords of S.

    Never proves impossibility: a failure only carries the best residual.
    """
    d = S.dim
    if m < 1:
        raise ValueError("target size must be positive")
    if m == 1:
        return SearchOutcome(True, 0.0, CodewordSet.trivial(d), 0)
    if m > d:
        return SearchOutcome(False, float("inf"))
    B = np.asarray(S.basis)
    best = math.inf
    for r in range(opts.restarts):
        rng = restart_rng(opts.seed, r)
        Psi, R = _seesaw_codewords(B, _random_orthonormal(rng, d, m), opts.max_iter, opts.tol.tol_converge)
        cs = CodewordSet.from_vectors(Psi)
        check = verify_codewords(S, cs, opts.tol)
        if check.ok:
            cs.residual = check.residual
            return SearchOutcome(True, check.residual, cs, r)
        best = min(best, math.sqrt(max(R, 0.0)))
    return SearchOutcome(False, best)


def product_codewords(csS: CodewordSet, csT: CodewordSet) -> CodewordSet:
    vecs = np.einsum("ai,bj->abij", csS.vectors, csT.vectors).reshape(len(csS) * len(csT), csS.dim * csT.dim)
    return CodewordSet(csS.dim * csT.dim, vecs, max(csS.residual, csT.residual))


_QUBIT_THREE = None


def _three_dim_qubit() -> NoncommutativeGraph:
    global _QUBIT_THREE
    if _QUBIT_THREE is None:
        _QUBIT_THREE = NoncommutativeGraph.span([I2, Z, X])
    return _QUBIT_THREE


def compress_qubit_codewords(T: NoncommutativeGraph, cs: CodewordSet,
                             tol: Tolerances = DEFAULT_TOL) -> CodewordSet:
    """Turn codewords of span{I, Z, X} (x) T into the same number of codewords of T.

    Each psi_i is split as |0>|v_i> + |1>|w_i>; the output keeps v_i, or w_i
    when v_i vanishes.  If round-off makes some v_i tiny but nonzero, the
    qubit factor is first rotated by a real rotation exp(-i theta Y / 2),
    which maps span{I, Z, X} onto itself and so preserves the codeword
    conditions, to keep every v_i well away from zero.
    """
    n = T.dim
    if cs.dim != 2 * n:
        raise InvalidCodewords(f"codewords live in C^{cs.dim}, expected C^{2 * n}")
    ST = tensor_graphs(_three_dim_qubit(), T)
    pre = verify_codewords(ST, cs, tol)
    if not pre.ok:
        raise InvalidCodewords(f"codewords do not verify on span{{I,Z,X}} (x) T (pair {pre.pair}, residual {pre.residual:.3g})")

    def split(psi_rows):
        out = []
        for psi in psi_rows:
            v, w = psi[:n], psi[n:]
            out.append(v if np.linalg.norm(v) > tol.tol_orth else w)
        return CodewordSet.from_vectors(out)

    Psi = cs.vectors.reshape(len(cs), 2, n)
    phi = split(Psi.reshape(len(cs), 2 * n))
    check = verify_codewords(T, phi, tol)
    if not check.ok:
        thetas = np.linspace(0, np.pi, 181)
        scores = [np.min(np.linalg.norm(np.cos(t / 2) * Psi[:, 0] - np.sin(t / 2) * Psi[:, 1], axis=1))
                  for t in thetas]
        t = thetas[int(np.argmax(scores))]
        c, s = np.cos(t / 2), np.sin(t / 2)
        rot = np.stack([c * Psi[:, 0] - s * Psi[:, 1], s * Psi[:, 0] + c * Psi[:, 1]], axis=1)
        phi = split(rot.reshape(len(cs), 2 * n))
        check = verify_codewords(T, phi, tol)
    phi.residual = check.residual
    return phi


@dataclass
class AlphaResult:
    lower: int
    upper: int
    exact: Optional[int] = None
    method: list[str] = field(default_factory=list)
    witness: Optional[CodewordSet] = None
    split: Optional[tuple[list, list]] = None  # block witnesses: vectors in A, vectors in B

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"inconsistent bounds {self.lower} > {self.upper}")

    @property
    def c0_oneshot(self) -> Optional[float]:
        return None if self.exact is None else math.log2(self.exact)

    def to_dict(self) -> dict:
        out = {"lower": self.lower, "upper": self.upper, "exact": self.exact,
               "c0_oneshot": self.c0_oneshot, "method": list(self.method),
               "witness": None if self.witness is None else self.witness.to_dict()}
        if self.split is not None:
            from .io import encode_vector

            out["split"] = {"A": [encode_vector(v) for v in self.split[0]],
                            "B": [encode_vector(w) for w in self.split[1]]}
        return out


def _fixed(value: int, method: list[str], witness: CodewordSet, **kw) -> AlphaResult:
    return AlphaResult(value, value, value, method, witness, **kw)


def _embed(vecs, d: int, offset: int) -> list[np.ndarray]:
    out = []
    for v in vecs:
        x = np.zeros(d, dtype=complex)
        x[offset:offset + len(v)] = v
        out.append(x)
    return out


def _block_search(bg: BlockGraph, kA: int, kB: int, opts: SearchOptions):
    """Alternating search for kA vectors in A and kB in B meeting the three block conditions."""
    SA, TB, U = bg.S.basis, bg.T.basis, bg.U.basis
    SAh, TBh = SA.conj().transpose(0, 2, 1), TB.conj().transpose(0, 2, 1)
    Uh = U.conj().transpose(0, 2, 1)
    tol = opts.tol.tol_converge

    def objective(V, W):
        r = 0.0
        if kA > 1:
            G = np.einsum("si,kij,tj->kst", V.conj(), SA, V)
            r += float(np.sum(np.abs(G) ** 2) - np.sum(np.abs(np.einsum("kss->ks", G)) ** 2)) / 2
        if kB > 1:
            G = np.einsum("si,kij,tj->kst", W.conj(), TB, W)
            r += float(np.sum(np.abs(G) ** 2) - np.sum(np.abs(np.einsum("kss->ks", G)) ** 2)) / 2
        if U.shape[0]:
            r += float(np.sum(np.abs(np.einsum("pi,kij,qj->kpq", V.conj(), U, W)) ** 2))
        return max(r, 0.0)

    for r in range(opts.restarts):
        rng = restart_rng(opts.seed, r)
        V = _random_orthonormal(rng, bg.dimA, kA) if kA else np.zeros((0, bg.dimA), complex)
        W = _random_orthonormal(rng, bg.dimB, kB) if kB else np.zeros((0, bg.dimB), complex)
        R = math.inf
        slow = 0
        for _ in range(opts.max_iter):
            for i in range(kA):
                others = np.delete(V, i, axis=0)
                blocks = [np.einsum("kij,tj->tki", SA, others), np.einsum("kij,tj->tki", SAh, others)]
                Q = _quad(blocks) / 2 if len(others) else np.zeros((bg.dimA, bg.dimA), complex)
                if kB and U.shape[0]:
                    Q = Q + _quad([np.einsum("kij,tj->tki", U, W)])
                V[i] = _min_eigvec(Q)
            for s in range(kB):
                others = np.delete(W, s, axis=0)
                blocks = [np.einsum("kij,tj->tki", TB, others), np.einsum("kij,tj->tki", TBh, others)]
                Q = _quad(blocks) / 2 if len(others) else np.zeros((bg.dimB, bg.dimB), complex)
                if kA and U.shape[0]:
                    Q = Q + _quad([np.einsum("kij,tj->tki", Uh, V)])
                W[s] = _min_eigvec(Q)
            R_new = objective(V, W)
            if math.sqrt(R_new) <= tol:
                R = R_new
                break
            slow = slow + 1 if R - R_new <= 1e-7 * R_new else 0
            R = R_new
            if slow >= 20:
                break
        vecs = _embed(V, bg.dim, 0) + _embed(W, bg.dim, bg.dimA)
        cs = CodewordSet.from_vectors(vecs)
        check = verify_codewords(assemble_block(bg), cs, opts.tol)
        if check.ok:
            cs.residual = check.residual
            return cs, [canonical_phase(v) for v in V], [canonical_phase(w) for w in W]
    return None


def block_alpha(bg: BlockGraph, opts: SearchOptions = SearchOptions()) -> AlphaResult:
    """Independence number of a block graph through single-block codewords.

    Codewords can be taken to live entirely in A or entirely in B, so the
    parts bound alpha from above by alpha(S_AA) + alpha(T_BB).
    """
    d = bg.dim
    Sigma = assemble_block(bg)
    aS = alpha_exact(bg.S, opts)
    aT = alpha_exact(bg.T, opts)
    method = ["block_split"]
    upper = min(aS.upper + aT.upper, alpha_upper_bound(Sigma))

    def from_parts(vA, wB, tags):
        vecs = _embed(vA, d, 0) + _embed(wB, d, bg.dimA)
        cs = CodewordSet.from_vectors(vecs)
        check = verify_codewords(Sigma, cs, opts.tol)
        if not check.ok:
            return None
        cs.residual = check.residual
        return cs, (list(vA), list(wB)), tags

    # best witness so far: the larger part witness embedded in its block
    if aS.lower >= aT.lower:
        best = from_parts(aS.witness.vectors, [], ["part_witness"])
    else:
        best = from_parts([], aT.witness.vectors, ["part_witness"])
    lower = len(best[0].vectors)

    if bg.U.dim == 0 and aS.exact is not None and aT.exact is not None:
        got = from_parts(aS.witness.vectors, aT.witness.vectors, ["zero_offdiag_sum"])
        if got is not None:
            cs, split, tags = got
            return _fixed(len(cs), method + tags, cs, split=split)

    verdict = find_rank_one(complement(bg.U), opts)
    if verdict.status is RankOneStatus.ProvenAbsent:
        method.append("offdiag_complement_no_rank_one")
        if aS.exact is not None and aT.exact is not None:
            cs, split, _ = best
            return _fixed(max(aS.exact, aT.exact), method + ["part_max"], cs, split=split)
        upper = min(upper, max(aS.upper, aT.upper))
    elif verdict.found and lower < 2:
        got = from_parts([verdict.v], [verdict.w], ["offdiag_complement_rank_one"])
        if got is not None:
            best = got
            lower = 2

    if lower < upper:
        for m in range(upper, lower, -1):
            hit = None
            for kA in range(min(m, aS.upper), -1, -1):
                kB = m - kA
                if kB > aT.upper:
                    break
                found = _block_search(bg, kA, kB, opts)
                if found is not None:
                    hit = (found[0], (found[1], found[2]), [f"block_search_{kA}+{kB}"])
                    break
            if hit is not None:
                best, lower = hit, m
                break

    cs, split, tags = best
    method += tags
    if lower == upper:
        method.append("bounds_meet")
        return _fixed(lower, method, cs, split=split)
    return AlphaResult(lower, upper, None, method, cs, split=split)


def _witness_or_trivial(S, vecs, opts) -> Optional[CodewordSet]:
    cs = CodewordSet.from_vectors(vecs)
    check = verify_codewords(S, cs, opts.tol)
    if not check.ok:
        return None
    cs.residual = check.residual
    return cs


def _qubit_witness(S: NoncommutativeGraph, cls: QubitClass, opts) -> CodewordSet:
    if cls is QubitClass.Identity:
        return _witness_or_trivial(S, np.eye(2), opts)
    if cls is QubitClass.Diagonal:
        H = hermitian_basis(S, opts.tol)
        H = H - np.einsum("kii->k", H)[:, None, None] * np.eye(2) / 2
        H = H[np.argmax(np.linalg.norm(H, axis=(1, 2)))]
        _, W = np.linalg.eigh(H)
        return _witness_or_trivial(S, W.T, opts)
    return CodewordSet.trivial(2)


def alpha_exact(S: NoncommutativeGraph, opts: SearchOptions = SearchOptions(),
                shortcuts: bool = True) -> AlphaResult:
    """Independence number of S, exact when some rule or the bound/search gap closes.

    With ``shortcuts=False`` only the pair-count bound and the codeword
    search are used.
    """
    d = S.dim
    tol = opts.tol
    upper = alpha_upper_bound(S)
    if upper == 1:
        tags = ["full_algebra"] if shortcuts and S.is_full() else []
        return _fixed(1, ["pair_count_bound"] + tags, CodewordSet.trivial(d))
    if shortcuts:
        if d == 2:
            cls = classify_qubit_graph(S)
            w = _qubit_witness(S, cls, opts)
            if w is not None and len(w) == cls.alpha:
                return _fixed(cls.alpha, ["qubit_classification", cls.name], w)
        if S.is_scalar():
            return _fixed(d, ["scalar_graph"], CodewordSet.from_vectors(np.eye(d)))
        W = detect_diagonal_algebra(S, tol, opts.seed)
        if W is not None:
            w = _witness_or_trivial(S, W.T, opts)
            if w is not None:
                return _fixed(d, ["diagonal_algebra"], w)

    method = []
    lower, witness = 1, CodewordSet.trivial(d)

    if shortcuts:
        verdict = find_rank_one(complement(S.subspace), opts)
        if verdict.status is RankOneStatus.ProvenAbsent:
            return _fixed(1, ["complement_no_rank_one"], witness)
        if verdict.found:
            w = _witness_or_trivial(S, [verdict.v, verdict.w], opts)
            if w is not None:
                lower, witness = 2, w
                method.append("complement_rank_one")
        if lower == upper:
            return _fixed(lower, method + ["pair_count_bound"], witness)

        for bg in block_splits(S, tol):
            res = block_alpha(bg, opts)
            tag = f"block_{bg.dimA}+{bg.dimB}"
            if res.exact is not None:
                return _fixed(res.exact, method + [tag] + res.method, res.witness)
            if res.lower > lower:
                lower, witness = res.lower, res.witness
                method.append(tag)
            upper = min(upper, res.upper)
            if lower == upper:
                return _fixed(lower, method + ["bounds_meet"], witness)

    method.append("pair_count_bound")
    for m in range(upper, lower, -1):
        out = alpha_lower_search(S, m, opts)
        if out.found:
            lower, witness = m, out.codewords
            method.append("codeword_search")
            break
    if lower == upper:
        return _fixed(lower, method + ["bounds_meet"], witness)
    return AlphaResult(lower, upper, None, method, witness)
