"""Additivity certificates for the one-shot (and, where granted, asymptotic) zero-error capacity.

A certificate names the sufficient condition that fired and carries its
premises as checkable evidence: graphs, unitaries, witnesses and nested
certificates.  ``audit_certificate`` re-derives every premise from scratch.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Optional, Union

import numpy as np

from .graphs import (
    BlockGraph,
    NoncommutativeGraph,
    QubitClass,
    block_splits,
    classify_qubit_graph,
    decompose_block,
    detect_diagonal_algebra,
    tensor_graphs,
)
from .independence import (
    alpha_exact,
    alpha_lower_search,
    alpha_upper_bound,
    block_alpha,
    product_codewords,
    verify_codewords,
)
from .linalg import complement
from .rankone import SearchOptions, dimension_criterion, find_rank_one, witness_residual

__all__ = [
    "ANY",
    "Verdict",
    "Rule",
    "Premise",
    "AdditivityCertificate",
    "check_additivity",
    "audit_certificate",
    "ProbeReport",
    "SizeError",
    "numeric_multiplicativity_probe",
]


class _AnyPartner:
    def __repr__(self):
        return "ANY"


ANY = _AnyPartner()
Partner = Union[NoncommutativeGraph, _AnyPartner]


class Verdict(enum.Enum):
    AdditiveBoth = "AdditiveBoth"
    AdditiveOneShot = "AdditiveOneShot"
    Unknown = "Unknown"


class Rule(enum.Enum):
    FullAlgebra = "FullAlgebra"
    DiagonalAlgebra = "DiagonalAlgebra"
    QubitNontrivial = "QubitNontrivial"
    BlockSumRule = "BlockSumRule"
    BlockFullOffDiag = "BlockFullOffDiag"
    BlockRankOneCorollary = "BlockRankOneCorollary"
    DirectComputation = "DirectComputation"


@dataclass
class Premise:
    kind: str
    subject: str
    detail: dict
    graph: Any = field(default=None, repr=False)
    evidence: Any = field(default=None, repr=False)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "subject": self.subject, **self.detail}
        if isinstance(self.evidence, AdditivityCertificate):
            out["certificate"] = self.evidence.to_dict()
        return out


@dataclass
class AdditivityCertificate:
    verdict: Verdict
    rule: Optional[Rule]
    scope: str  # "any" or "specific"
    premises: list[Premise] = field(default_factory=list)
    subject: Optional[str] = None  # which input graph the rule was applied to
    alpha_S: Optional[int] = None
    alpha_T: Optional[int] = None
    c0_oneshot_sum: Optional[float] = None
    c0_sum: Optional[float] = None

    @property
    def additive(self) -> bool:
        return self.verdict is not Verdict.Unknown

    def chain(self) -> list[Rule]:
        """Rules of the nested part certificates, in premise order."""
        return [p.evidence.rule for p in self.premises if isinstance(p.evidence, AdditivityCertificate)]

    def to_dict(self) -> dict:
        out = {"verdict": self.verdict.value, "rule": None if self.rule is None else self.rule.value,
               "scope": self.scope, "subject": self.subject,
               "premises": [p.to_dict() for p in self.premises]}
        if self.alpha_S is not None:
            out["alpha_S"] = self.alpha_S
        if self.alpha_T is not None:
            out["alpha_T"] = self.alpha_T
        if self.c0_oneshot_sum is not None:
            out["c0_oneshot_sum"] = self.c0_oneshot_sum
        if self.c0_sum is not None:
            out["c0_sum"] = self.c0_sum
        return out


def _pinned_c0(S: NoncommutativeGraph, opts: SearchOptions) -> Optional[float]:
    """Asymptotic capacity when a certified rule pins it to the one-shot value."""
    if S.is_full():
        return 0.0
    if S.is_scalar():
        return math.log2(S.dim)
    if S.dim == 2:
        return classify_qubit_graph(S).c0
    if detect_diagonal_algebra(S, opts.tol, opts.seed) is not None:
        return math.log2(S.dim)
    return None


def _universal_rules(X: NoncommutativeGraph, xl: str, opts: SearchOptions) -> Optional[AdditivityCertificate]:
    if X.is_full():
        return AdditivityCertificate(Verdict.AdditiveBoth, Rule.FullAlgebra, "any",
                                     [Premise("full_algebra", xl, {"dim": X.dim, "subspace_dim": X.sdim}, X)], xl)
    W = detect_diagonal_algebra(X, opts.tol, opts.seed)
    if W is not None:
        return AdditivityCertificate(Verdict.AdditiveBoth, Rule.DiagonalAlgebra, "any",
                                     [Premise("diagonal_algebra", xl, {"m": X.dim}, X, W)], xl)
    if X.dim == 2 and not X.is_scalar():
        cls = classify_qubit_graph(X)
        return AdditivityCertificate(Verdict.AdditiveBoth, Rule.QubitNontrivial, "any",
                                     [Premise("qubit_class", xl, {"class": cls.name, "alpha": cls.alpha}, X)], xl)
    return None


def _part_premises(bg: BlockGraph, Y: Partner, xl: str, yl: str, opts, depth: int):
    """Multiplicativity of both diagonal blocks with the partner, or None."""
    out = []
    for part, tag in ((bg.S, "A"), (bg.T, "B")):
        sub = _check(part, Y, f"{xl}.{tag}", yl, opts, depth + 1)
        if not sub.additive:
            return None
        out.append(Premise("multiplicative", f"{xl}.{tag}", {"partner": yl}, part, sub))
    return out


def _block_rules(X: NoncommutativeGraph, Y: Partner, xl: str, yl: str, opts: SearchOptions,
                 depth: int) -> Optional[AdditivityCertificate]:
    scope = "any" if Y is ANY else "specific"
    for bg in block_splits(X, opts.tol):
        decomp = Premise("block_decomposition", xl,
                         {"dimA": bg.dimA, "dimB": bg.dimB, "dim_S": bg.S.sdim, "dim_T": bg.T.sdim,
                          "dim_U": bg.U.dim}, X, bg)
        aS = alpha_exact(bg.S, opts)
        aT = alpha_exact(bg.T, opts)

        # alpha(S_AA) = alpha(T_BB) = 1 and a rank-one operator orthogonal to U
        if aS.exact == 1 and aT.exact == 1:
            Uperp = complement(bg.U)
            verdict = find_rank_one(Uperp, opts)
            crit = dimension_criterion(bg.dimA, bg.dimB, Uperp.dim)
            if verdict.present or crit:
                parts = _part_premises(bg, Y, xl, yl, opts, depth)
                if parts is not None:
                    detail = {"dim_complement": Uperp.dim, "dimension_criterion": crit,
                              "bound": (bg.dimA - 1) * (bg.dimB - 1), "status": verdict.status.value}
                    if verdict.found:
                        detail["residual"] = verdict.residual
                    ev = (verdict.v, verdict.w) if verdict.found else None
                    prem = [decomp,
                            Premise("alpha", f"{xl}.A", {"value": 1}, bg.S),
                            Premise("alpha", f"{xl}.B", {"value": 1}, bg.T),
                            Premise("offdiag_complement_rank_one", f"{xl}.U", detail, bg.U, ev)] + parts
                    return AdditivityCertificate(Verdict.AdditiveOneShot, Rule.BlockRankOneCorollary, scope, prem, xl)

        # full off-diagonal block and a partner with alpha = 1
        if bg.offdiag_full() and Y is not ANY:
            aY = alpha_exact(Y, opts)
            if aY.exact == 1:
                parts = _part_premises(bg, Y, xl, yl, opts, depth)
                if parts is not None:
                    prem = [decomp,
                            Premise("offdiag_full", f"{xl}.U", {"dim_U": bg.U.dim}, bg),
                            Premise("alpha", yl, {"value": 1}, Y)] + parts
                    return AdditivityCertificate(Verdict.AdditiveOneShot, Rule.BlockFullOffDiag, scope, prem, xl)

        # alpha(Sigma) = alpha(S_AA) + alpha(T_BB)
        if aS.exact is not None and aT.exact is not None:
            aX = block_alpha(bg, opts)
            if aX.exact is not None and aX.exact == aS.exact + aT.exact:
                parts = _part_premises(bg, Y, xl, yl, opts, depth)
                if parts is not None:
                    prem = [decomp,
                            Premise("alpha", xl, {"value": aX.exact}, X),
                            Premise("alpha", f"{xl}.A", {"value": aS.exact}, bg.S),
                            Premise("alpha", f"{xl}.B", {"value": aT.exact}, bg.T)] + parts
                    return AdditivityCertificate(Verdict.AdditiveOneShot, Rule.BlockSumRule, scope, prem, xl)
    return None


def _check(S: NoncommutativeGraph, T: Partner, sl: str, tl: str, opts: SearchOptions,
           depth: int = 0) -> AdditivityCertificate:
    sides = [(S, T, sl, tl)]
    if T is not ANY:
        sides.append((T, S, tl, sl))
    for X, Y, xl, yl in sides:
        cert = _universal_rules(X, xl, opts)
        if cert is None and depth < 8:
            cert = _block_rules(X, Y, xl, yl, opts, depth)
        if cert is not None:
            return cert
    if T is not ANY and S.is_scalar() and T.is_scalar():
        return AdditivityCertificate(Verdict.AdditiveBoth, Rule.DirectComputation, "specific",
                                     [Premise("scalar_graph", sl, {"dim": S.dim}, S),
                                      Premise("scalar_graph", tl, {"dim": T.dim}, T)], None)
    return AdditivityCertificate(Verdict.Unknown, None, "any" if T is ANY else "specific")


def check_additivity(S: NoncommutativeGraph, T: Partner = ANY,
                     opts: SearchOptions = SearchOptions()) -> AdditivityCertificate:
    """Certify multiplicativity of alpha for S and T (or for S and every partner).

    Rules are tried on S first and then on T; within one graph, rules that
    hold for every partner come before partner-specific block rules.
    """
    cert = _check(S, T, "S", "T", opts)
    if not cert.additive:
        return cert
    aS = alpha_exact(S, opts).exact
    cert.alpha_S = aS
    if T is ANY:
        return cert
    aT = alpha_exact(T, opts).exact
    cert.alpha_T = aT
    if aS is not None and aT is not None:
        cert.c0_oneshot_sum = math.log2(aS) + math.log2(aT)
    if cert.verdict is Verdict.AdditiveBoth:
        cS, cT = _pinned_c0(S, opts), _pinned_c0(T, opts)
        if cS is not None and cT is not None:
            cert.c0_sum = cS + cT
    return cert


def audit_certificate(cert: AdditivityCertificate, S: Optional[NoncommutativeGraph] = None,
                      T: Optional[NoncommutativeGraph] = None,
                      opts: SearchOptions = SearchOptions()) -> list[str]:
    """Re-derive every premise; returns the list of failures (empty when sound)."""
    tol = opts.tol
    failures = []
    inputs = {"S": S, "T": T}
    for p in cert.premises:
        where = f"{p.kind}[{p.subject}]"
        given = inputs.get(p.subject)
        if isinstance(given, NoncommutativeGraph) and isinstance(p.graph, NoncommutativeGraph):
            if not given.same_as(p.graph):
                failures.append(f"{where}: premise graph differs from input")
        g = p.graph
        if p.kind == "full_algebra":
            ok = g.is_full()
        elif p.kind == "diagonal_algebra":
            W = p.evidence
            D = np.einsum("ji,kjl,lm->kim", W.conj(), g.basis, W)
            off = D - np.einsum("kii->ki", D)[:, :, None] * np.eye(g.dim)
            ok = (g.sdim == g.dim and np.allclose(W.conj().T @ W, np.eye(g.dim), atol=tol.tol_orth)
                  and float(np.max(np.linalg.norm(off, axis=(1, 2)))) <= tol.tol_orth)
        elif p.kind == "qubit_class":
            ok = g.dim == 2 and classify_qubit_graph(g).name == p.detail["class"] \
                and classify_qubit_graph(g) is not QubitClass.Identity
        elif p.kind == "scalar_graph":
            ok = g.is_scalar()
        elif p.kind == "block_decomposition":
            bg = p.evidence
            again = decompose_block(g, bg.dimA, tol)
            ok = again.S.same_as(bg.S) and again.T.same_as(bg.T) and again.U.same_as(bg.U)
        elif p.kind == "alpha":
            ok = alpha_exact(g, opts).exact == p.detail["value"]
        elif p.kind == "offdiag_full":
            ok = g.offdiag_full()
        elif p.kind == "offdiag_complement_rank_one":
            Uperp = complement(g)
            if p.evidence is not None:
                v, w = p.evidence
                ok = witness_residual(Uperp, v, w) <= tol.tol_orth
            else:
                ok = dimension_criterion(g.rows, g.cols, Uperp.dim)
        elif p.kind == "multiplicative":
            sub = p.evidence
            ok = sub.additive and not audit_certificate(sub, opts=opts)
        else:
            ok = False
        if not ok:
            failures.append(f"{where}: does not re-verify")
    return failures


class SizeError(ValueError):
    """Tensor product too large for a numerical probe."""


@dataclass
class ProbeReport:
    product_lower: int
    search_lower: int
    tensor_lower: int
    tensor_upper: int
    certified: Optional[int]
    consistent: bool
    residual: float
    certificate: AdditivityCertificate

    def to_dict(self) -> dict:
        return {"product_lower": self.product_lower, "search_lower": self.search_lower,
                "tensor_lower": self.tensor_lower, "tensor_upper": self.tensor_upper,
                "certified_alpha": self.certified, "consistent": self.consistent,
                "residual": self.residual, "certificate": self.certificate.to_dict()}


def numeric_multiplicativity_probe(S: NoncommutativeGraph, T: NoncommutativeGraph,
                                   opts: SearchOptions = SearchOptions(),
                                   max_tensor_dim: int = 16) -> ProbeReport:
    """Compare product codewords, a direct codeword search on S (x) T, and the pair-count bound.

    The search first confirms the product size, then climbs one codeword at a
    time until it fails or reaches the bound.  Diagnostic only: it never
    feeds a certificate.
    """
    if S.dim * T.dim > max_tensor_dim:
        raise SizeError(f"tensor dimension {S.dim * T.dim} exceeds cap {max_tensor_dim}")
    aS, aT = alpha_exact(S, opts), alpha_exact(T, opts)
    ST = tensor_graphs(S, T)
    prod = product_codewords(aS.witness, aT.witness)
    check = verify_codewords(ST, prod, opts.tol)
    product_lower = len(prod) if check.ok else 1
    upper = alpha_upper_bound(ST)

    search_lower, residual = 0, check.residual
    m = product_lower
    while m <= upper:
        out = alpha_lower_search(ST, m, opts)
        if not out.found:
            break
        search_lower, residual = m, max(residual, out.residual)
        m += 1
    tensor_lower = max(product_lower, search_lower)

    cert = check_additivity(S, T, opts)
    certified = None
    if cert.additive and aS.exact is not None and aT.exact is not None:
        certified = aS.exact * aT.exact
    consistent = product_lower <= tensor_lower <= upper
    if certified is not None:
        consistent = consistent and tensor_lower == certified
    return ProbeReport(product_lower, search_lower, tensor_lower, upper, certified, consistent, residual, cert)
