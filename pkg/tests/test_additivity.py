import dataclasses
import itertools
import math

import numpy as np
import pytest

from zecap.additivity import (ANY, Premise, Rule, SizeError, Verdict, audit_certificate, check_additivity,
                              numeric_multiplicativity_probe)
from zecap.channels import dephasing_bitflip, depolarizing, example3, example4, graph_of_channel, weyl_channel
from zecap.graphs import I2, X, Z, NoncommutativeGraph, random_graph
from zecap.rankone import SearchOptions

FAST = SearchOptions(restarts=8)
IZ = NoncommutativeGraph.span([I2, Z])
IZX = NoncommutativeGraph.span([I2, Z, X])
DEP = graph_of_channel(depolarizing(0.5))
EX3 = graph_of_channel(example3())
EX4 = graph_of_channel(example4())
GRAPHS = {"iz": IZ, "izx": IZX, "dep": DEP, "weyl3": graph_of_channel(weyl_channel(3)), "ex3": EX3, "ex4": EX4,
          "scalar2": NoncommutativeGraph.scalar(2)}


@pytest.mark.parametrize("name,rule", [("iz", Rule.DiagonalAlgebra), ("izx", Rule.QubitNontrivial),
                                       ("dep", Rule.FullAlgebra), ("weyl3", Rule.DiagonalAlgebra)])
def test_universal_rules(name, rule):
    cert = check_additivity(GRAPHS[name], ANY, FAST)
    assert cert.verdict is Verdict.AdditiveBoth and cert.rule is rule and cert.scope == "any"
    assert audit_certificate(cert, GRAPHS[name], None, FAST) == []


def test_dephasing_bitflip_with_depolarizing():
    S = graph_of_channel(dephasing_bitflip())
    cert = check_additivity(S, DEP, FAST)
    assert (cert.verdict, cert.rule) == (Verdict.AdditiveBoth, Rule.QubitNontrivial)
    assert cert.c0_sum == 0.0 and cert.c0_oneshot_sum == 0.0


def test_example3_with_depolarizing():
    cert = check_additivity(EX3, DEP, FAST)
    assert (cert.verdict, cert.rule) == (Verdict.AdditiveOneShot, Rule.BlockFullOffDiag)
    kinds = [p.kind for p in cert.premises]
    assert "offdiag_full" in kinds and {"kind": "alpha", "subject": "T", "value": 1} in \
        [p.to_dict() for p in cert.premises]
    assert cert.c0_sum is None and cert.c0_oneshot_sum == pytest.approx(1.0)
    assert audit_certificate(cert, EX3, DEP, FAST) == []


def test_example4_certificate_chain():
    cert = check_additivity(EX4, ANY, FAST)
    assert (cert.verdict, cert.rule, cert.scope) == (Verdict.AdditiveOneShot, Rule.BlockRankOneCorollary, "any")
    assert cert.chain() == [Rule.FullAlgebra, Rule.QubitNontrivial]
    rk = next(p for p in cert.premises if p.kind == "offdiag_complement_rank_one")
    assert rk.detail["dimension_criterion"] and rk.detail["residual"] <= 1e-9
    assert audit_certificate(cert, EX4, None, FAST) == []


def test_scalar_pair_by_direct_computation():
    S = NoncommutativeGraph.scalar(2)
    cert = check_additivity(S, S, FAST)
    assert (cert.verdict, cert.rule) == (Verdict.AdditiveBoth, Rule.DirectComputation)
    assert cert.c0_sum == pytest.approx(math.log2(4))
    assert audit_certificate(cert, S, S, FAST) == []


def test_unknown_when_no_rule_applies():
    cert = check_additivity(NoncommutativeGraph.scalar(3), ANY, FAST)
    assert cert.verdict is Verdict.Unknown and cert.rule is None and cert.premises == []
    G = random_graph(3, 1, np.random.default_rng(1))
    assert check_additivity(G, G, FAST).verdict is Verdict.Unknown


def test_block_sum_rule():
    # three 1-dimensional diagonal blocks: alpha(Sigma) = alpha(S_AA) + alpha(T_BB) once U vanishes
    S = NoncommutativeGraph.span([np.diag([1.0, 0, 0]), np.diag([0, 1.0, 0]), np.diag([0, 0, 1.0]),
                                  np.array([[0, 1.0, 0], [1.0, 0, 0], [0, 0, 0]])])
    cert = check_additivity(S, graph_of_channel(weyl_channel(2)), FAST)
    assert cert.additive and audit_certificate(cert, S, graph_of_channel(weyl_channel(2)), FAST) == []


def test_audit_detects_tampering():
    cert = check_additivity(EX3, DEP, FAST)
    forged = dataclasses.replace(cert, premises=[
        Premise(p.kind, p.subject, {**p.detail, "value": 2} if p.kind == "alpha" else p.detail, p.graph, p.evidence)
        for p in cert.premises])
    assert audit_certificate(forged, EX3, DEP, FAST)
    wrong_input = audit_certificate(check_additivity(IZX, ANY, FAST), IZ, None, FAST)
    assert wrong_input


def test_audit_rejects_unknown_premise_kind():
    cert = check_additivity(IZ, ANY, FAST)
    cert.premises.append(Premise("made_up", "S", {}))
    assert audit_certificate(cert, IZ, None, FAST)


PAIRS = list(itertools.combinations_with_replacement(sorted(GRAPHS), 2))


@pytest.mark.parametrize("a,b", PAIRS)
def test_additivity_is_symmetric_and_sound(a, b):
    S, T = GRAPHS[a], GRAPHS[b]
    c1, c2 = check_additivity(S, T, FAST), check_additivity(T, S, FAST)
    assert c1.additive == c2.additive
    for c, (x, y) in ((c1, (S, T)), (c2, (T, S))):
        if c.additive:
            assert audit_certificate(c, x, y, FAST) == []


def test_verdict_strength_depends_on_which_side_fires():
    # rules run on S first: a block rule on S wins over a universal rule on T
    assert check_additivity(EX3, DEP, FAST).verdict is Verdict.AdditiveOneShot
    assert check_additivity(DEP, EX3, FAST).verdict is Verdict.AdditiveBoth


@pytest.mark.parametrize("a,b", [("iz", "iz"), ("izx", "izx"), ("izx", "dep"), ("iz", "dep"), ("ex3", "izx")])
def test_probe_consistent_with_certificates(a, b):
    rep = numeric_multiplicativity_probe(GRAPHS[a], GRAPHS[b], FAST)
    assert rep.consistent
    assert rep.product_lower <= rep.tensor_lower <= rep.tensor_upper
    if rep.certificate.additive:
        assert rep.tensor_lower == rep.certified


def test_probe_example3_with_izx():
    rep = numeric_multiplicativity_probe(EX3, IZX, FAST)
    assert rep.certified == 2 and rep.tensor_lower >= 2


def test_probe_cap():
    with pytest.raises(SizeError):
        numeric_multiplicativity_probe(EX3, EX4, FAST)
    rep = numeric_multiplicativity_probe(IZ, IZ, FAST, max_tensor_dim=4)
    assert rep.to_dict()["tensor_upper"] == 4


def test_certificate_json_shape():
    d = check_additivity(EX4, ANY, FAST).to_dict()
    assert d["verdict"] == "AdditiveOneShot" and d["rule"] == "BlockRankOneCorollary"
    nested = [p["certificate"]["rule"] for p in d["premises"] if "certificate" in p]
    assert nested == ["FullAlgebra", "QubitNontrivial"]
    assert "c0_sum" not in d
