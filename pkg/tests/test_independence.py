import numpy as np
import pytest
from hypothesis import given, strategies as st

from zecap.channels import depolarizing, example3, example4, graph_of_channel, weyl_channel
from zecap.graphs import (I2, X, Z, BlockGraph, NoncommutativeGraph, decompose_block,
                          random_graph, random_unitary, tensor_graphs)
from zecap.independence import (CodewordSet, InvalidCodewords, alpha_exact, alpha_lower_search, alpha_upper_bound,
                                block_alpha, canonical_phase, compress_qubit_codewords, pair_count_bound,
                                pair_residuals, product_codewords, verify_codewords)
from zecap.linalg import OperatorSubspace, hs_inner, orthonormalize_span
from zecap.rankone import SearchOptions

seeds = st.integers(0, 2**32 - 1)
FAST = SearchOptions(restarts=8)
IZ = NoncommutativeGraph.span([I2, Z])
IZX = NoncommutativeGraph.span([I2, Z, X])


def brute_pair_bound(n):
    return max(m for m in range(1, n + 2) if m * (m - 1) <= n)


@given(st.integers(0, 10_000))
def test_pair_count_bound_matches_brute_force(n):
    assert pair_count_bound(n) == brute_pair_bound(n)


def test_upper_bound_examples():
    assert alpha_upper_bound(IZ) == 2
    assert alpha_upper_bound(IZX) == 1
    assert alpha_upper_bound(tensor_graphs(IZ, IZ)) == 4  # 4*3 <= 12
    assert alpha_upper_bound(NoncommutativeGraph.scalar(5)) == 5


@given(seeds, st.integers(2, 4), st.integers(2, 3))
def test_pair_residuals_match_explicit_projection(seed, d, m):
    rng = np.random.default_rng(seed)
    S = random_graph(d, 1, rng)
    V = rng.standard_normal((m, d)) + 1j * rng.standard_normal((m, d))
    R = pair_residuals(S, V)
    for s in range(m):
        for t in range(m):
            if s != t:
                M = np.outer(V[s], V[t].conj())
                coeffs = [hs_inner(B, M) for B in S.basis]
                assert R[s, t] == pytest.approx(np.linalg.norm(coeffs))


def test_verify_codewords_rejects_non_unit_and_clashing():
    S = NoncommutativeGraph.scalar(2)
    assert verify_codewords(S, CodewordSet(2, np.eye(2)))
    bad = verify_codewords(S, CodewordSet(2, np.array([[1, 0], [1, 1]]) / np.array([[1], [np.sqrt(2)]])))
    assert not bad and bad.pair is not None
    assert not verify_codewords(S, CodewordSet(2, np.array([[2.0, 0]])))


def test_canonical_phase():
    v = canonical_phase(np.array([0, 1j, 1]))
    assert v[1] == pytest.approx(1) and v[2] == pytest.approx(-1j)


def test_search_edge_cases():
    assert alpha_lower_search(IZ, 1).found
    assert not alpha_lower_search(IZ, 3).found
    with pytest.raises(ValueError):
        alpha_lower_search(IZ, 0)


@pytest.mark.parametrize("S,expected", [
    (graph_of_channel(weyl_channel(2)), 2), (graph_of_channel(weyl_channel(3)), 3),
    (graph_of_channel(weyl_channel(4)), 4), (IZX, 1), (graph_of_channel(depolarizing(0.4)), 1),
    (graph_of_channel(example3()), 2), (graph_of_channel(example4()), 2), (NoncommutativeGraph.scalar(3), 3),
    (tensor_graphs(IZ, IZ), 4),
], ids=["weyl2", "weyl3", "weyl4", "izx", "depol", "ex3", "ex4", "scalar3", "iz_iz"])
def test_alpha_exact_known_values(S, expected):
    a = alpha_exact(S)
    assert a.exact == expected
    assert len(a.witness) == a.lower == expected
    assert verify_codewords(S, a.witness)


@pytest.mark.parametrize("S,expected", [(tensor_graphs(IZ, IZ), 4), (IZX, 1), (NoncommutativeGraph.diagonal(3), 3)])
def test_generic_path_agrees(S, expected):
    assert alpha_exact(S, FAST, shortcuts=False).exact == expected


@given(seeds, st.integers(2, 4), st.integers(0, 4))
def test_alpha_result_invariants(seed, d, extra):
    rng = np.random.default_rng(seed)
    S = random_graph(d, extra, rng)
    a = alpha_exact(S, FAST)
    assert 1 <= a.lower <= a.upper <= alpha_upper_bound(S)
    assert len(a.witness) == a.lower and verify_codewords(S, a.witness)
    if a.exact is not None:
        assert a.exact == a.lower == a.upper


@given(seeds)
def test_alpha_is_unitarily_invariant(seed):
    rng = np.random.default_rng(seed)
    S = NoncommutativeGraph.diagonal(3).conjugate(random_unitary(3, rng))
    assert alpha_exact(S, FAST).exact == 3


@pytest.mark.parametrize("pair", [(IZ, IZ), (IZ, IZX), (NoncommutativeGraph.diagonal(3), IZ),
                                  (graph_of_channel(example3()), IZ)])
def test_supermultiplicativity(pair):
    S, T = pair
    aS, aT = alpha_exact(S, FAST), alpha_exact(T, FAST)
    prod = product_codewords(aS.witness, aT.witness)
    ST = tensor_graphs(S, T)
    assert verify_codewords(ST, prod)
    assert len(prod) == aS.lower * aT.lower


def test_block_alpha_examples():
    bg3 = decompose_block(graph_of_channel(example3()), 2)
    r3 = block_alpha(bg3)
    assert r3.exact == 2 and "part_max" in r3.method
    bg4 = decompose_block(graph_of_channel(example4()), 4)
    r4 = block_alpha(bg4)
    assert r4.exact == 2 and "offdiag_complement_rank_one" in r4.method
    for bg, r in ((bg3, r3), (bg4, r4)):
        assert verify_codewords(NoncommutativeGraph.span(
            [np.pad(B, ((0, bg.dimB), (0, bg.dimB))) for B in bg.S.basis]
            + [np.pad(B, ((bg.dimA, 0), (bg.dimA, 0))) for B in bg.T.basis]
            + [np.pad(B, ((0, bg.dimB), (bg.dimA, 0))) for B in bg.U.basis]
            + [np.pad(B.conj().T, ((bg.dimA, 0), (0, bg.dimB))) for B in bg.U.basis]), r.witness)


def test_block_alpha_zero_offdiag_is_sum():
    bg = BlockGraph(2, 3, NoncommutativeGraph.diagonal(2), NoncommutativeGraph.diagonal(3),
                    OperatorSubspace.zero(2, 3))
    r = block_alpha(bg)
    assert r.exact == 5 and "zero_offdiag_sum" in r.method


def test_block_alpha_never_exceeds_part_sum():
    rng = np.random.default_rng(4)
    for _ in range(5):
        bg = BlockGraph(2, 2, random_graph(2, 1, rng), random_graph(2, 2, rng),
                        orthonormalize_span(rng.standard_normal((2, 2, 2))))
        r = block_alpha(bg, FAST)
        assert r.upper <= alpha_exact(bg.S).upper + alpha_exact(bg.T).upper


@given(seeds)
def test_compression_preserves_codeword_count(seed):
    rng = np.random.default_rng(seed)
    T = random_graph(3, 1, rng)
    out = alpha_lower_search(tensor_graphs(IZX, T), 2, FAST)
    if out.found:
        phi = compress_qubit_codewords(T, out.codewords)
        assert len(phi) == 2 and verify_codewords(T, phi) and phi.residual <= 1e-8


def test_compression_rejects_invalid_input():
    T = NoncommutativeGraph.scalar(2)
    with pytest.raises(InvalidCodewords):
        compress_qubit_codewords(T, CodewordSet(3, np.eye(3)))
    with pytest.raises(InvalidCodewords):
        compress_qubit_codewords(T, CodewordSet.from_vectors([[1, 0, 0, 0], [0, 0, 1, 0]]))


def test_compression_of_product_codewords():
    T = NoncommutativeGraph.diagonal(3)
    cs = product_codewords(CodewordSet.trivial(2), CodewordSet(3, np.eye(3)))
    phi = compress_qubit_codewords(T, cs)
    assert np.allclose(np.abs(phi.vectors), np.eye(3))


def test_alpha_result_serializes():
    d = alpha_exact(graph_of_channel(example4())).to_dict()
    assert d["exact"] == 2 and d["c0_oneshot"] == 1.0 and len(d["witness"]["vectors"]) == 2
