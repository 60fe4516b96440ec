import math

import numpy as np
import pytest

from zecap.channels import (ChannelError, KrausChannel, dephasing_bitflip, depolarizing, example3,
                            example3_printed, example4, example4_offdiag, graph_of_channel, validate_channel,
                            weyl_channel, zoo)
from zecap.graphs import I2, X, Z, NoncommutativeGraph
from zecap.linalg import DimensionError


@pytest.mark.parametrize("ch", [weyl_channel(2), weyl_channel(3), weyl_channel(5), dephasing_bitflip(),
                                depolarizing(0.3), depolarizing(4 / 3), example3(), example4()],
                         ids=["weyl2", "weyl3", "weyl5", "dephasing", "depol", "depol_max", "ex3", "ex4"])
def test_zoo_channels_are_trace_preserving(ch):
    rep = validate_channel(ch)
    assert rep.ok and rep.deviation_norm < 1e-12
    # independent oracle: the Choi matrix has partial trace I over the output
    J = sum(np.kron(np.eye(ch.dim_in)[:, [i]] @ np.eye(ch.dim_in)[[j], :],
                    sum(E[:, [i]] @ E[:, [j]].conj().T for E in ch.kraus))
            for i in range(ch.dim_in) for j in range(ch.dim_in))
    J = J.reshape(ch.dim_in, ch.dim_out, ch.dim_in, ch.dim_out)
    assert np.allclose(np.einsum("iaja->ij", J), np.eye(ch.dim_in))


def test_printed_example3_defect():
    rep = validate_channel(example3_printed())
    assert not rep
    assert np.allclose(rep.gram, np.diag([2, 2, 1, 1]))
    with pytest.raises(ChannelError):
        graph_of_channel(example3_printed())


def test_example4_shape():
    ch = example4()
    assert len(ch) == 21
    assert (ch.dim_in, ch.dim_out) == (6, 8)
    assert all(F.shape == (4, 2) for F in example4_offdiag())


def test_weyl_graph_is_diagonal_algebra():
    for d in (2, 3, 4):
        assert graph_of_channel(weyl_channel(d)).same_as(NoncommutativeGraph.diagonal(d))


def test_dephasing_bitflip_graph():
    assert graph_of_channel(dephasing_bitflip()).same_as(NoncommutativeGraph.span([I2, Z, X]))


def test_depolarizing_graph_is_full():
    assert graph_of_channel(depolarizing(0.2)).is_full()


def test_identity_channel_graph_is_scalar():
    assert graph_of_channel(KrausChannel([np.eye(3)])).is_scalar()


def test_graph_contains_all_products():
    ch = example3()
    S = graph_of_channel(ch)
    for Ej in ch.kraus:
        for Ek in ch.kraus:
            assert S.subspace.contains(Ej.conj().T @ Ek)


@pytest.mark.parametrize("p", [0.0, -0.1, 1.5])
def test_depolarizing_range(p):
    with pytest.raises(ValueError):
        depolarizing(p)


def test_malformed_kraus_sets():
    with pytest.raises(ChannelError):
        KrausChannel([])
    with pytest.raises(DimensionError):
        KrausChannel([np.eye(2), np.eye(3)])


def test_zoo_lookup():
    assert zoo("weyl", 3).dim_in == 3
    with pytest.raises(ValueError, match="unknown channel"):
        zoo("nope")


def test_depolarizing_weights():
    ch = depolarizing(1.0)
    assert math.isclose(np.linalg.norm(ch.kraus[0]) ** 2, 2 * 0.25)
