import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from netdiscord import fixtures, network
from netdiscord.errors import ConvergenceError, InvalidNetworkError, NormalizationError, PreconditionError


def test_circle4_rows():
    w = network.make_circle(4).weights
    expected = np.array([[0, .5, 0, .5], [.5, 0, .5, 0], [0, .5, 0, .5], [.5, 0, .5, 0]])
    assert np.array_equal(w, expected)


def test_circle3_all_half():
    w = network.make_circle(3).weights
    off = ~np.eye(3, dtype=bool)
    assert np.all(w[off] == 0.5) and np.all(np.diag(w) == 0)


def test_circle100_valid():
    assert network.validate(network.make_circle(100)) == []


@pytest.mark.parametrize("n", [0, 1, 2])
def test_circle_too_small(n):
    with pytest.raises(InvalidNetworkError):
        network.make_circle(n)


def test_weights_read_only():
    net = network.make_circle(5)
    with pytest.raises(ValueError):
        net.weights[0, 1] = 3.0


def test_cycle_edges_match_circle():
    net = network.from_weighted_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)])
    assert np.allclose(net.weights, network.make_circle(4).weights, atol=1e-15)


def test_triangle_edges():
    net = network.from_weighted_edges(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    assert np.allclose(net.weights, network.make_circle(3).weights, atol=1e-15)


def test_star_does_not_normalize():
    with pytest.raises(ConvergenceError) as info:
        network.from_weighted_edges(5, [(0, j, 1.0) for j in range(1, 5)])
    assert info.value.residual > network.ROW_SUM_TOL
    assert info.value.iterations == network.SINKHORN_MAX_ITER


def test_isolated_node():
    with pytest.raises(NormalizationError):
        network.from_weighted_edges(4, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])


@pytest.mark.parametrize(
    "edges",
    [
        [(0, 1, 1), (1, 0, 1), (1, 2, 1), (0, 2, 1)],  # both orientations
        [(0, 0, 1), (0, 1, 1), (1, 2, 1), (0, 2, 1)],  # self loop
        [(0, 5, 1), (0, 1, 1), (1, 2, 1)],  # out of range
        [(0, 1, 0.0), (1, 2, 1), (0, 2, 1)],  # zero weight
        [(0, 1, -1.0), (1, 2, 1), (0, 2, 1)],
    ],
)
def test_bad_edge_lists(edges):
    with pytest.raises(InvalidNetworkError):
        network.from_weighted_edges(3, edges)


def test_sinkhorn_symmetric_every_iterate():
    rng = np.random.default_rng(3)
    a = rng.uniform(0.1, 1.0, (7, 7))
    a = a + a.T
    np.fill_diagonal(a, 0)
    seen = []

    def cb(k, m):
        seen.append(k)
        assert np.array_equal(m, m.T)

    out = network.sinkhorn_symmetric(a, callback=cb)
    assert seen and np.array_equal(out, out.T)
    assert np.max(np.abs(out.sum(axis=1) - 1)) <= 1e-10


def test_renormalizing_is_idempotent(two_block):
    again = network.from_weighted_edges(two_block.n, two_block.edges())
    assert np.max(np.abs(again.weights - two_block.weights)) <= 1e-10


def test_blocks_example():
    net = network.make_homophilous_blocks((20, 20), 0.5, 0.01, 7)
    assert net.n == 40 and net.is_connected() and network.validate(net) == []


def test_blocks_deterministic():
    a = network.make_homophilous_blocks((20, 20), 0.5, 0.01, 11)
    b = network.make_homophilous_blocks((20, 20), 0.5, 0.01, 11)
    assert a.weights.tobytes() == b.weights.tobytes()


def test_complete_blocks():
    net = network.make_homophilous_blocks((5, 5), 1.0, 1.0, 0)
    assert np.allclose(net.weights, (np.ones((10, 10)) - np.eye(10)) / 9, atol=1e-15)


@pytest.mark.parametrize(
    "sizes,p_in,p_out",
    [((1, 5), 0.5, 0.1), ((5, 5), 0.0, 0.0), ((5, 5), 0.3, 0.5), ((5, 5), 1.2, 0.1), ((5, 5), 0.5, -0.1)],
)
def test_blocks_bad_params(sizes, p_in, p_out):
    with pytest.raises((PreconditionError, InvalidNetworkError)):
        network.make_homophilous_blocks(sizes, p_in, p_out, 0)


def test_validate_symmetry_violation():
    w = np.array([[0, 0.6, 0.4], [0.4, 0, 0.6], [0.6, 0.4, 0]])
    v = [x for x in network.validate(network.Network(w)) if x.kind == "symmetry"]
    assert v and v[0].index == (0, 1) and abs(v[0].residual - 0.2) < 1e-12


def test_validate_row_sum_violation():
    w = 0.9 * network.make_circle(4).weights
    v = [x for x in network.validate(network.Network(w)) if x.kind == "row-stochastic"]
    assert v and sorted(v[0].index) == [0, 1, 2, 3]
    assert abs(v[0].residual - 0.1) < 1e-12


def test_validate_self_loop_and_negative():
    w = np.array([[0.5, 0.5], [0.5, 0.5]])
    kinds = {x.kind for x in network.validate(network.Network(w))}
    assert "self-loop" in kinds
    w = np.array([[0, 1.5, -0.5], [1.5, 0, -0.5], [-0.5, -0.5, 2.0]])
    assert "negative-weight" in {x.kind for x in network.validate(network.Network(w))}


def test_json_roundtrip(tmp_path, two_block):
    p = tmp_path / "net.json"
    network.save_json(two_block, p, manifest={"command": "x"})
    back = network.load_json(p)
    assert np.array_equal(back.weights, two_block.weights)
    data = json.loads(p.read_text())
    assert all(i < j for i, j, _ in data["edges"]) and data["manifest"]["command"] == "x"


def test_json_rejects_lower_triangle():
    with pytest.raises(InvalidNetworkError):
        network.from_json_dict({"n": 3, "edges": [[1, 0, 0.5], [1, 2, 0.5], [0, 2, 0.5]]})


def test_csv_roundtrip(tmp_path, two_block):
    p = tmp_path / "e.csv"
    network.save_csv(two_block, p)
    assert p.read_text().splitlines()[0] == "i,j,w"
    edges = network.read_edge_csv(p)
    back = network.from_weighted_edges(two_block.n, edges)
    assert np.max(np.abs(back.weights - two_block.weights)) <= 1e-10


@given(st.integers(3, 9), st.integers(0, 2**31 - 1))
def test_random_constructor_output_is_valid(n, seed):
    net = fixtures.random_network(np.random.default_rng(seed), n)
    assert network.validate(net) == []
