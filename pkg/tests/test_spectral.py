import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from netdiscord import fixtures, kernels, network, spectral
from netdiscord.errors import PreconditionError


def _check_invariants(spec, g):
    n = spec.n
    lam, u = spec.eigenvalues, spec.eigenvectors
    assert abs(lam[0] - 1) <= 1e-9
    assert np.max(np.abs(u[:, 0] - 1 / np.sqrt(n))) <= 1e-8
    assert np.max(np.abs(u.T @ u - np.eye(n))) <= 1e-9
    assert np.all(np.linalg.norm(g @ u - u * lam, axis=0) <= 1e-8)
    assert np.all(np.diff(lam) <= 0)
    assert np.all(np.abs(lam) <= 1 + 1e-9)
    for col in u.T:
        top = np.abs(col).max()
        i = np.nonzero(np.abs(col) >= top - spectral.SIGN_TIE_TOL)[0][0]
        assert col[i] > 0
    assert abs(lam.sum()) <= 1e-8


def test_circle4():
    spec = spectral.decompose(network.make_circle(4))
    assert np.allclose(spec.eigenvalues, [1, 0, 0, -1], atol=1e-12)
    assert np.allclose(spec.component(4), [0.5, -0.5, 0.5, -0.5], atol=1e-12)


def test_complete4():
    net = network.from_weighted_edges(4, [(i, j, 1.0) for i in range(4) for j in range(i + 1, 4)])
    spec = spectral.decompose(net)
    assert np.allclose(spec.eigenvalues, [1, -1 / 3, -1 / 3, -1 / 3], atol=1e-12)


@pytest.mark.parametrize("n", [5, 6, 9, 20])
def test_circle_closed_form(n):
    spec = spectral.decompose(network.make_circle(n))
    expected = np.sort(np.cos(2 * np.pi * np.arange(n) / n))[::-1]
    assert np.allclose(spec.eigenvalues, expected, atol=1e-12)
    _check_invariants(spec, network.make_circle(n).weights)
    if n % 2 == 0:
        alt = np.array([(-1) ** i for i in range(n)]) / np.sqrt(n)
        assert abs(abs(spec.component(n) @ alt) - 1) <= 1e-10


@pytest.mark.parametrize("backend", kernels.available_backends())
@pytest.mark.parametrize("name", ["two_block", "blocks_20_20", "random50", "complete10"])
def test_invariants_on_fixtures(backend, name):
    net = fixtures.eigensolver_fixtures()[name]
    spec = spectral.decompose(net, backend=backend)
    _check_invariants(spec, net.weights)
    assert np.allclose(spec.eigenvalues, np.linalg.eigvalsh(net.weights)[::-1], atol=1e-10)


def test_distinctness():
    assert not spectral.check_distinct(spectral.decompose(network.make_circle(4)))
    assert not spectral.check_distinct(spectral.decompose(network.make_circle(5)))
    rng = np.random.default_rng(8)
    for _ in range(5):
        net = fixtures.random_network(rng, 8)
        spec = spectral.decompose(net)
        gaps = -np.diff(np.linalg.eigvalsh(net.weights)[::-1])
        assert spectral.check_distinct(spec, 1e-8) == bool(gaps.min() > 1e-8)


def test_degenerate_warning():
    spec = spectral.decompose(network.make_circle(6))
    with pytest.warns(spectral.DegenerateSpectrumWarning):
        spectral.warn_if_degenerate(spec, 2)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert spectral.warn_if_degenerate(spec, 6) is False


def test_deterministic_bytes(two_block):
    a = spectral.decompose(two_block)
    b = spectral.decompose(network.Network(np.array(two_block.weights)))
    assert a.eigenvalues.tobytes() == b.eigenvalues.tobytes()
    assert a.eigenvectors.tobytes() == b.eigenvectors.tobytes()


def test_disconnected_unit_eigenspace():
    w = np.zeros((6, 6))
    for block in ((0, 1, 2), (3, 4, 5)):
        for i in block:
            for j in block:
                if i != j:
                    w[i, j] = 0.5
    spec = spectral.decompose(network.Network(w))
    assert np.allclose(spec.eigenvalues[:2], 1)
    assert np.allclose(spec.component(1), 1 / np.sqrt(6))
    assert np.allclose(spec.eigenvectors.T @ spec.eigenvectors, np.eye(6), atol=1e-12)


def test_basis_examples(two_block_spec):
    spec = two_block_spec
    n = spec.n
    for ell in (1, 3, n):
        e = np.zeros(n)
        e[ell - 1] = 1
        assert np.allclose(spectral.to_pc_basis(spec, spec.component(ell)), e, atol=1e-12)
        assert np.allclose(spectral.from_pc_basis(spec, e), spec.component(ell), atol=1e-12)
    # row sums are only exact to the Sinkhorn tolerance, so the constant
    # vector is an eigenvector to ~1e-10; use the 1e-8 u^1 tolerance
    ones_bar = spectral.to_pc_basis(spec, np.ones(n))
    assert np.allclose(ones_bar, np.r_[np.sqrt(n), np.zeros(n - 1)], atol=1e-8 * np.sqrt(n))
    e1 = np.zeros(n)
    e1[0] = np.sqrt(n)
    assert np.allclose(spectral.from_pc_basis(spec, e1), np.ones(n), atol=1e-8 * np.sqrt(n))


@given(st.lists(st.floats(-1e3, 1e3), min_size=8, max_size=8), st.floats(-5, 5), st.floats(-5, 5))
def test_basis_roundtrip_and_linearity(z, a, b):
    spec = spectral.decompose(fixtures.two_block())
    z = np.array(z)
    y = np.arange(8.0)
    zbar = spectral.to_pc_basis(spec, z)
    scale = 1 + np.linalg.norm(z)
    assert abs(np.linalg.norm(zbar) - np.linalg.norm(z)) <= 1e-10 * scale
    assert np.allclose(spectral.from_pc_basis(spec, zbar), z, atol=1e-10 * scale)
    lhs = spectral.from_pc_basis(spec, a * z + b * y)
    rhs = a * spectral.from_pc_basis(spec, z) + b * spectral.from_pc_basis(spec, y)
    assert np.allclose(lhs, rhs, atol=1e-10 * (1 + abs(a) * scale + abs(b) * 20))


def test_length_mismatch(two_block_spec):
    with pytest.raises(PreconditionError):
        spectral.to_pc_basis(two_block_spec, np.ones(3))
    with pytest.raises(PreconditionError):
        spectral.from_pc_basis(two_block_spec, np.ones(9))


def test_json_column_major(two_block_spec):
    d = two_block_spec.to_json_dict()
    assert np.allclose(d["eigenvectors"][1], two_block_spec.component(2))
