import numpy as np
import pytest
from hypothesis import given, strategies as st

from netdiscord import equilibrium as eq
from netdiscord import fixtures, network, spectral, stats
from netdiscord.errors import PreconditionError

ALT = np.array([1.0, -1.0, 1.0, -1.0])


@pytest.mark.parametrize("beta", [-0.1, 1.0, 1.5])
def test_beta_range(beta):
    with pytest.raises(PreconditionError):
        eq.GameParams(beta)


def test_gamma_values():
    with pytest.raises(PreconditionError):
        eq.GameParams(0.5, 0)


def test_beta_zero_is_identity(two_block, rng):
    f = rng.standard_normal(two_block.n)
    assert np.array_equal(eq.solve_equilibrium(two_block, eq.GameParams(0.0), f), f)
    assert np.array_equal(eq.solve_equilibrium_neumann(two_block, eq.GameParams(0.0), f), f)


def test_constant_profile(two_block):
    a = eq.solve_equilibrium(two_block, eq.GameParams(0.8), np.full(8, 2.5))
    assert np.allclose(a, 2.5, atol=1e-12)


def test_circle4_alternating(circle4):
    p = eq.GameParams(0.5)
    assert np.allclose(eq.solve_equilibrium(circle4, p, ALT), ALT / 3, atol=1e-15)
    assert np.max(np.abs(eq.solve_equilibrium_neumann(circle4, p, ALT, tol=1e-12) - ALT / 3)) <= 2e-12


def test_residual_bound(two_block, rng):
    p = eq.GameParams(0.95)
    f = 100 * rng.standard_normal(two_block.n)
    a = eq.solve_equilibrium(two_block, p, f)
    res = np.max(np.abs((np.eye(8) - 0.95 * two_block.weights) @ a - 0.05 * f))
    assert res <= 1e-10 * (1 + np.max(np.abs(f)))


def test_length_mismatch(circle4):
    with pytest.raises(PreconditionError):
        eq.solve_equilibrium(circle4, eq.GameParams(0.5), np.ones(3))
    with pytest.raises(PreconditionError):
        eq.solve_equilibrium(circle4, eq.GameParams(0.5), np.array([1, np.nan, 0, 0]))


def test_neumann_tol_positive(circle4):
    with pytest.raises(PreconditionError):
        eq.solve_equilibrium_neumann(circle4, eq.GameParams(0.5), ALT, tol=0)


def test_pc_attenuation(circle4):
    spec = spectral.decompose(circle4)
    p = eq.GameParams(0.5)
    fbar = np.array([2.0, 0, 0, 3.0])
    abar = eq.equilibrium_pc(spec, p, fbar)
    assert abar[0] == pytest.approx(2.0, abs=1e-15)
    assert abar[3] == pytest.approx(1.0, abs=1e-12)  # factor 1/3 at lambda = -1


@given(st.integers(0, 10**6), st.sampled_from([0.0, 0.3, 0.7, 0.95]))
def test_pc_route_matches_direct(seed, beta):
    rng = np.random.default_rng(seed)
    net = fixtures.random_network(rng, int(rng.integers(3, 10)))
    spec = spectral.decompose(net)
    f = rng.standard_normal(net.n)
    p = eq.GameParams(beta)
    a_pc = spectral.from_pc_basis(spec, eq.equilibrium_pc(spec, p, spectral.to_pc_basis(spec, f)))
    assert np.allclose(a_pc, eq.solve_equilibrium(net, p, f), atol=1e-9)


@given(st.integers(0, 10**6), st.sampled_from([0.0, 0.3, 0.7, 0.95]))
def test_averaging_and_mean(seed, beta):
    rng = np.random.default_rng(seed)
    net = fixtures.random_network(rng, int(rng.integers(3, 10)))
    f = rng.standard_normal(net.n)
    a = eq.solve_equilibrium(net, eq.GameParams(beta), f)
    assert a.min() >= f.min() - 1e-10 and a.max() <= f.max() + 1e-10
    assert abs(a.mean() - f.mean()) <= 1e-10
    fc = f - f.mean()
    ac = eq.solve_equilibrium(net, eq.GameParams(beta), fc)
    assert np.linalg.norm(ac) <= np.linalg.norm(fc) * (1 + 1e-12)
    if beta > 0:
        assert np.linalg.norm(ac) < np.linalg.norm(fc)


def test_payoff_examples(circle4):
    p = eq.GameParams(0.5)
    c = np.full(4, 3.0)
    assert eq.agent_payoff(circle4, p, c, c, 0) == 0
    assert all(eq.agent_payoff(circle4, eq.GameParams(0.0), ALT, ALT, i) == 0 for i in range(4))
    assert np.allclose(eq.agent_payoffs(circle4, p, ALT, ALT), -2.0)
    assert eq.agent_payoff(circle4, p, ALT, ALT, 2) == pytest.approx(-2.0)


def test_payoff_index(circle4):
    with pytest.raises(PreconditionError):
        eq.agent_payoff(circle4, eq.GameParams(0.5), ALT, ALT, 4)


def test_circle4_welfare(circle4):
    p = eq.GameParams(0.5)
    a = eq.solve_equilibrium(circle4, p, ALT)
    assert eq.welfare(circle4, p, a, ALT) == pytest.approx(-16 / 9, rel=1e-14)
    assert eq.equilibrium_welfare(circle4, p, ALT) == pytest.approx(-16 / 9, rel=1e-14)


@given(st.integers(0, 10**6))
def test_welfare_nonpositive(seed):
    rng = np.random.default_rng(seed)
    net = fixtures.random_network(rng, 6)
    a, f = rng.standard_normal(6), rng.standard_normal(6)
    assert eq.welfare(net, eq.GameParams(0.4), a, f) <= 0
    assert np.all(eq.agent_payoffs(net, eq.GameParams(0.4), a, f) <= 0)


@given(st.integers(0, 10**6), st.sampled_from([0.3, 0.7]))
def test_welfare_matches_spectral(seed, beta):
    rng = np.random.default_rng(seed)
    net = fixtures.random_network(rng, int(rng.integers(3, 11)))
    spec = spectral.decompose(net)
    f = rng.standard_normal(net.n)
    p = eq.GameParams(beta)
    d = eq.equilibrium_welfare(net, p, f)
    assert abs(d - stats.welfare_spectral(spec, p, f)) <= 1e-10 * (1 + abs(d))


def test_welfare_zero_only_at_constant(two_block):
    p = eq.GameParams(0.5)
    assert eq.equilibrium_welfare(two_block, p, np.full(8, -1.2)) == pytest.approx(0, abs=1e-14)
    f = np.full(8, -1.2)
    f[3] += 1e-3
    assert eq.equilibrium_welfare(two_block, p, f) < 0


def test_pure_backend_subprocess():
    import os
    import subprocess
    import sys

    code = (
        "import numpy as np; from netdiscord import kernels, network, spectral;"
        "print(kernels.BACKEND); s = spectral.decompose(network.make_circle(6));"
        "print(abs(s.eigenvalues[-1] + 1) < 1e-12)"
    )
    env = dict(os.environ, NETDISCORD_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "True"]
