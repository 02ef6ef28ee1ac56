"""Seeded test networks and instance generators shared by the verification
suite, the CLI and the tests."""
from __future__ import annotations

import numpy as np

from .errors import ConvergenceError, NormalizationError
from .network import Network, _connected, from_weighted_edges, make_circle, make_homophilous_blocks, require_valid, sinkhorn_symmetric
from .spectral import check_distinct, decompose

BETAS = (0.0, 0.3, 0.7, 0.95)
SINKHORN_CAP = 600

# Two near-disconnected blocks of 40: lambda_2 >= 0.99 on every seed 0..9,
# which puts the zeta ratio zeta(lambda_2)/zeta(lambda_n) at beta=0.9 below 0.12.
HOMOPHILOUS = {"sizes": (40, 40), "p_in": 0.5, "p_out": 0.0005}


def random_network(rng, n, keep=0.7, max_attempts=200) -> Network:
    """Random positive weights on a random subset of pairs, Sinkhorn-normalized."""
    iu = np.triu_indices(n, 1)
    for _ in range(max_attempts):
        w = rng.uniform(0.1, 1.0, size=len(iu[0]))
        mask = rng.random(len(iu[0])) < keep
        adj = np.zeros((n, n), dtype=bool)
        adj[iu[0][mask], iu[1][mask]] = True
        adj |= adj.T
        # a leaf forces its neighbour's whole mass onto one edge, which never
        # scales to a doubly stochastic matrix unless the graph is a single edge
        if adj.sum(axis=1).min() < 2 or not _connected(adj):
            continue
        a = np.zeros((n, n))
        a[iu[0][mask], iu[1][mask]] = w[mask]
        a += a.T
        try:
            # graphs without a doubly stochastic scaling stall; scalable ones
            # of this size converge in a few hundred steps, so give up early
            return require_valid(Network(sinkhorn_symmetric(a, max_iter=SINKHORN_CAP)))
        except (NormalizationError, ConvergenceError):
            continue
    raise ConvergenceError(f"no normalizable random network after {max_attempts} attempts")


def generic_network(rng, n, tol=1e-6) -> Network:
    """Random network whose eigenvalues are pairwise at least ``tol`` apart."""
    while True:
        net = random_network(rng, n)
        if n < 4 or check_distinct(decompose(net), tol):
            return net


def random_instances(seed, count=200, n_range=(3, 12), betas=BETAS):
    """Yield ``(net, beta, f)`` triples; ``f`` is standard normal."""
    rng = np.random.default_rng(seed)
    for k in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        net = random_network(rng, n)
        yield net, float(betas[k % len(betas)]), rng.standard_normal(n)


def two_block() -> Network:
    """Two cliques of four joined by two bridges, weights drawn from a fixed seed."""
    edges = []
    rng = np.random.default_rng(2024)
    for block in (range(0, 4), range(4, 8)):
        b = list(block)
        for a in range(len(b)):
            for c in range(a + 1, len(b)):
                edges.append((b[a], b[c], float(rng.uniform(0.5, 1.5))))
    edges += [(0, 4, 0.2), (3, 7, 0.1)]
    return from_weighted_edges(8, edges)


def homophilous(count=10):
    return [make_homophilous_blocks(HOMOPHILOUS["sizes"], HOMOPHILOUS["p_in"], HOMOPHILOUS["p_out"], seed) for seed in range(count)]


def eigensolver_fixtures():
    """Named networks from n=3 up to n=200."""
    rng = np.random.default_rng(7)
    out = {f"circle{n}": make_circle(n) for n in (3, 4, 6, 20, 100, 200)}
    out["two_block"] = two_block()
    out["complete10"] = make_homophilous_blocks((5, 5), 1.0, 1.0, 0)
    out["blocks_20_20"] = make_homophilous_blocks((20, 20), 0.5, 0.01, 7)
    out["blocks_100_100"] = make_homophilous_blocks((100, 100), 0.1, 0.005, 3)
    out["random50"] = random_network(rng, 50, keep=0.3)
    out["random200"] = random_network(rng, 200, keep=0.05)
    return out
