"""Symmetric row-stochastic interaction networks.

A :class:`Network` holds the matrix of meeting probabilities ``g_ij``.
Valid networks are symmetric, have unit row sums (hence are doubly
stochastic) and a zero diagonal.  Constructors in this module always return
valid networks; :func:`validate` reports what is wrong with one that is not.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ConvergenceError, InvalidNetworkError, NormalizationError

SYMMETRY_TOL = 1e-12
ROW_SUM_TOL = 1e-10
SINKHORN_MAX_ITER = 10_000


@dataclass(frozen=True)
class Network:
    weights: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64, copy=True)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 1:
            raise InvalidNetworkError(f"weights must be a non-empty square matrix, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise InvalidNetworkError("weights contain non-finite entries")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "n", w.shape[0])

    def edges(self):
        """Undirected edges ``(i, j, w)`` with ``i < j`` and ``w > 0``."""
        iu, ju = np.nonzero(np.triu(self.weights, k=1))
        return [(int(i), int(j), float(self.weights[i, j])) for i, j in zip(iu, ju)]

    def is_connected(self):
        return _connected(self.weights > 0)


@dataclass(frozen=True)
class Violation:
    kind: str
    index: tuple
    residual: float

    def __str__(self):
        return f"{self.kind} at {self.index}: residual {self.residual:.3g}"


def validate(net: Network) -> list[Violation]:
    """Return the violated network invariants; empty when the network is valid.

    Each violation names the worst offending entry (or row) of its kind.
    """
    w = net.weights
    out = []
    neg = w.min()
    if neg < 0:
        i, j = np.unravel_index(np.argmin(w), w.shape)
        out.append(Violation("negative-weight", (int(i), int(j)), float(-neg)))
    asym = np.abs(w - w.T)
    if asym.max() > SYMMETRY_TOL:
        i, j = np.unravel_index(np.argmax(asym), asym.shape)
        i, j = min(i, j), max(i, j)
        out.append(Violation("symmetry", (int(i), int(j)), float(asym[i, j])))
    rows = np.abs(w.sum(axis=1) - 1.0)
    if rows.max() > ROW_SUM_TOL:
        bad = np.nonzero(rows > ROW_SUM_TOL)[0]
        worst = int(bad[np.argmax(rows[bad])])
        out.append(Violation("row-stochastic", tuple(int(b) for b in bad), float(rows[worst])))
    diag = np.abs(np.diag(w))
    if diag.max() > 0:
        i = int(np.argmax(diag))
        out.append(Violation("self-loop", (i, i), float(diag[i])))
    return out


def require_valid(net: Network) -> Network:
    problems = validate(net)
    if problems:
        raise InvalidNetworkError("invalid network: " + "; ".join(str(p) for p in problems))
    return net


def make_circle(n: int) -> Network:
    if n < 3:
        raise InvalidNetworkError(f"circle needs n >= 3, got {n}")
    w = np.zeros((n, n))
    idx = np.arange(n)
    w[idx, (idx + 1) % n] = 0.5
    w[idx, (idx - 1) % n] = 0.5
    return Network(w)


def sinkhorn_symmetric(
    a: np.ndarray,
    tol: float = ROW_SUM_TOL,
    max_iter: int = SINKHORN_MAX_ITER,
    callback: Callable[[int, np.ndarray], None] | None = None,
) -> np.ndarray:
    """Scale a symmetric nonnegative matrix to unit row sums by iterating
    ``A <- D^{-1/2} A D^{-1/2}``.

    The scaling factor is formed as an outer product ``d_i * d_j`` so every
    iterate stays exactly symmetric.  ``callback(k, A)`` sees each iterate.
    """
    a = np.array(a, dtype=np.float64, copy=True)
    rows = a.sum(axis=1)
    if np.any(rows <= 0):
        zero = np.nonzero(rows <= 0)[0].tolist()
        raise NormalizationError(f"nodes {zero} have no edges; cannot normalize")
    residual = float(np.max(np.abs(rows - 1.0)))
    k = 0
    while residual > tol:
        if k >= max_iter:
            raise ConvergenceError(
                f"Sinkhorn scaling did not converge in {max_iter} iterations (residual {residual:.3e})",
                residual=residual,
                iterations=k,
            )
        d = 1.0 / np.sqrt(rows)
        a *= np.outer(d, d)
        k += 1
        if callback is not None:
            callback(k, a)
        rows = a.sum(axis=1)
        residual = float(np.max(np.abs(rows - 1.0)))
    return a


def from_weighted_edges(n: int, edges: Iterable[Sequence]) -> Network:
    if n < 1:
        raise InvalidNetworkError(f"n must be positive, got {n}")
    a = np.zeros((n, n))
    seen = set()
    for e in edges:
        i, j, w = int(e[0]), int(e[1]), float(e[2])
        if not (0 <= i < n and 0 <= j < n):
            raise InvalidNetworkError(f"edge ({i}, {j}) out of range for n={n}")
        if i == j:
            raise InvalidNetworkError(f"self-loop at node {i}")
        if not w > 0 or not np.isfinite(w):
            raise InvalidNetworkError(f"edge ({i}, {j}) has non-positive weight {w}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise InvalidNetworkError(f"duplicate undirected edge {key}")
        seen.add(key)
        a[i, j] = a[j, i] = w
    return Network(sinkhorn_symmetric(a))


def make_homophilous_blocks(
    sizes: Sequence[int],
    p_in: float,
    p_out: float,
    seed: int,
    max_attempts: int = 1000,
) -> Network:
    """Sample a connected block graph and normalize it.

    Within-block pairs are linked with probability ``p_in`` and cross-block
    pairs with ``p_out``.  Samples are redrawn until the graph is connected,
    has no leaves and admits a doubly stochastic scaling.
    """
    sizes = [int(s) for s in sizes]
    if not sizes or min(sizes) < 2:
        raise InvalidNetworkError(f"every block needs at least 2 nodes, got {sizes}")
    if not (0 < p_in <= 1 and 0 <= p_out <= 1 and p_in >= p_out):
        raise InvalidNetworkError(f"need 0 < p_in <= 1, 0 <= p_out <= p_in; got p_in={p_in}, p_out={p_out}")
    n = sum(sizes)
    labels = np.repeat(np.arange(len(sizes)), sizes)
    prob = np.where(labels[:, None] == labels[None, :], p_in, p_out)
    iu = np.triu_indices(n, k=1)
    rng = np.random.default_rng(seed)
    last_error = None
    for _ in range(max_attempts):
        draw = rng.random(len(iu[0])) < prob[iu]
        adj = np.zeros((n, n), dtype=bool)
        adj[iu[0][draw], iu[1][draw]] = True
        adj |= adj.T
        if not _connected(adj) or adj.sum(axis=1).min() < 2:
            continue
        edges = [(int(i), int(j), 1.0) for i, j in zip(iu[0][draw], iu[1][draw])]
        try:
            return from_weighted_edges(n, edges)
        except (ConvergenceError, NormalizationError) as exc:
            # some connected graphs admit no doubly stochastic scaling; draw again
            last_error = exc
    if last_error is not None:
        raise last_error
    raise ConvergenceError(f"no connected sample in {max_attempts} attempts", iterations=max_attempts)


def _connected(adj: np.ndarray) -> bool:
    n = adj.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    frontier = [0]
    while frontier:
        nxt = np.nonzero(adj[frontier].any(axis=0) & ~seen)[0]
        seen[nxt] = True
        frontier = nxt.tolist()
    return bool(seen.all())


# --- serialization ---------------------------------------------------------

def to_json_dict(net: Network) -> dict:
    return {"n": net.n, "edges": [[i, j, w] for i, j, w in net.edges()]}


def from_json_dict(data: dict) -> Network:
    try:
        n = int(data["n"])
        edges = data["edges"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidNetworkError(f"malformed network JSON: {exc}") from exc
    w = np.zeros((n, n))
    for e in edges:
        i, j, x = int(e[0]), int(e[1]), float(e[2])
        if not (0 <= i < j < n):
            raise InvalidNetworkError(f"edge ({i}, {j}) must satisfy 0 <= i < j < n")
        w[i, j] = w[j, i] = x
    return require_valid(Network(w))


def save_json(net: Network, path, manifest: dict | None = None) -> None:
    data = to_json_dict(net)
    if manifest is not None:
        data["manifest"] = manifest
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")


def load_json(path) -> Network:
    with open(path) as fh:
        return from_json_dict(json.load(fh))


def save_csv(net: Network, path) -> None:
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["i", "j", "w"])
        for i, j, w in net.edges():
            wr.writerow([i, j, format(w, ".17g")])


def read_edge_csv(path) -> list[tuple[int, int, float]]:
    """Read ``i,j,w`` rows; a header line and ``#`` comments are skipped."""
    edges = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                edges.append((int(row[0]), int(row[1]), float(row[2])))
            except (ValueError, IndexError):
                if edges:
                    raise InvalidNetworkError(f"bad edge row {row!r}")
    return edges
