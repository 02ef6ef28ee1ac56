"""Brute-force checks for the closed-form optimizers.

Nothing here touches the eigensolver or the spectral welfare formula.
Objective values come from the natural-basis route (linear solve for the
equilibrium, then the payoff sum); searches use the equivalent quadratic
form ``V(f) = f' Q f`` whose matrix is assembled from linear solves only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import equilibrium as eq
from .errors import PreconditionError
from .network import Network


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 20
    max_iters: int = 5000
    step_init: float = 2 * math.pi / 256  # angular grid spacing of the line search
    tol: float = 1e-11
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1 or not self.step_init > 0 or not self.tol > 0:
            raise PreconditionError("search settings must be positive")


def welfare_matrix(net: Network, beta: float) -> np.ndarray:
    """Symmetric ``Q`` with equilibrium welfare ``V(f) = f' Q f``.

    With ``A = (1 - beta)(I - beta G)^{-1}`` the equilibrium is ``a = A f`` and
    ``V = -2 beta a'(D - G)a - (1 - beta)(a - f)'D(a - f)`` where ``D`` holds
    the row sums (1 up to normalization error, kept so Q matches the payoff
    sum to rounding).
    """
    n = net.n
    eye = np.eye(n)
    g = net.weights
    d = np.diag(g.sum(axis=1))
    a = (1.0 - beta) * np.linalg.solve(eye - beta * g, eye)
    q = -2.0 * beta * a @ (d - g) @ a - (1.0 - beta) * (a - eye).T @ d @ (a - eye)
    return 0.5 * (q + q.T)


def welfare_gradient(net: Network, params: eq.GameParams, f) -> np.ndarray:
    f = eq.as_profile(f, net.n)
    return 2.0 * welfare_matrix(net, params.beta) @ f


def direct_value(net: Network, params: eq.GameParams, f) -> float:
    return eq.equilibrium_welfare(net, params, f)


def _center(v):
    return v - v.mean()


def _identity(v):
    return v


def _sphere_ascent(A, b, s, project, cfg, scale):
    """Maximize ``s'As + 2b's`` over unit ``s`` in the range of ``project``.

    Riemannian conjugate gradient (Polak-Ribiere, restarted when the
    direction stops being an ascent direction).  Each step moves along the
    great circle spanned by ``s`` and the search direction, to the best
    point found on a grid of spacing ``cfg.step_init`` refined by Newton
    steps on the closed-form derivative.
    """
    m = max(8, int(math.ceil(2 * math.pi / cfg.step_init)))
    grid = np.linspace(-math.pi, math.pi, m, endpoint=False)
    cg, sg = np.cos(grid), np.sin(grid)
    s = project(s)
    s = s / np.linalg.norm(s)
    d_prev = None
    rg_prev = None
    value = s @ A @ s + 2 * b @ s
    stall = 0
    it = 0
    for it in range(1, cfg.max_iters + 1):
        g = project(2.0 * (A @ s + b))
        rg = g - (s @ g) * s
        nrg = np.linalg.norm(rg)
        if nrg <= cfg.tol * scale:
            break
        d = rg
        if d_prev is not None:
            dp = project(d_prev - (s @ d_prev) * s)
            beta_pr = max(0.0, rg @ (rg - rg_prev) / (rg_prev @ rg_prev))
            cand = rg + beta_pr * dp
            if np.all(np.isfinite(cand)) and cand @ rg > 0:
                d = cand
        nd = np.linalg.norm(d)
        dn = d / nd
        saa = s @ A @ s
        sad = s @ A @ dn
        daa = dn @ A @ dn
        bs = b @ s
        bd = b @ dn
        vals = cg * cg * saa + 2 * sg * cg * sad + sg * sg * daa + 2 * cg * bs + 2 * sg * bd
        t = grid[int(np.argmax(vals))]
        for _ in range(30):
            c, sn = math.cos(t), math.sin(t)
            d1 = math.sin(2 * t) * (daa - saa) + 2 * math.cos(2 * t) * sad - 2 * sn * bs + 2 * c * bd
            d2 = 2 * math.cos(2 * t) * (daa - saa) - 4 * math.sin(2 * t) * sad - 2 * c * bs - 2 * sn * bd
            if d2 >= 0:
                break
            step = d1 / d2
            t -= step
            if abs(step) < 1e-15:
                break
        s_new = project(math.cos(t) * s + math.sin(t) * dn)
        s_new /= np.linalg.norm(s_new)
        new_value = s_new @ A @ s_new + 2 * b @ s_new
        if new_value < value:
            # line search landed below the current point; restart as steepest ascent
            d_prev = None
            stall += 1
            if stall > 5:
                break
            continue
        stall = stall + 1 if new_value - value <= 1e-15 * max(1.0, abs(value)) else 0
        if stall > 5:
            s = s_new
            break
        d_prev = nd * (-math.sin(t) * s + math.cos(t) * dn)
        rg_prev = rg
        s, value = s_new, new_value
    return s, it


@dataclass
class SearchResult:
    best: np.ndarray
    value: float
    restart_values: list = field(default_factory=list)
    iterations: list = field(default_factory=list)

    def __iter__(self):
        # allows ``f_best, value = sphere_search(...)``
        return iter((self.best, self.value))


def sphere_search(net: Network, params: eq.GameParams, cfg: SearchConfig | None = None) -> SearchResult:
    """Maximize ``gamma * V(a*(f))`` over unit-norm, mean-zero ``f``.

    The constant direction is excluded: it leaves welfare at zero, which
    would otherwise be the benevolent optimum.
    """
    cfg = cfg or SearchConfig()
    n = net.n
    if n < 2:
        raise PreconditionError("need at least two nodes")
    q = params.gamma * welfare_matrix(net, params.beta)
    scale = max(1.0, float(np.abs(q).max()))
    rng = np.random.default_rng(cfg.seed)
    best, best_val = None, -np.inf
    values, iters = [], []
    for _ in range(cfg.restarts):
        s0 = _center(rng.standard_normal(n))
        s, it = _sphere_ascent(q, np.zeros(n), s0, _center, cfg, scale)
        v = direct_value(net, params, s)
        values.append(v)
        iters.append(it)
        if params.gamma * v > best_val:
            best, best_val = s, params.gamma * v
    return SearchResult(best, params.gamma * best_val, values, iters)


def constrained_search(
    spec_or_net,
    params: eq.GameParams,
    f_hat,
    C: float,
    cfg: SearchConfig | None = None,
) -> SearchResult:
    """Maximize ``gamma * V(f_hat + delta)`` subject to ``|delta|^2 <= C``.

    The search runs on the boundary sphere ``|delta| = sqrt(C)``: the
    malevolent objective is convex, so its maximum over the ball is on the
    boundary; the benevolent objective binds the budget unless zero
    miscoordination is reachable, and then a zero-welfare point also lies
    on the boundary (shifting by a constant costs budget but not welfare).

    Accepts a ``Network`` or anything with a ``weights`` matrix; only the
    matrix is used.
    """
    cfg = cfg or SearchConfig()
    net = spec_or_net if isinstance(spec_or_net, Network) else Network(spec_or_net.weights)
    if not C > 0:
        raise PreconditionError(f"budget must be positive, got {C}")
    f_hat = eq.as_profile(f_hat, net.n)
    n = net.n
    r = math.sqrt(C)
    q = params.gamma * welfare_matrix(net, params.beta)
    a = r * r * q
    b = r * (q @ f_hat)
    scale = max(1.0, float(np.abs(a).max()), float(np.abs(b).max()))
    rng = np.random.default_rng(cfg.seed)
    best, best_val = None, -np.inf
    values, iters = [], []
    for _ in range(cfg.restarts):
        s0 = rng.standard_normal(n)
        s, it = _sphere_ascent(a, b, s0, _identity, cfg, scale)
        delta = r * s
        v = direct_value(net, params, f_hat + delta)
        values.append(v)
        iters.append(it)
        if params.gamma * v > best_val:
            best, best_val = delta, params.gamma * v
    return SearchResult(best, params.gamma * best_val, values, iters)


def random_mean_zero_unit(rng, n, samples):
    x = rng.standard_normal((samples, n))
    x -= x.mean(axis=1, keepdims=True)
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return x


def verify_prop2_table(
    net: Network,
    params: eq.GameParams,
    samples: int,
    seed: int,
    u2=None,
    un=None,
    tol: float = 1e-9,
    chunk: int = 20000,
) -> dict:
    """Sample mean-zero unit ideal points and confirm none beats the
    candidate extremizers of the two equilibrium covariances.

    Covariance of neighbors should be largest at ``u2`` and smallest at
    ``un``; covariance of a random pair the reverse.  Candidates default to
    the network's second and last eigenvectors.
    """
    if u2 is None or un is None:
        from .spectral import decompose

        spec = decompose(net)
        u2 = spec.component(2) if u2 is None else u2
        un = spec.component(spec.n) if un is None else un
    n = net.n
    g = net.weights
    beta = params.beta
    amat = (1.0 - beta) * np.linalg.solve(np.eye(n) - beta * g, np.eye(n))

    def covs(fs):
        a = fs @ amat.T
        nb = np.einsum("ki,ij,kj->k", a, g, a) / n
        rp = -np.einsum("ki,ki->k", a, a) / n**2
        return nb, rp

    cand = np.vstack([u2, un])
    (nb2, nbn), (rp2, rpn) = covs(cand)
    rng = np.random.default_rng(seed)
    ext = {"nb_max": -np.inf, "nb_min": np.inf, "rp_max": -np.inf, "rp_min": np.inf}
    arg = {}
    done = 0
    while done < samples:
        k = min(chunk, samples - done)
        fs = random_mean_zero_unit(rng, n, k)
        nb, rp = covs(fs)
        for key, arr, pick in (("nb_max", nb, np.argmax), ("nb_min", nb, np.argmin), ("rp_max", rp, np.argmax), ("rp_min", rp, np.argmin)):
            i = int(pick(arr))
            better = arr[i] > ext[key] if key.endswith("max") else arr[i] < ext[key]
            if better:
                ext[key] = float(arr[i])
                arg[key] = fs[i].tolist()
        done += k
    cells = {
        "cov_neighbors_max_at_u2": {"candidate": float(nb2), "best_sample": ext["nb_max"], "ok": bool(ext["nb_max"] <= nb2 + tol)},
        "cov_neighbors_min_at_un": {"candidate": float(nbn), "best_sample": ext["nb_min"], "ok": bool(ext["nb_min"] >= nbn - tol)},
        "cov_random_pair_max_at_un": {"candidate": float(rpn), "best_sample": ext["rp_max"], "ok": bool(ext["rp_max"] <= rpn + tol)},
        "cov_random_pair_min_at_u2": {"candidate": float(rp2), "best_sample": ext["rp_min"], "ok": bool(ext["rp_min"] >= rp2 - tol)},
    }
    keymap = {
        "cov_neighbors_max_at_u2": "nb_max",
        "cov_neighbors_min_at_un": "nb_min",
        "cov_random_pair_max_at_un": "rp_max",
        "cov_random_pair_min_at_u2": "rp_min",
    }
    for name, cell in cells.items():
        if not cell["ok"]:
            cell["counterexample"] = arg[keymap[name]]
    return {"samples": samples, "seed": seed, "beta": beta, "n": n, "cells": cells, "ok": bool(all(c["ok"] for c in cells.values()))}
