"""Nash equilibrium, payoffs and utilitarian welfare of the coordination game.

Agent ``i`` meets ``j`` with probability ``g_ij`` and pays
``beta * (a_i - a_j)**2 + (1 - beta) * (a_i - f_i)**2`` per meeting.  The
unique equilibrium solves ``(I - beta G) a = (1 - beta) f``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from . import kernels
from .errors import ConsistencyError, PreconditionError
from .network import Network

PIVOT_FLOOR = 1e-14


@dataclass(frozen=True)
class GameParams:
    beta: float
    gamma: int = -1

    def __post_init__(self):
        if not (0.0 <= self.beta < 1.0):
            raise PreconditionError(f"beta must lie in [0, 1), got {self.beta}")
        if self.gamma not in (-1, 1):
            raise PreconditionError(f"gamma must be -1 or +1, got {self.gamma}")


def as_profile(z, n: int | None = None) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.ndim != 1:
        raise PreconditionError(f"profile must be a vector, got shape {z.shape}")
    if n is not None and z.shape[0] != n:
        raise PreconditionError(f"profile has length {z.shape[0]}, network has {n} nodes")
    if not np.all(np.isfinite(z)):
        raise PreconditionError("profile has non-finite entries")
    return z


def solve_equilibrium(net: Network, params: GameParams, f) -> np.ndarray:
    f = as_profile(f, net.n)
    beta = params.beta
    m = np.eye(net.n) - beta * net.weights
    lu, piv = lu_factor(m)
    smallest = np.min(np.abs(np.diag(lu)))
    if smallest < PIVOT_FLOOR:
        raise ConsistencyError(f"LU pivot {smallest:.3e} below {PIVOT_FLOOR}; I - beta G should be nonsingular")
    return lu_solve((lu, piv), (1.0 - beta) * f)


def solve_equilibrium_neumann(net: Network, params: GameParams, f, tol: float = 1e-12) -> np.ndarray:
    """Sum ``(1 - beta) beta^t G^t f`` until the tail bound ``beta^(T+1) |f|_inf`` drops below ``tol``."""
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    f = as_profile(f, net.n)
    beta = params.beta
    g = net.weights
    fmax = float(np.max(np.abs(f))) if f.size else 0.0
    term = (1.0 - beta) * f
    total = term.copy()
    tail = beta * fmax
    while tail >= tol:
        term = beta * (g @ term)
        total += term
        tail *= beta
    return total


def equilibrium_pc(spec, params: GameParams, fbar) -> np.ndarray:
    """Equilibrium in principal-component coordinates: each component is
    scaled by ``(1 - beta) / (1 - beta * lambda)``."""
    fbar = as_profile(fbar, spec.n)
    beta = params.beta
    return (1.0 - beta) * fbar / (1.0 - beta * spec.eigenvalues)


def attenuation(beta: float, lam):
    return (1.0 - beta) / (1.0 - beta * np.asarray(lam, dtype=float))


def agent_payoffs(net: Network, params: GameParams, a, f) -> np.ndarray:
    a = as_profile(a, net.n)
    f = as_profile(f, net.n)
    return kernels.agent_payoffs(net.weights, a, f, params.beta)


def agent_payoff(net: Network, params: GameParams, a, f, i: int) -> float:
    if not (0 <= i < net.n):
        raise PreconditionError(f"node index {i} out of range for n={net.n}")
    a = as_profile(a, net.n)
    f = as_profile(f, net.n)
    row = net.weights[i]
    beta = params.beta
    return float(np.sum(row * (-beta * (a[i] - a) ** 2 - (1.0 - beta) * (a[i] - f[i]) ** 2)))


def welfare(net: Network, params: GameParams, a, f) -> float:
    return float(np.sum(agent_payoffs(net, params, a, f)))


def equilibrium_welfare(net: Network, params: GameParams, f) -> float:
    """Welfare at the equilibrium induced by ideal points ``f`` (natural basis)."""
    a = solve_equilibrium(net, params, f)
    return welfare(net, params, a, f)
