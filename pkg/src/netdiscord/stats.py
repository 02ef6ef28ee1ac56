"""Welfare and disagreement statistics in natural and spectral form.

Every quantity here has two routes: a direct sum over nodes of the
equilibrium profile, and a weighted sum of squared principal-component
loadings of the ideal points.  ``zeta``, ``eta`` and ``nu`` are the
per-component weights for welfare, covariance of neighbors and covariance
of a random pair respectively.
"""
from __future__ import annotations

import numpy as np

from . import equilibrium as eq
from .errors import ConsistencyError, PreconditionError
from .network import Network
from .spectral import Spectrum, to_pc_basis

MEAN_ZERO_TOL = 1e-9
CONSISTENCY_RTOL = 1e-8


def zeta(beta, lam):
    """Welfare per unit squared loading on a component with eigenvalue ``lam``."""
    lam = np.asarray(lam, dtype=float)
    out = -beta * (1 - beta) * (1 - lam) * (2 - beta * (1 + lam)) / (1 - beta * lam) ** 2
    return out if out.ndim else float(out)


def eta(beta, lam, n):
    lam = np.asarray(lam, dtype=float)
    out = (1 - beta) ** 2 * lam / ((1 - beta * lam) ** 2 * n)
    return out if out.ndim else float(out)


def nu(beta, lam, n):
    lam = np.asarray(lam, dtype=float)
    out = -((1 - beta) ** 2) / ((1 - beta * lam) ** 2 * n**2)
    return out if out.ndim else float(out)


def _require_mean_zero(z):
    s = float(np.sum(z))
    if abs(s) > MEAN_ZERO_TOL:
        raise PreconditionError(f"profile must sum to zero (sum is {s:.3e})")


def welfare_spectral(spec: Spectrum, params: eq.GameParams, f) -> float:
    fbar = to_pc_basis(spec, f)
    return float(np.sum(zeta(params.beta, spec.eigenvalues) * fbar**2))


def cov_neighbors(net: Network, z) -> float:
    z = eq.as_profile(z, net.n)
    _require_mean_zero(z)
    return float(z @ net.weights @ z) / net.n


def cov_neighbors_spectral(spec: Spectrum, params: eq.GameParams, f) -> float:
    f = eq.as_profile(f, spec.n)
    _require_mean_zero(f)
    fbar = to_pc_basis(spec, f)
    return float(np.sum(eta(params.beta, spec.eigenvalues, spec.n) * fbar**2))


def cov_random_pair(z) -> float:
    """Random-pair covariance with the 1/n^2 normalization.

    For a centered profile the cross sum vanishes, leaving ``-|z|^2 / n^2``.
    Multiply by ``n / (n - 1)`` for the average over ordered distinct pairs.
    """
    z = eq.as_profile(z)
    _require_mean_zero(z)
    n = len(z)
    return -float(z @ z) / n**2


def cov_random_pair_spectral(spec: Spectrum, params: eq.GameParams, f) -> float:
    f = eq.as_profile(f, spec.n)
    _require_mean_zero(f)
    fbar = to_pc_basis(spec, f)
    return float(np.sum(nu(params.beta, spec.eigenvalues, spec.n) * fbar**2))


def relative_gap(x, y):
    return abs(x - y) / (1.0 + abs(x))


def checked_welfare(spec: Spectrum, params: eq.GameParams, f, rtol: float = CONSISTENCY_RTOL) -> float:
    """Equilibrium welfare computed both ways; raises on disagreement.

    Returns the direct (natural-basis) value.
    """
    if spec.weights is None:
        raise PreconditionError("spectrum carries no weights; cannot compute direct welfare")
    net = Network(spec.weights)
    f = eq.as_profile(f, spec.n)
    a = eq.solve_equilibrium(net, params, f)
    direct = eq.welfare(net, params, a, f)
    spectral = welfare_spectral(spec, params, f)
    if relative_gap(direct, spectral) > rtol:
        raise ConsistencyError(
            f"direct welfare {direct!r} and spectral welfare {spectral!r} disagree",
            diagnostics={
                "direct": direct,
                "spectral": spectral,
                "relative_gap": relative_gap(direct, spectral),
                "beta": params.beta,
                "f": f.tolist(),
                "a_star": a.tolist(),
                "eigenvalues": spec.eigenvalues.tolist(),
            },
        )
    return direct


def stats_report(spec: Spectrum, params: eq.GameParams, f) -> dict:
    """Per-eigenvalue weights plus both routes of every statistic for ``f``."""
    net = Network(spec.weights)
    f = eq.as_profile(f, spec.n)
    a = eq.solve_equilibrium(net, params, f)
    lam = spec.eigenvalues
    beta, n = params.beta, spec.n
    w_direct = eq.welfare(net, params, a, f)
    w_spec = welfare_spectral(spec, params, f)
    cn_direct = cov_neighbors(net, a)
    cn_spec = cov_neighbors_spectral(spec, params, f)
    cr_direct = cov_random_pair(a)
    cr_spec = cov_random_pair_spectral(spec, params, f)
    return {
        "beta": beta,
        "n": n,
        "components": [
            {"ell": i + 1, "lambda": float(l), "zeta": zeta(beta, l), "eta": eta(beta, l, n), "nu": nu(beta, l, n)}
            for i, l in enumerate(lam)
        ],
        "welfare": {"direct": w_direct, "spectral": w_spec, "relative_gap": relative_gap(w_direct, w_spec)},
        "cov_neighbors": {"direct": cn_direct, "spectral": cn_spec, "relative_gap": relative_gap(cn_direct, cn_spec)},
        "cov_random_pair": {"direct": cr_direct, "spectral": cr_spec, "relative_gap": relative_gap(cr_direct, cr_spec)},
    }
