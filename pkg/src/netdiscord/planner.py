"""Welfare-optimal and welfare-minimizing interventions on ideal points.

Both planners work in principal-component coordinates, where welfare is the
separable sum ``sum_l zeta(lambda_l) * fbar_l**2``.  With quadratic cost
``|delta|^2 <= C`` and ``delta_bar_l = x_l * fhat_bar_l`` the first-order
condition ``gamma * zeta_l * (1 + x_l) = mu * x_l`` gives

    x_l = gamma * zeta_l / (mu - gamma * zeta_l),

and the multiplier ``mu`` is pinned down by the binding budget.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import equilibrium as eq
from .errors import BlissPointError, ConvergenceError, PreconditionError
from .network import Network
from .spectral import Spectrum, from_pc_basis, is_isolated, to_pc_basis, warn_if_degenerate
from .stats import checked_welfare, zeta

LOADING_TOL = 1e-9  # relative to max(|f_hat|, 1); above the ~1e-10 Sinkhorn row-sum noise
MU_FLOOR = 1e-15
BISECTION_MAX_ITER = 400


@dataclass(frozen=True)
class SimpleOptimum:
    f_star: np.ndarray
    value: float
    component: int
    degenerate: bool


def simple_optimal_f(spec: Spectrum, params: eq.GameParams) -> SimpleOptimum:
    """Best unit-norm, mean-zero ideal points for the planner.

    The malevolent planner loads everything on the last component, the
    benevolent one on the second.
    """
    if spec.n < 2:
        raise PreconditionError("need at least two nodes")
    ell = spec.n if params.gamma == -1 else 2
    degenerate = params.beta == 0.0 or not is_isolated(spec, ell)
    if degenerate and params.beta > 0:
        warn_if_degenerate(spec, ell)
    value = zeta(params.beta, spec.eigenvalues[ell - 1])
    return SimpleOptimum(spec.component(ell).copy(), float(value), ell, degenerate)


def cosine_similarity(y, z) -> float:
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    ny, nz = np.linalg.norm(y), np.linalg.norm(z)
    if ny == 0 or nz == 0:
        raise PreconditionError("cosine similarity is undefined for a zero vector")
    return float(np.clip(np.dot(y, z) / (ny * nz), -1.0, 1.0))


@dataclass(frozen=True)
class InterventionResult:
    delta_star: np.ndarray
    f_star: np.ndarray
    a_star: np.ndarray
    x: np.ndarray
    mu: float
    welfare_before: float
    welfare_after: float
    similarities: np.ndarray
    budget_used: float
    budget: float
    gamma: int
    beta: float
    loaded: np.ndarray
    bliss: bool = False
    hard_case_component: int | None = None
    notes: list = field(default_factory=list)

    def to_json_dict(self):
        return {
            "beta": self.beta,
            "gamma": self.gamma,
            "budget": self.budget,
            "budget_used": self.budget_used,
            "mu": self.mu,
            "welfare_before": self.welfare_before,
            "welfare_after": self.welfare_after,
            "bliss": self.bliss,
            "hard_case_component": self.hard_case_component,
            "delta_star": self.delta_star.tolist(),
            "f_star": self.f_star.tolist(),
            "a_star": self.a_star.tolist(),
            "x": self.x.tolist(),
            "loaded": [bool(b) for b in self.loaded],
            "similarities": self.similarities.tolist(),
            "notes": list(self.notes),
        }


def _budget(mu, q, load2):
    x = q / (mu - q)
    return float(np.sum(load2 * x * x))


def solve_multiplier(q, load2, budget):
    """Find ``mu`` with ``sum load2 * (q / (mu - q))**2 == budget`` by bisection.

    ``q`` holds ``gamma * zeta`` for the loaded components.  The search runs
    over ``mu = base + t`` with ``base = max(0, max q)`` so every denominator
    stays positive; the budget is strictly decreasing in ``t``.
    """
    base = max(0.0, float(np.max(q)))
    lo = MU_FLOOR
    hi = 1.0
    while _budget(base + hi, q, load2) >= budget:
        hi *= 2.0
        if hi > 1e300:
            raise ConvergenceError("could not bracket the budget multiplier")
    if _budget(base + lo, q, load2) <= budget:
        return base + lo
    target = 1e-12 * (1.0 + budget)
    for _ in range(BISECTION_MAX_ITER):
        mid = math.sqrt(lo * hi) if hi > 4.0 * lo else 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        b = _budget(base + mid, q, load2)
        if abs(b - budget) <= target:
            return base + mid
        if b > budget:
            lo = mid
        else:
            hi = mid
    # float resolution reached; take the end with the smaller residual
    blo = abs(_budget(base + lo, q, load2) - budget)
    bhi = abs(_budget(base + hi, q, load2) - budget)
    return base + (lo if blo < bhi else hi)


def optimal_intervention(
    spec: Spectrum,
    params: eq.GameParams,
    f_hat,
    C: float,
    allow_bliss: bool = False,
) -> InterventionResult:
    if not C > 0:
        raise PreconditionError(f"budget must be positive, got {C}")
    f_hat = eq.as_profile(f_hat, spec.n)
    beta, gamma = params.beta, params.gamma
    lam = spec.eigenvalues
    fbar = to_pc_basis(spec, f_hat)
    z = zeta(beta, lam)
    q = gamma * z
    scale = max(float(np.linalg.norm(f_hat)), 1.0)
    active = z != 0.0
    active[0] = False
    loaded = active & (np.abs(fbar) > LOADING_TOL * scale)
    notes = []
    if not np.all(np.diff(lam) < -1e-8):
        notes.append("repeated eigenvalues: per-eigenvector similarities depend on the basis chosen within an eigenspace")
    unloaded = active & ~loaded
    if unloaded.any():
        notes.append(f"components {(np.nonzero(unloaded)[0] + 1).tolist()} have zero status-quo loading")

    x = np.zeros(spec.n)
    dbar = np.zeros(spec.n)
    mu = 0.0
    bliss = False
    hard = None

    if gamma == 1:
        reachable = float(np.sum(fbar[active] ** 2))
        if loaded.any() and C >= reachable:
            x[loaded] = -1.0
            dbar = x * fbar
            if not allow_bliss:
                raise BlissPointError(
                    f"budget {C} covers the bliss point (needs {reachable}); zero miscoordination is feasible",
                    bliss_delta=from_pc_basis(spec, dbar),
                )
            bliss = True
        elif loaded.any():
            mu = solve_multiplier(q[loaded], fbar[loaded] ** 2, C)
            x[loaded] = q[loaded] / (mu - q[loaded])
            dbar = x * fbar
        else:
            notes.append("status quo has no non-constant component; nothing to improve")
    else:
        hard, mu, x, dbar = _malevolent(q, fbar, loaded, unloaded, active, C, spec)
        if hard is not None:
            notes.append(f"remaining budget placed on unloaded component {hard + 1}")
            hard = hard + 1

    delta = from_pc_basis(spec, dbar)
    f_star = f_hat + delta
    net = Network(spec.weights)
    a_star = eq.solve_equilibrium(net, params, f_star)
    w_before = checked_welfare(spec, params, f_hat)
    w_after = checked_welfare(spec, params, f_star)
    nd = float(np.linalg.norm(dbar))
    sims = dbar / nd if nd > 0 else np.zeros(spec.n)
    return InterventionResult(
        delta_star=delta,
        f_star=f_star,
        a_star=a_star,
        x=x,
        mu=float(mu),
        welfare_before=w_before,
        welfare_after=w_after,
        similarities=sims,
        budget_used=float(delta @ delta),
        budget=float(C),
        gamma=gamma,
        beta=beta,
        loaded=loaded,
        bliss=bliss,
        hard_case_component=hard,
        notes=notes,
    )


def _malevolent(q, fbar, loaded, unloaded, active, C, spec):
    """Solve the gamma = -1 case, including the trust-region 'hard case'.

    If an unloaded component has a larger ``q`` than the multiplier the
    loaded components alone would need, the optimum puts the leftover budget
    on that component with ``mu`` equal to its ``q``.
    """
    n = spec.n
    x = np.zeros(n)
    dbar = np.zeros(n)
    hard = None
    q_un = q[unloaded].max() if unloaded.any() else -np.inf
    if not loaded.any():
        if not unloaded.any():
            return None, 0.0, x, dbar
        k = _pick_top(q, unloaded)
        dbar[k] = math.sqrt(C)
        return k, float(q[k]), x, dbar
    ql, l2 = q[loaded], fbar[loaded] ** 2
    if q_un > ql.max():
        used = _budget(q_un, ql, l2)
        if used < C:
            k = _pick_top(q, unloaded)
            x[loaded] = ql / (q_un - ql)
            dbar = x * fbar
            dbar[k] = math.sqrt(C - used)
            return k, float(q_un), x, dbar
    mu = solve_multiplier(ql, l2, C)
    x[loaded] = ql / (mu - ql)
    dbar = x * fbar
    return hard, mu, x, dbar


def _pick_top(q, mask):
    # highest q; among ties the lowest eigenvalue (largest index)
    idx = np.nonzero(mask)[0]
    best = q[idx].max()
    return int(idx[q[idx] >= best][-1])


def multipliers(result: InterventionResult, spec: Spectrum, f_hat) -> np.ndarray:
    """``m_l = rho(delta*, u^l) / rho(f_hat, u^l)``; NaN where undefined."""
    f_hat = eq.as_profile(f_hat, spec.n)
    fbar = to_pc_basis(spec, f_hat)
    nf = np.linalg.norm(f_hat)
    rho_f = fbar / nf if nf > 0 else np.zeros(spec.n)
    m = np.full(spec.n, np.nan)
    ok = np.abs(rho_f) > LOADING_TOL
    if np.linalg.norm(result.delta_star) > 0:
        m[ok] = result.similarities[ok] / rho_f[ok]
    return m


def similarity_profile(result: InterventionResult, spec: Spectrum, f_hat) -> list[dict]:
    if not np.linalg.norm(result.delta_star) > 0:
        raise PreconditionError("similarity profile needs a nonzero intervention")
    f_hat = eq.as_profile(f_hat, spec.n)
    nf = np.linalg.norm(f_hat)
    fbar = to_pc_basis(spec, f_hat)
    m = multipliers(result, spec, f_hat)
    rows = []
    for i in range(spec.n):
        rho_f = float(fbar[i] / nf) if nf > 0 else None
        rows.append(
            {
                "ell": i + 1,
                "lambda": float(spec.eigenvalues[i]),
                "rho_delta": float(result.similarities[i]),
                "rho_f_hat": rho_f,
                "m": None if np.isnan(m[i]) else float(m[i]),
            }
        )
    return rows


def small_budget_direction(spec: Spectrum, params: eq.GameParams, f_hat) -> np.ndarray:
    """Unit direction of the optimal intervention as the budget shrinks to zero.

    Component ``l`` is proportional to ``gamma * zeta_l * fhat_bar_l``.
    """
    f_hat = eq.as_profile(f_hat, spec.n)
    fbar = to_pc_basis(spec, f_hat)
    d = params.gamma * zeta(params.beta, spec.eigenvalues) * fbar
    d[0] = 0.0
    nd = np.linalg.norm(d)
    if nd == 0:
        raise PreconditionError("no component of f_hat moves welfare")
    return from_pc_basis(spec, d / nd)


def small_budget_ratios(spec: Spectrum, params: eq.GameParams, f_hat, C: float, pairs=None) -> list[dict]:
    """Multiplier ratios ``m_l / m_l'`` at budget ``C`` next to their zero-budget limit ``zeta_l / zeta_l'``.

    Only components ``l >= 2`` with nonzero loading and nonzero ``zeta`` are
    eligible; an empty list means no pair qualifies.
    """
    f_hat = eq.as_profile(f_hat, spec.n)
    z = zeta(params.beta, spec.eigenvalues)
    scale = max(float(np.linalg.norm(f_hat)), 1.0)
    fbar = to_pc_basis(spec, f_hat)
    eligible = [i for i in range(1, spec.n) if z[i] != 0.0 and abs(fbar[i]) > LOADING_TOL * scale]
    if not eligible:
        return []
    res = optimal_intervention(spec, params, f_hat, C)
    m = multipliers(res, spec, f_hat)
    if pairs is None:
        pairs = [(i + 1, j + 1) for a, i in enumerate(eligible) for j in eligible[a + 1 :]]
    rows = []
    for l1, l2 in pairs:
        i, j = l1 - 1, l2 - 1
        if i not in eligible or j not in eligible:
            continue
        ratio = float(m[i] / m[j]) if i != j else 1.0
        limit = float(z[i] / z[j]) if i != j else 1.0
        rows.append(
            {
                "ell": l1,
                "ell_prime": l2,
                "m_ratio": ratio,
                "zeta_ratio": limit,
                "relative_gap": abs(ratio - limit) / abs(limit),
            }
        )
    return rows
