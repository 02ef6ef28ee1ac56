"""Verification suite: every closed-form result checked against a direct
computation or a brute-force search.

Each ``check_*`` returns a JSON-ready report with ``name``, ``ok``,
``runtime_s`` and the worst residual seen.  Tolerances default to the
acceptance thresholds and can be overridden.
"""
from __future__ import annotations

import time

import numpy as np

from . import equilibrium as eq
from . import fixtures, oracle, planner, spectral, stats
from .network import make_circle


def _report(name, ok, t0, **extra):
    out = {"name": name, "ok": bool(ok), "runtime_s": round(time.perf_counter() - t0, 6)}
    out.update(extra)
    return out


def check_welfare_identity(seed=0, count=200, tol=1e-9):
    t0 = time.perf_counter()
    worst = 0.0
    bad = []
    for k, (net, beta, f) in enumerate(fixtures.random_instances(seed, count)):
        spec = spectral.decompose(net)
        params = eq.GameParams(beta)
        direct = eq.equilibrium_welfare(net, params, f)
        spectral_w = stats.welfare_spectral(spec, params, f)
        gap = abs(direct - spectral_w) / (1 + abs(direct))
        worst = max(worst, gap)
        if gap > tol:
            bad.append({"instance": k, "n": net.n, "beta": beta, "gap": gap})
    return _report("welfare-identity", not bad, t0, instances=count, tol=tol, worst_gap=worst, failures=bad[:5])


def check_covariance_identities(seed=0, count=200, tol=1e-9):
    t0 = time.perf_counter()
    worst = {"cov_neighbors": 0.0, "cov_random_pair": 0.0}
    bad = []
    for k, (net, beta, f) in enumerate(fixtures.random_instances(seed, count)):
        f = f - f.mean()
        spec = spectral.decompose(net)
        params = eq.GameParams(beta)
        a = eq.solve_equilibrium(net, params, f)
        a = a - a.mean()  # mean is zero up to rounding; the statistics require it exactly
        pairs = {
            "cov_neighbors": (stats.cov_neighbors(net, a), stats.cov_neighbors_spectral(spec, params, f)),
            "cov_random_pair": (stats.cov_random_pair(a), stats.cov_random_pair_spectral(spec, params, f)),
        }
        for key, (d, s) in pairs.items():
            gap = abs(d - s) / (1 + abs(d))
            worst[key] = max(worst[key], gap)
            if gap > tol:
                bad.append({"instance": k, "stat": key, "n": net.n, "beta": beta, "gap": gap})
    return _report("covariance-identities", not bad, t0, instances=count, tol=tol, worst_gap=worst, failures=bad[:5])


def check_simple_planner(seed=0, count=20, rtol=1e-6, cos_tol=1e-5):
    """Sphere search against the top/bottom eigenvector optimum."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    rows = []
    for k in range(count):
        n = int(rng.integers(4, 11))
        net = fixtures.generic_network(rng, n)
        beta = float(rng.choice([0.3, 0.6, 0.9]))
        gamma = 1 if k % 2 else -1
        params = eq.GameParams(beta, gamma)
        spec = spectral.decompose(net)
        pred = planner.simple_optimal_f(spec, params)
        res = oracle.sphere_search(net, params, oracle.SearchConfig(seed=seed + k))
        rel = abs(res.value - pred.value) / abs(pred.value)
        cos = abs(planner.cosine_similarity(res.best, pred.f_star))
        rows.append(
            {"instance": k, "n": n, "beta": beta, "gamma": gamma, "predicted": pred.value, "found": res.value,
             "relative_error": rel, "abs_cosine": cos, "ok": bool(rel <= rtol and cos >= 1 - cos_tol)}
        )
    ok = all(r["ok"] for r in rows)
    return _report(
        "simple-planner", ok, t0, instances=count, rtol=rtol, cos_tol=cos_tol,
        worst_relative_error=max(r["relative_error"] for r in rows),
        worst_abs_cosine=min(r["abs_cosine"] for r in rows),
        failures=[r for r in rows if not r["ok"]][:5],
    )


def check_covariance_extremizers(seed=0, samples=100_000, betas=(0.3, 0.7), tol=1e-9):
    t0 = time.perf_counter()
    tables = []
    for name, net in (("circle6", make_circle(6)), ("two_block", fixtures.two_block())):
        for beta in betas:
            rep = oracle.verify_prop2_table(net, eq.GameParams(beta), samples, seed, tol=tol)
            rep["network"] = name
            tables.append(rep)
    return _report("covariance-extremizers", all(t["ok"] for t in tables), t0, samples=samples, tol=tol, tables=tables)


def _budget_for(rng, spec, gamma, f_hat):
    fbar = spectral.to_pc_basis(spec, f_hat)
    if gamma == 1:
        return float(rng.uniform(0.05, 0.95) * np.sum(fbar[1:] ** 2))
    return float(rng.uniform(0.05, 2.0) * (f_hat @ f_hat))


def check_intervention(seed=0, count=100, budget_tol=1e-9, rtol=1e-6, max_search_n=8):
    """Budget binds, sign and ordering of the component multipliers, and
    welfare agrees with the constrained brute-force search."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    rows = []
    for k in range(count):
        n = int(rng.integers(4, max_search_n + 1))
        net = fixtures.generic_network(rng, n)
        beta = float(rng.choice([0.3, 0.6, 0.9]))
        gamma = 1 if k % 2 else -1
        params = eq.GameParams(beta, gamma)
        spec = spectral.decompose(net)
        f_hat = rng.standard_normal(n)
        C = _budget_for(rng, spec, gamma, f_hat)
        res = planner.optimal_intervention(spec, params, f_hat, C)
        idx = np.nonzero(res.loaded)[0]
        x = res.x[idx]
        budget_err = abs(res.budget_used - C) / max(1.0, C)
        signs = bool(np.all((x > 0) if gamma == -1 else ((x < 0) & (x > -1))))
        ax = np.abs(x)
        ordered = bool(np.all(np.diff(ax) >= -1e-12 * (1 + ax[:-1])))
        found = oracle.constrained_search(net, params, f_hat, C, oracle.SearchConfig(seed=seed + k))
        w_rel = abs(found.value - res.welfare_after) / max(abs(res.welfare_after), 1e-12)
        rows.append(
            {"instance": k, "n": n, "beta": beta, "gamma": gamma, "budget": C, "budget_error": budget_err,
             "signs_ok": signs, "ordered": ordered, "welfare_closed_form": res.welfare_after,
             "welfare_search": found.value, "welfare_relative_gap": w_rel,
             "ok": bool(budget_err <= budget_tol and signs and ordered and w_rel <= rtol)}
        )
    return _report(
        "intervention", all(r["ok"] for r in rows), t0, instances=count, budget_tol=budget_tol, rtol=rtol,
        worst_budget_error=max(r["budget_error"] for r in rows),
        worst_welfare_gap=max(r["welfare_relative_gap"] for r in rows),
        failures=[r for r in rows if not r["ok"]][:5],
    )


def check_small_budget(seed=0, count=20, budgets=(1e-4, 1e-6, 1e-8), tol=1e-2):
    """Multiplier ratios approach the ratio of welfare weights as the budget shrinks."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    rows = []
    for k in range(count):
        n = int(rng.integers(4, 9))
        net = fixtures.generic_network(rng, n)
        beta = float(rng.choice([0.3, 0.6, 0.9]))
        gamma = 1 if k % 2 else -1
        params = eq.GameParams(beta, gamma)
        spec = spectral.decompose(net)
        f_hat = rng.standard_normal(n)
        gaps = []
        for C in budgets:
            table = planner.small_budget_ratios(spec, params, f_hat, C)
            gaps.append(np.array([r["relative_gap"] for r in table]))
        g = np.vstack(gaps)
        monotone = bool(np.all(np.diff(g, axis=0) <= 1e-12))
        final = float(g[-1].max())
        rows.append(
            {"instance": k, "n": n, "beta": beta, "gamma": gamma, "max_gap_by_budget": g.max(axis=1).tolist(),
             "monotone": monotone, "ok": bool(monotone and final <= tol)}
        )
    return _report(
        "small-budget", all(r["ok"] for r in rows), t0, instances=count, budgets=list(budgets), tol=tol,
        worst_final_gap=max(r["max_gap_by_budget"][-1] for r in rows),
        failures=[r for r in rows if not r["ok"]][:5],
    )


def check_equilibrium(seed=0, count=200, solver_tol=2e-12, bound_tol=1e-10):
    """LU against Neumann series, plus the averaging bounds and mean preservation."""
    t0 = time.perf_counter()
    worst = {"solver_gap": 0.0, "bound_excess": 0.0, "mean_shift": 0.0}
    bad = []
    for k, (net, beta, f) in enumerate(fixtures.random_instances(seed, count)):
        params = eq.GameParams(beta)
        a = eq.solve_equilibrium(net, params, f)
        a_n = eq.solve_equilibrium_neumann(net, params, f, tol=1e-12)
        gap = float(np.max(np.abs(a - a_n)))
        excess = float(max(0.0, np.max(a) - np.max(f), np.min(f) - np.min(a)))
        shift = abs(float(a.mean() - f.mean()))
        worst["solver_gap"] = max(worst["solver_gap"], gap)
        worst["bound_excess"] = max(worst["bound_excess"], excess)
        worst["mean_shift"] = max(worst["mean_shift"], shift)
        if gap > solver_tol or excess > bound_tol or shift > bound_tol:
            bad.append({"instance": k, "n": net.n, "beta": beta, "solver_gap": gap, "bound_excess": excess, "mean_shift": shift})
    return _report("equilibrium", not bad, t0, instances=count, solver_tol=solver_tol, bound_tol=bound_tol, worst=worst, failures=bad[:5])


def check_homophily(seed=0, count=10, beta=0.9, threshold=0.2, min_lambda2=0.9, budget=1.0):
    """Malevolent optimum on homophilous networks barely uses the second component."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    params = eq.GameParams(beta, -1)
    rows = []
    for k, net in enumerate(fixtures.homophilous(count)):
        spec = spectral.decompose(net)
        lam = spec.eigenvalues
        f_hat = rng.standard_normal(net.n)
        res = planner.optimal_intervention(spec, params, f_hat, budget)
        m = planner.multipliers(res, spec, f_hat)
        m2 = abs(m[1])
        ratio = m2 / np.nanmax(np.abs(m[1:]))
        zeta_ratio = stats.zeta(beta, lam[1]) / stats.zeta(beta, lam[-1])
        rho2 = abs(res.similarities[1])
        ok = lam[1] >= min_lambda2 and rho2 <= m2 + 1e-12 and ratio <= threshold and ratio <= zeta_ratio + 1e-12
        rows.append(
            {"instance": k, "lambda2": float(lam[1]), "abs_rho_delta_u2": float(rho2), "abs_m2": float(m2),
             "m2_over_max": float(ratio), "zeta_ratio": float(zeta_ratio), "ok": bool(ok)}
        )
    return _report(
        "homophily", all(r["ok"] for r in rows), t0, instances=count, beta=beta, threshold=threshold,
        worst_ratio=max(r["m2_over_max"] for r in rows), min_lambda2=min(r["lambda2"] for r in rows),
        failures=[r for r in rows if not r["ok"]][:5],
    )


def check_eigensolver(seed=0, tol=1e-8):
    t0 = time.perf_counter()
    rows = []
    for name, net in fixtures.eigensolver_fixtures().items():
        spec = spectral.decompose(net)
        rec = spectral.reconstruction_error(spec)
        orth = spectral.orthonormality_error(spec)
        rows.append({"fixture": name, "n": net.n, "sweeps": spec.sweeps, "reconstruction": rec,
                     "orthonormality": orth, "ok": bool(rec <= tol and orth <= tol)})
    return _report("eigensolver", all(r["ok"] for r in rows), t0, tol=tol, fixtures=rows)


SUITES = {
    "welfare-identity": check_welfare_identity,
    "covariance-identities": check_covariance_identities,
    "simple-planner": check_simple_planner,
    "covariance-extremizers": check_covariance_extremizers,
    "intervention": check_intervention,
    "small-budget": check_small_budget,
    "equilibrium": check_equilibrium,
    "homophily": check_homophily,
    "eigensolver": check_eigensolver,
}


def run(names, seed=0):
    if "all" in names:
        names = list(SUITES)
    return [SUITES[name](seed=seed) for name in names]
