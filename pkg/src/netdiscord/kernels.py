"""Backend selection for the hot kernels.

The compiled extension is preferred; the numpy fallback is used when it is
missing or when the environment variable ``NETDISCORD_PURE`` is set to a
non-empty value other than ``0``.
"""
import os

import numpy as np

from . import _pykernels

_forced_pure = os.environ.get("NETDISCORD_PURE", "") not in ("", "0")

try:
    if _forced_pure:
        raise ImportError("pure backend forced")
    from . import _kernels as _backend
    BACKEND = "compiled"
except ImportError:
    _backend = _pykernels
    BACKEND = "python"


def round_robin_schedule(n):
    """Pair ordering for one Jacobi sweep: n-1 rounds of disjoint pairs.

    Odd ``n`` gets a phantom player whose pairs are dropped, so each round
    of an odd size has (n-1)/2 pairs and there are n rounds.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = []
        for i in range(m // 2):
            p, q = players[i], players[m - 1 - i]
            if p < n and q < n:
                pairs.append((min(p, q), max(p, q)))
        rounds.append(sorted(pairs))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return np.array(rounds, dtype=np.intp).reshape(len(rounds), -1, 2)


def jacobi_eigh(a, tol, max_sweeps, backend=None):
    impl = _resolve(backend)
    sched = round_robin_schedule(a.shape[0])
    return impl.jacobi_eigh(a, sched, tol, max_sweeps)


def agent_payoffs(g, a, f, beta, backend=None):
    impl = _resolve(backend)
    return impl.agent_payoffs(g, np.asarray(a, dtype=float), np.asarray(f, dtype=float), float(beta))


def available_backends():
    names = ["python"]
    if _backend is not _pykernels or _compiled_importable():
        names.insert(0, "compiled")
    return names


def _compiled_importable():
    try:
        from . import _kernels  # noqa: F401
    except ImportError:
        return False
    return True


def _resolve(backend):
    if backend is None:
        return _backend
    if backend == "python":
        return _pykernels
    if backend == "compiled":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown backend {backend!r}")
