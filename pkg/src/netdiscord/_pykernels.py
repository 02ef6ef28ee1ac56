"""Pure numpy implementations of the hot kernels.

Used when the compiled ``_kernels`` extension is unavailable, or when
``NETDISCORD_PURE=1`` is set.  Results agree with the compiled versions to
rounding; both follow the same rotation schedule.
"""
import numpy as np


def jacobi_eigh(a, schedule, tol, max_sweeps):
    """Cyclic Jacobi on a symmetric matrix using a round-robin pair ordering.

    The pairs within one round are disjoint, so their rotations commute and
    are applied together as one block rotation.

    Returns ``(eigenvalues, eigenvectors, sweeps, off_norm)``; the eigenvalues
    come back in diagonal order (unsorted).
    """
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    off = _off_norm(a)
    sweeps = 0
    while off > tol and sweeps < max_sweeps:
        for pairs in schedule:
            p = pairs[:, 0]
            q = pairs[:, 1]
            apq = a[p, q]
            live = apq != 0.0
            if not live.any():
                continue
            p = p[live]
            q = q[live]
            apq = apq[live]
            app = a[p, p]
            aqq = a[q, q]
            theta = (aqq - app) / (2.0 * apq)
            with np.errstate(over="ignore"):
                t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            rp = a[p, :].copy()
            rq = a[q, :]
            a[p, :] = c[:, None] * rp - s[:, None] * rq
            a[q, :] = s[:, None] * rp + c[:, None] * rq
            cp = a[:, p].copy()
            cq = a[:, q]
            a[:, p] = cp * c - cq * s
            a[:, q] = cp * s + cq * c
            a[p, p] = app - t * apq
            a[q, q] = aqq + t * apq
            a[p, q] = 0.0
            a[q, p] = 0.0

            vp = v[:, p].copy()
            vq = v[:, q]
            v[:, p] = vp * c - vq * s
            v[:, q] = vp * s + vq * c
        sweeps += 1
        off = _off_norm(a)
    return np.diag(a).copy(), v, sweeps, off


def _off_norm(a):
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(off * off)))


def agent_payoffs(g, a, f, beta):
    diff = a[:, None] - a[None, :]
    dist = (a - f) ** 2
    return -beta * np.sum(g * diff * diff, axis=1) - (1.0 - beta) * dist * g.sum(axis=1)
