"""Eigendecomposition of a network and principal-component coordinates."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConvergenceError, PreconditionError
from .network import Network, require_valid

JACOBI_MAX_SWEEPS = 100
SIGN_TIE_TOL = 1e-12
UNIT_EIGENVALUE_TOL = 1e-9


class DegenerateSpectrumWarning(UserWarning):
    """An operation depends on an eigenvector whose eigenvalue is repeated."""


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in descending order with matching orthonormal eigenvectors.

    ``eigenvectors[:, l]`` is the principal component for ``eigenvalues[l]``.
    ``weights`` keeps the matrix that was decomposed so that natural-basis
    cross-checks can be run from a spectrum alone.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    weights: np.ndarray | None = None
    sweeps: int = 0

    @property
    def n(self):
        return len(self.eigenvalues)

    def component(self, ell):
        """Eigenvector ``u^ell`` using 1-based numbering."""
        return self.eigenvectors[:, ell - 1]

    def to_json_dict(self):
        return {
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "eigenvectors": [[float(x) for x in col] for col in self.eigenvectors.T],
        }


def decompose(net: Network, backend: str | None = None) -> Spectrum:
    require_valid(net)
    g = np.array(net.weights)
    n = net.n
    tol = 1e-12 * n
    if n == 1:
        w, v, sweeps, off = np.zeros(1), np.ones((1, 1)), 0, 0.0
    else:
        w, v, sweeps, off = kernels.jacobi_eigh(g, tol, JACOBI_MAX_SWEEPS, backend=backend)
    if off > tol:
        raise ConvergenceError(
            f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps (off-diagonal norm {off:.3e})",
            residual=off,
            iterations=sweeps,
        )
    order = np.lexsort((np.arange(n), -w))
    w = w[order]
    v = v[:, order]
    v = _fix_unit_eigenspace(w, v)
    v = canonicalize_signs(v)
    w.flags.writeable = False
    v.flags.writeable = False
    g.flags.writeable = False
    return Spectrum(w, v, g, int(sweeps))


def _fix_unit_eigenspace(w, v):
    # A disconnected network has a repeated eigenvalue 1; rotate that
    # eigenspace so the constant vector comes first.
    k = int(np.sum(np.abs(w - 1.0) <= UNIT_EIGENVALUE_TOL))
    if k <= 1:
        return v
    n = v.shape[0]
    block = v[:, :k]
    ones = np.full(n, 1.0 / np.sqrt(n))
    basis = [ones]
    for col in block.T:
        x = col.copy()
        for b in basis:
            x -= np.dot(b, x) * b
        nrm = np.linalg.norm(x)
        if nrm > 1e-8 and len(basis) < k:
            basis.append(x / nrm)
    v = v.copy()
    v[:, :k] = np.column_stack(basis)
    return v


def canonicalize_signs(v: np.ndarray) -> np.ndarray:
    """Flip columns so the largest-magnitude entry of each is positive.

    Entries within ``SIGN_TIE_TOL`` of the maximum count as tied; the lowest
    index among them decides.
    """
    v = np.array(v, dtype=float, copy=True)
    mag = np.abs(v)
    for col in range(v.shape[1]):
        top = mag[:, col].max()
        i = int(np.nonzero(mag[:, col] >= top - SIGN_TIE_TOL)[0][0])
        if v[i, col] < 0:
            v[:, col] = -v[:, col]
    return v


def check_distinct(spec: Spectrum, tol: float = 1e-8) -> bool:
    if spec.n < 2:
        return True
    gaps = spec.eigenvalues[:-1] - spec.eigenvalues[1:]
    return bool(gaps.min() > tol)


def is_isolated(spec: Spectrum, ell: int, tol: float = 1e-8) -> bool:
    """True when eigenvalue ``ell`` (1-based) differs from its neighbours by more than ``tol``."""
    lam = spec.eigenvalues
    i = ell - 1
    left = i == 0 or lam[i - 1] - lam[i] > tol
    right = i == spec.n - 1 or lam[i] - lam[i + 1] > tol
    return bool(left and right)


def warn_if_degenerate(spec: Spectrum, ell: int, tol: float = 1e-8) -> bool:
    if is_isolated(spec, ell, tol):
        return False
    warnings.warn(
        f"eigenvalue {ell} is repeated; the reported eigenvector is one basis choice within its eigenspace",
        DegenerateSpectrumWarning,
        stacklevel=3,
    )
    return True


def _check_len(spec, z):
    z = np.asarray(z, dtype=float)
    if z.shape != (spec.n,):
        raise PreconditionError(f"profile has shape {z.shape}, expected ({spec.n},)")
    return z


def to_pc_basis(spec: Spectrum, z) -> np.ndarray:
    return spec.eigenvectors.T @ _check_len(spec, z)


def from_pc_basis(spec: Spectrum, zbar) -> np.ndarray:
    return spec.eigenvectors @ _check_len(spec, zbar)


def reconstruction_error(spec: Spectrum) -> float:
    u = spec.eigenvectors
    return float(np.max(np.abs((u * spec.eigenvalues) @ u.T - spec.weights)))


def orthonormality_error(spec: Spectrum) -> float:
    u = spec.eigenvectors
    return float(np.max(np.abs(u.T @ u - np.eye(spec.n))))
