"""Generalized symmetric eigenproblem (K - omega^2 M) phi = 0."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import DecompositionError, DimensionMismatchError, RigidBodyModeError
from .tensors import CubicTensor, QuadTensor


@dataclass
class ModalModel:
    """Linear modal data plus modal nonlinear tensors.

    omega is sorted ascending with all entries > 0; phi columns are
    mass-normalized (phi^T M phi = I); g and h live on the retained modes,
    so the linear part of the modal equations is diag(omega^2).
    """

    n: int
    omega: np.ndarray
    phi: np.ndarray
    g: QuadTensor
    h: CubicTensor

    @property
    def n_modes(self):
        return self.omega.shape[0]

    def gd(self):
        return self.g.dense()

    def hd(self):
        return self.h.dense()


def solve_modes(model, count=None):
    """First ``count`` eigenpairs of (K - omega^2 M) phi = 0, mass-normalized.

    The problem is reduced to a standard symmetric one through the Cholesky
    factor of M (robust for the SPD mass this framework guarantees), then
    solved with a dense symmetric eigensolver. Sign convention: the
    largest-magnitude entry of each eigenvector is positive. Modal tensors
    are computed for the retained modes via the Appendix-C style congruent
    transform.

    Raises
    ------
    DecompositionError : M not positive definite.
    RigidBodyModeError : a non-positive eigenvalue was found.
    """
    from .tensors import to_modal

    n = model.n
    if count is None:
        count = n
    if not 1 <= count <= n:
        raise DimensionMismatchError(f"count must be in [1, {n}]")
    try:
        L = sla.cholesky(model.M, lower=True)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(f"mass matrix Cholesky failed: {exc}") from exc
    # A = L^-1 K L^-T, symmetrized against roundoff
    tmp = sla.solve_triangular(L, model.K, lower=True)
    A = sla.solve_triangular(L, tmp.T, lower=True).T
    A = 0.5 * (A + A.T)
    lam, Y = sla.eigh(A)
    lam = lam[:count]
    Y = Y[:, :count]
    scale = max(abs(lam[-1]), 1.0)
    if lam[0] <= 1e-10 * scale:
        raise RigidBodyModeError(
            f"non-positive eigenvalue {lam[0]:.3e}: rigid-body or unstable mode"
        )
    phi = sla.solve_triangular(L.T, Y, lower=False)
    for k in range(count):
        col = phi[:, k]
        if col[np.argmax(np.abs(col))] < 0:
            phi[:, k] = -col
    omega = np.sqrt(lam)
    return to_modal(model, phi, omega)
