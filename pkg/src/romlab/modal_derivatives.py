"""Modal derivatives, static modal derivatives, and the quadratic manifold.

The dynamic modal derivative of master pair (i, j) solves the bordered
(N+1)-dimensional system

    [ K - omega_i^2 M   -M phi_i ] [ Theta_ij        ]   [ -2 G phi_j phi_i ]
    [ -phi_i^T M         0       ] [ d omega_i^2/dR_j ] = [  0               ]

while the static variant drops the mass terms: K Theta^S_ij = -2 G phi_j phi_i.
The quadratic manifold built from the symmetrized derivatives maps reduced
coordinates R to physical space, u = phi R + 1/2 Thetabar R R, and to modal
space, X_k = R_k + 1/2 sum_ij thetabar^k_ij R_i R_j.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import DecompositionError, DimensionMismatchError, ResonanceError
from .tensors import contract_quad

DEFAULT_RESONANCE_GUARD = 1e-6


@dataclass
class ModalDerivativeSet:
    """Derivative vectors for all ordered master pairs.

    vectors[i, j] is the physical Theta_ij for master-list positions (i, j);
    modal_vectors holds the coordinates in the full eigenbasis. Symmetrized
    pairs are stored once for i <= j (the quadratic manifold only depends on
    the symmetric part).
    """

    kind: str  # "dynamic" | "static"
    masters: list
    vectors: np.ndarray  # (n_m, n_m, N)
    modal_vectors: np.ndarray  # (n_m, n_m, N)
    phi_masters: np.ndarray  # (N, n_m)
    freq_sq_gradient: np.ndarray | None = None  # (n_m, n_m), dynamic only
    _sym: dict = field(default_factory=dict, repr=False)
    _sym_modal: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        n_m = len(self.masters)
        for i in range(n_m):
            for j in range(i, n_m):
                self._sym[(i, j)] = 0.5 * (self.vectors[i, j] + self.vectors[j, i])
                self._sym_modal[(i, j)] = 0.5 * (
                    self.modal_vectors[i, j] + self.modal_vectors[j, i]
                )

    @property
    def n_masters(self):
        return len(self.masters)

    def sym_vector(self, i, j):
        """Symmetrized physical Thetabar_ij (order of i, j irrelevant)."""
        return self._sym[(i, j) if i <= j else (j, i)]

    def sym_modal_vector(self, i, j):
        return self._sym_modal[(i, j) if i <= j else (j, i)]

    def sym_modal_tensor(self):
        """(N, n_m, n_m) array thetabar^k_ij."""
        n_m = self.n_masters
        N = self.modal_vectors.shape[2]
        out = np.empty((N, n_m, n_m))
        for i in range(n_m):
            for j in range(n_m):
                out[:, i, j] = self.sym_modal_vector(i, j)
        return out


def _require_full_basis(model, modal):
    if modal.n_modes != model.n:
        raise DimensionMismatchError(
            "modal derivative bookkeeping needs the full eigenbasis "
            f"(got {modal.n_modes} of {model.n} modes)"
        )


def compute_md(model, modal, masters, resonance_guard=DEFAULT_RESONANCE_GUARD):
    """Dynamic modal derivatives from the bordered system, one solve per pair.

    Raises ResonanceError when a slave eigenfrequency is within the relative
    guard of a master one (the bordered matrix is then singular: 1:1
    resonance, where the method is known to diverge).
    """
    _require_full_basis(model, modal)
    masters = list(masters)
    n_m = len(masters)
    N = model.n
    om2 = modal.omega**2
    for i in masters:
        for s in range(N):
            if s != i and abs(om2[s] - om2[i]) < resonance_guard * om2[i]:
                raise ResonanceError(
                    f"1:1 resonance between master mode {i} and mode {s}: "
                    "bordered modal-derivative system is singular",
                    report=(i, s),
                )
    vectors = np.zeros((n_m, n_m, N))
    modal_vectors = np.zeros((n_m, n_m, N))
    grad = np.zeros((n_m, n_m))
    MPhi = model.M @ modal.phi
    for a, i in enumerate(masters):
        phi_i = modal.phi[:, i]
        bord = np.zeros((N + 1, N + 1))
        bord[:N, :N] = model.K - om2[i] * model.M
        bord[:N, N] = -model.M @ phi_i
        bord[N, :N] = -(phi_i @ model.M)
        lu, piv = sla.lu_factor(bord)
        for b, j in enumerate(masters):
            rhs = np.zeros(N + 1)
            rhs[:N] = -2.0 * contract_quad(model.G, modal.phi[:, j], phi_i)
            sol = sla.lu_solve((lu, piv), rhs)
            vectors[a, b] = sol[:N]
            grad[a, b] = sol[N]
            modal_vectors[a, b] = MPhi.T @ sol[:N]
    return ModalDerivativeSet(
        kind="dynamic",
        masters=masters,
        vectors=vectors,
        modal_vectors=modal_vectors,
        phi_masters=modal.phi[:, masters].copy(),
        freq_sq_gradient=grad,
    )


def compute_smd(model, modal, masters):
    """Static modal derivatives: one factorization of K, one solve per pair."""
    _require_full_basis(model, modal)
    masters = list(masters)
    n_m = len(masters)
    N = model.n
    try:
        lu, piv = sla.lu_factor(model.K)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise DecompositionError(f"stiffness factorization failed: {exc}") from exc
    if not np.all(np.isfinite(lu)) or np.abs(np.diag(lu)).min() == 0.0:
        raise DecompositionError("stiffness matrix is singular")
    vectors = np.zeros((n_m, n_m, N))
    modal_vectors = np.zeros((n_m, n_m, N))
    MPhi = model.M @ modal.phi
    for a, i in enumerate(masters):
        for b, j in enumerate(masters):
            rhs = -2.0 * contract_quad(model.G, modal.phi[:, j], modal.phi[:, i])
            sol = sla.lu_solve((lu, piv), rhs)
            vectors[a, b] = sol
            modal_vectors[a, b] = MPhi.T @ sol
    return ModalDerivativeSet(
        kind="static",
        masters=masters,
        vectors=vectors,
        modal_vectors=modal_vectors,
        phi_masters=modal.phi[:, masters].copy(),
    )


def md_modal_closed_form(modal, i, j, resonance_guard=DEFAULT_RESONANCE_GUARD):
    """Closed-form modal MD: theta^s_ij = -2 g^s_ij / (omega_s^2 - omega_i^2).

    The s = i component is zero. Serves as the independent oracle for the
    bordered-system solve.
    """
    om2 = modal.omega**2
    gd = modal.gd()
    theta = np.zeros(modal.n_modes)
    for s in range(modal.n_modes):
        if s == i:
            continue
        denom = om2[s] - om2[i]
        if abs(denom) < resonance_guard * om2[i]:
            raise ResonanceError(
                f"1:1 resonance between modes {i} and {s}", report=(i, s)
            )
        theta[s] = -2.0 * gd[s, i, j] / denom
    return theta


def _check_reduced(mds, R):
    R = np.asarray(R, dtype=float)
    if R.shape != (mds.n_masters,):
        raise DimensionMismatchError(
            f"reduced vector has shape {R.shape}, expected ({mds.n_masters},)"
        )
    return R


def qm_map(mds, R):
    """Quadratic-manifold mapping: returns (u, X).

    u = phi R + 1/2 sum_ij Thetabar_ij R_i R_j (physical displacement) and
    X_k = R_k + 1/2 sum_ij thetabar^k_ij R_i R_j (all modal coordinates, with
    R_k meaning the reduced coordinate for master modes and 0 otherwise).
    """
    R = _check_reduced(mds, R)
    n_m = mds.n_masters
    u = mds.phi_masters @ R
    N = mds.modal_vectors.shape[2]
    X = np.zeros(N)
    for loc, mode in enumerate(mds.masters):
        X[mode] += R[loc]
    for i in range(n_m):
        for j in range(n_m):
            u = u + 0.5 * mds.sym_vector(i, j) * R[i] * R[j]
            X = X + 0.5 * mds.sym_modal_vector(i, j) * R[i] * R[j]
    return u, X


def qm_map_velocity(mds, R, S):
    """Modal velocities on the quadratic manifold: Y = d/dt X(R(t)).

    Y_k = S_k + sum_ij thetabar^k_ij R_i S_j (using the i<->j symmetry of the
    stored tensor).
    """
    R = _check_reduced(mds, R)
    S = _check_reduced(mds, S)
    N = mds.modal_vectors.shape[2]
    Y = np.zeros(N)
    for loc, mode in enumerate(mds.masters):
        Y[mode] += S[loc]
    for i in range(mds.n_masters):
        for j in range(mds.n_masters):
            Y = Y + mds.sym_modal_vector(i, j) * R[i] * S[j]
    return Y


def qm_tangent(mds, R):
    """Tangent space of the manifold at R: columns phi_i + sum_j Thetabar_ij R_j."""
    R = _check_reduced(mds, R)
    n_m = mds.n_masters
    T = mds.phi_masters.copy()
    for i in range(n_m):
        for j in range(n_m):
            T[:, i] += mds.sym_vector(i, j) * R[j]
    return T
