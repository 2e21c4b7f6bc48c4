"""Storage and contraction algebra for quadratic/cubic stiffness tensors.

The restoring force of a geometrically nonlinear structure is represented as

    F(u) = K u + G u u + H u u u

with a third-order tensor ``G`` and a fourth-order tensor ``H``. All index
summations are *full* double/triple sums over fully populated tensors; no
commutativity folding is applied. Folded-convention data (where e.g. the
coefficient of ``u_i u_j`` is stored once for ``j >= i``) maps onto this
convention by splitting each off-diagonal coefficient evenly over the index
permutations, i.e. a folded ``g^p_ps = 2 g^s_pp`` corresponds to
``g^p_ps = g^p_sp = g^s_pp`` here.

Indices are 0-based everywhere, including the file format handled in
:mod:`romlab.models`.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import DecompositionError, DimensionMismatchError, SymmetryError

# Above this dimension the cached dense representation is not built and
# contractions fall back to sparse accumulation over the entry list.
DENSE_LIMIT = 64


def _coalesce(entries, rank):
    """Sum duplicate index tuples and return a canonically sorted entry list."""
    acc = {}
    for entry in entries:
        if len(entry) != rank + 1:
            raise DimensionMismatchError(
                f"tensor entry {entry!r} must have {rank} indices and one value"
            )
        key = tuple(int(k) for k in entry[:rank])
        acc[key] = acc.get(key, 0.0) + float(entry[rank])
    return [key + (val,) for key, val in sorted(acc.items())]


class _CoordinateTensor:
    """Shared machinery for sparse coordinate tensors of fixed rank."""

    rank = None  # number of indices (value excluded)

    def __init__(self, n, entries=(), potential_symmetric=False, symmetry_tol=1e-12):
        self.n = int(n)
        if self.n <= 0:
            raise DimensionMismatchError("tensor dimension must be positive")
        self.entries = _coalesce(entries, self.rank)
        for entry in self.entries:
            for k in entry[: self.rank]:
                if not 0 <= k < self.n:
                    raise DimensionMismatchError(
                        f"index {k} out of range [0, {self.n}) in entry {entry!r}"
                    )
        self.potential_symmetric = bool(potential_symmetric)
        self._dense = None
        if self.potential_symmetric:
            self.check_symmetry(tol=symmetry_tol)

    # -- representations ---------------------------------------------------

    def dense(self):
        """Dense ndarray of shape (n,)*rank; cached. Only for n <= DENSE_LIMIT."""
        if self._dense is None:
            if self.n > DENSE_LIMIT:
                raise MemoryError(
                    f"dense representation disabled for n={self.n} > {DENSE_LIMIT}"
                )
            arr = np.zeros((self.n,) * self.rank)
            for entry in self.entries:
                arr[entry[: self.rank]] += entry[self.rank]
            self._dense = arr
        return self._dense

    @classmethod
    def from_dense(cls, arr, potential_symmetric=False, tol=0.0):
        arr = np.asarray(arr, dtype=float)
        if arr.ndim != cls.rank or len(set(arr.shape)) != 1:
            raise DimensionMismatchError(
                f"expected a cubical rank-{cls.rank} array, got shape {arr.shape}"
            )
        idx = np.argwhere(np.abs(arr) > tol)
        entries = [tuple(ix) + (arr[tuple(ix)],) for ix in idx]
        return cls(arr.shape[0], entries, potential_symmetric=potential_symmetric)

    def as_dict(self):
        return {e[: self.rank]: e[self.rank] for e in self.entries}

    @property
    def nnz(self):
        return len(self.entries)

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and self.n == other.n
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, nnz={self.nnz})"

    # -- symmetry ----------------------------------------------------------

    def is_potential_symmetric(self, tol=1e-12):
        """Full scan: value invariant under every permutation of all indices.

        For the quadratic tensor the stated relations g^i_jk = g^i_kj and
        g^i_jk = g^j_ki = g^k_ij generate the full symmetric group on the
        three indices; for the cubic tensor, full (i,j,k) symmetry plus the
        cyclic relation with p likewise generate all permutations of four.
        """
        table = self.as_dict()
        scale = max((abs(v) for v in table.values()), default=1.0)
        atol = tol * max(1.0, scale)
        for key, val in table.items():
            for perm in itertools.permutations(key):
                if abs(table.get(perm, 0.0) - val) > atol:
                    return False
        return True

    def check_symmetry(self, tol=1e-12):
        if not self.is_potential_symmetric(tol=tol):
            raise SymmetryError(
                f"{type(self).__name__} flagged potential_symmetric fails the "
                "entry-wise permutation scan"
            )

    def symmetrized(self):
        """New tensor averaged over permutations of the summed indices.

        The equation index p stays fixed; only the indices contracted with
        displacement vectors are permuted (their products commute), so the
        contraction with equal vectors is preserved exactly. This is also the
        map between folded-convention input (coefficients stored once for
        ordered indices) and the full-sum convention used here.
        """
        table = self.as_dict()
        denom = 1
        for k in range(2, self.rank):  # permutations of rank-1 summed indices
            denom *= k
        out = {}
        for key in table:
            p, rest = key[0], key[1:]
            mean = (
                sum(table.get((p,) + q, 0.0) for q in itertools.permutations(rest))
                / denom
            )
            for q in set(itertools.permutations(rest)):
                out[(p,) + q] = mean
        entries = [k + (v,) for k, v in out.items() if v != 0.0]
        return type(self)(self.n, entries, potential_symmetric=False)


class QuadTensor(_CoordinateTensor):
    """Quadratic coefficient tensor G with entries (p, i, j, value).

    ``(G u v)_p = sum_i sum_j G^p_ij u_i v_j`` with full double sums.
    """

    rank = 3

    def contract(self, u, v):
        return contract_quad(self, u, v)


class CubicTensor(_CoordinateTensor):
    """Cubic coefficient tensor H with entries (p, i, j, k, value)."""

    rank = 4

    def contract(self, u, v, w):
        return contract_cubic(self, u, v, w)


def _check_vec(x, n, name):
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise DimensionMismatchError(f"{name} has shape {x.shape}, expected ({n},)")
    return x


def contract_quad(G, u, v):
    """(G u v)_p = sum_ij G^p_ij u_i v_j."""
    u = _check_vec(u, G.n, "u")
    v = _check_vec(v, G.n, "v")
    if G.n <= DENSE_LIMIT:
        return np.einsum("pij,i,j->p", G.dense(), u, v)
    out = np.zeros(G.n)
    for p, i, j, val in G.entries:
        out[p] += val * u[i] * v[j]
    return out


def contract_cubic(H, u, v, w):
    """(H u v w)_p = sum_ijk H^p_ijk u_i v_j w_k."""
    u = _check_vec(u, H.n, "u")
    v = _check_vec(v, H.n, "v")
    w = _check_vec(w, H.n, "w")
    if H.n <= DENSE_LIMIT:
        return np.einsum("pijk,i,j,k->p", H.dense(), u, v, w)
    out = np.zeros(H.n)
    for p, i, j, k, val in H.entries:
        out[p] += val * u[i] * v[j] * w[k]
    return out


class StructuralModel:
    """Physical-space model: mass M, tangent stiffness K, tensors G and H.

    Parameters
    ----------
    M, K : (n, n) arrays. M must be symmetric positive definite, K symmetric.
    G : QuadTensor
    H : CubicTensor
    Q : external force vector, optional (unused by the conservative analyses
        but part of the equation of motion M u'' + F(u) = Q).
    labels : optional coordinate labels carried through file round trips.
    """

    def __init__(self, M, K, G, H, Q=None, labels=None, validate=True):
        self.M = np.asarray(M, dtype=float)
        self.K = np.asarray(K, dtype=float)
        self.G = G
        self.H = H
        self.n = self.M.shape[0]
        self.Q = np.zeros(self.n) if Q is None else np.asarray(Q, dtype=float)
        self.labels = list(labels) if labels is not None else None
        if validate:
            self.validate()

    def validate(self, tol=1e-10):
        n = self.n
        if self.M.shape != (n, n) or self.K.shape != (n, n):
            raise DimensionMismatchError("M and K must be square with equal size")
        if self.G.n != n or self.H.n != n:
            raise DimensionMismatchError("tensor dimensions must equal the dof count")
        if self.Q.shape != (n,):
            raise DimensionMismatchError("Q must have length n")
        scale_m = max(1.0, np.abs(self.M).max())
        if np.abs(self.M - self.M.T).max() > tol * scale_m:
            raise SymmetryError("mass matrix is not symmetric")
        scale_k = max(1.0, np.abs(self.K).max())
        if np.abs(self.K - self.K.T).max() > tol * scale_k:
            raise SymmetryError("stiffness matrix is not symmetric")
        k = spd_failure_index(self.M)
        if k is not None:
            raise DecompositionError(
                f"mass matrix is not positive definite (leading minor {k + 1})"
            )

    @property
    def symmetric_tensors(self):
        return self.G.potential_symmetric and self.H.potential_symmetric


def spd_failure_index(A, tol=0.0):
    """Return the 0-based size of the first non-positive leading minor, or None.

    Equivalent to running a Cholesky factorization and reporting where it
    breaks down; used to produce actionable ingestion errors.
    """
    A = np.asarray(A, dtype=float)
    for k in range(A.shape[0]):
        try:
            np.linalg.cholesky(A[: k + 1, : k + 1])
        except np.linalg.LinAlgError:
            return k
    return None


def force(model, u):
    """Restoring force K u + G u u + H u u u."""
    u = _check_vec(u, model.n, "u")
    return model.K @ u + contract_quad(model.G, u, u) + contract_cubic(model.H, u, u, u)


def jacobian(model, u):
    """Analytic force Jacobian K + 2 G u + 3 H u u.

    Valid only for potential-symmetric tensors (the factor-2/3 collapse of the
    permuted index sums needs the symmetry); raises SymmetryError otherwise.
    """
    u = _check_vec(u, model.n, "u")
    if not model.symmetric_tensors:
        raise SymmetryError(
            "analytic Jacobian requires tensors flagged potential_symmetric"
        )
    Gd = model.G.dense()
    Hd = model.H.dense()
    return (
        model.K
        + 2.0 * np.einsum("rsj,j->rs", Gd, u)
        + 3.0 * np.einsum("rsjk,j,k->rs", Hd, u, u)
    )


def hessian_action(model, u):
    """Second force derivative 2 G + 6 H u, returned as a QuadTensor.

    Entry (r, s, p) is d^2 F_r / du_s du_p evaluated at ``u``; requires
    potential-symmetric tensors like :func:`jacobian`.
    """
    u = _check_vec(u, model.n, "u")
    if not model.symmetric_tensors:
        raise SymmetryError(
            "analytic Hessian requires tensors flagged potential_symmetric"
        )
    arr = 2.0 * model.G.dense() + 6.0 * np.einsum(
        "rspk,k->rsp", model.H.dense(), u
    )
    return QuadTensor.from_dense(arr)


def energy(model, x, v):
    """Total mechanical energy for a conservative potential-symmetric model.

    V(u) = 1/2 u.K.u + 1/3 G u u . u + 1/4 H u u u . u, whose gradient is the
    full-sum restoring force when the tensors carry potential symmetry.
    """
    x = _check_vec(x, model.n, "x")
    v = _check_vec(v, model.n, "v")
    if not model.symmetric_tensors:
        raise SymmetryError("energy requires potential-symmetric tensors")
    quad = contract_quad(model.G, x, x) @ x / 3.0
    cub = contract_cubic(model.H, x, x, x) @ x / 4.0
    return 0.5 * v @ model.M @ v + 0.5 * x @ model.K @ x + quad + cub


def to_modal(model, phi, omega, tol=1e-8):
    """Transform a StructuralModel into modal space.

    Parameters
    ----------
    phi : (n, m) matrix of mass-normalized eigenvectors (phi^T M phi = I).
    omega : (m,) eigenfrequencies matching the columns of phi.

    Returns a :class:`ModalModel` with g_ij = Phi^T G phi_i phi_j and the
    analogous cubic transform; the linear part is diag(omega^2).
    """
    from .eigen import ModalModel  # local import to avoid a cycle

    phi = np.asarray(phi, dtype=float)
    omega = np.asarray(omega, dtype=float)
    n = model.n
    if phi.shape[0] != n or phi.shape[1] != omega.shape[0]:
        raise DimensionMismatchError("phi/omega shapes inconsistent with model")
    gram = phi.T @ model.M @ phi
    if np.abs(gram - np.eye(phi.shape[1])).max() > tol:
        raise DimensionMismatchError(
            "eigenvector matrix is not mass-normalized (phi^T M phi != I)"
        )
    Gd = model.G.dense()
    Hd = model.H.dense()
    g = np.einsum("rp,rab,ai,bj->pij", phi, Gd, phi, phi, optimize=True)
    h = np.einsum("rp,rabc,ai,bj,ck->pijk", phi, Hd, phi, phi, phi, optimize=True)
    sym = model.symmetric_tensors
    return ModalModel(
        n=n,
        omega=omega.copy(),
        phi=phi.copy(),
        g=QuadTensor.from_dense(g, potential_symmetric=False, tol=0.0)
        if not sym
        else _symmetric_from_dense(QuadTensor, g),
        h=CubicTensor.from_dense(h, potential_symmetric=False, tol=0.0)
        if not sym
        else _symmetric_from_dense(CubicTensor, h),
    )


def _symmetric_from_dense(cls, arr, tol=1e-9):
    """Build a tensor from dense data, flagging symmetry when it survives.

    The congruent modal transform preserves potential symmetry only up to
    floating-point noise, so the scan runs with a loose tolerance and the
    flag is dropped (not errored) when it fails.
    """
    out = cls.from_dense(arr, potential_symmetric=False)
    if out.is_potential_symmetric(tol=tol):
        out.potential_symmetric = True
    return out
