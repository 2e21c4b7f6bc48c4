"""Shared test utilities: random potential-symmetric models, brute-force
contraction oracles, and a tiny exact polynomial engine in (R, S) used to
collect monomial coefficients of composed mappings."""

import itertools

import numpy as np

from romlab.tensors import CubicTensor, QuadTensor, StructuralModel


def symmetrize_dense(arr):
    """Average a dense tensor over all permutations of its axes."""
    rank = arr.ndim
    out = np.zeros_like(arr)
    perms = list(itertools.permutations(range(rank)))
    for perm in perms:
        out += np.transpose(arr, perm)
    return out / len(perms)


def random_symmetric_model(n, rng, nl_scale=0.3, identity_mass=False, min_gap=0.25):
    """Random potential-symmetric model with well-separated eigenvalues.

    Eigenfrequencies are spread out so no pair is close to 1:1; the
    stiffness is assembled from a random orthogonal basis.
    """
    if identity_mass:
        M = np.eye(n)
    else:
        A = rng.standard_normal((n, n))
        M = A @ A.T + n * np.eye(n)
    while True:
        om = np.sort(0.8 + 2.5 * rng.random(n) + np.arange(n))
        if np.all(np.diff(om) > min_gap):
            break
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    L = np.linalg.cholesky(M)
    # K = L Q diag(om^2) Q^T L^T gives the generalized spectrum om^2
    K = L @ Q @ np.diag(om**2) @ Q.T @ L.T
    K = 0.5 * (K + K.T)
    Gd = symmetrize_dense(rng.standard_normal((n, n, n)) * nl_scale)
    Hd = symmetrize_dense(rng.standard_normal((n, n, n, n)) * nl_scale)
    G = QuadTensor.from_dense(Gd, potential_symmetric=True)
    H = CubicTensor.from_dense(Hd, potential_symmetric=True)
    return StructuralModel(M=M, K=K, G=G, H=H)


def loop_contract_quad(entries, u, v, n):
    """Naive per-entry triple-loop oracle for the quadratic contraction."""
    out = np.zeros(n)
    for p, i, j, val in entries:
        out[p] += val * u[i] * v[j]
    return out


def loop_contract_cubic(entries, u, v, w, n):
    out = np.zeros(n)
    for p, i, j, k, val in entries:
        out[p] += val * u[i] * v[j] * w[k]
    return out


def fd_jacobian(fn, u, h=1e-6):
    """Central finite differences of a vector function."""
    u = np.asarray(u, dtype=float)
    f0 = fn(u)
    J = np.zeros((f0.size, u.size))
    for j in range(u.size):
        up, um = u.copy(), u.copy()
        up[j] += h
        um[j] -= h
        J[:, j] = (fn(up) - fn(um)) / (2 * h)
    return J


# ---------------------------------------------------------------------------
# exact polynomial algebra in two variables (R, S)
# ---------------------------------------------------------------------------

class Poly2(dict):
    """Polynomial in (R, S): maps exponent pairs (i, j) to coefficients."""

    @classmethod
    def of(cls, items):
        p = cls()
        for (i, j), c in items.items():
            if c != 0.0:
                p[(i, j)] = p.get((i, j), 0.0) + c
        return p

    def __add__(self, other):
        out = Poly2(self)
        for key, c in other.items():
            out[key] = out.get(key, 0.0) + c
        return out

    def scale(self, a):
        return Poly2({k: a * c for k, c in self.items()})

    def mul(self, other):
        out = Poly2()
        for (i1, j1), c1 in self.items():
            for (i2, j2), c2 in other.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0.0) + c1 * c2
        return out

    def d_dR(self):
        return Poly2({(i - 1, j): i * c for (i, j), c in self.items() if i > 0})

    def d_dS(self):
        return Poly2({(i, j - 1): j * c for (i, j), c in self.items() if j > 0})

    def time_derivative(self, accel):
        """d/dt with dR/dt = S and dS/dt = accel(R, S) (a Poly2)."""
        S = Poly2({(0, 1): 1.0})
        return self.d_dR().mul(S) + self.d_dS().mul(accel)

    def coefficient(self, i, j):
        return self.get((i, j), 0.0)


def nf_composed_residual(modal, coeffs):
    """Exact monomial coefficients of the modal EOM composed with the
    normal-form map, using the reduced dynamics for accelerations.

    Returns a list of Poly2, one per modal equation. On the invariant
    manifold every quadratic monomial of the master equation must vanish.
    """
    from romlab.normal_form import nf_reduced_dynamics

    p = coeffs.master
    m = modal.n_modes
    osc = nf_reduced_dynamics(coeffs, modal)
    w2 = osc.omega_p**2
    accel = Poly2(
        {
            (1, 0): -w2,
            (3, 0): -osc.c4,
            (1, 2): -osc.c5 / w2,
        }
    )
    R = Poly2({(1, 0): 1.0})
    S = Poly2({(0, 1): 1.0})
    X = []
    for s in range(m):
        comp = R.mul(R).scale(coeffs.a[s]) + S.mul(S).scale(coeffs.b[s])
        if coeffs.order == 3:
            comp = comp + R.mul(R).mul(R).scale(coeffs.r[s])
            comp = comp + R.mul(S).mul(S).scale(coeffs.u[s])
        if s == p:
            comp = comp + R
        X.append(comp)
    Xdd = [x.time_derivative(accel).time_derivative(accel) for x in X]
    gd = modal.gd()
    hd = modal.hd()
    om2 = modal.omega**2
    residuals = []
    for k in range(m):
        res = Xdd[k] + X[k].scale(om2[k])
        for i in range(m):
            for j in range(m):
                if gd[k, i, j] != 0.0:
                    res = res + X[i].mul(X[j]).scale(gd[k, i, j])
        for i in range(m):
            for j in range(m):
                for l in range(m):
                    if hd[k, i, j, l] != 0.0:
                        res = res + X[i].mul(X[j]).mul(X[l]).scale(hd[k, i, j, l])
        residuals.append(res)
    return residuals
