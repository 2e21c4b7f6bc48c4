"""Harmonic balance discretization and pseudo-arclength backbone continuation.

Periodic orbits are represented by truncated Fourier series; the residual of
a second-order system (with displacement, velocity and acceleration products
up to cubic order) is evaluated by alternating frequency/time: sample the
signal and its exact derivatives on a uniform grid fine enough that the
Galerkin projection of degree-3 products is alias-free, evaluate the
equation of motion pointwise, project back.

Backbones of conservative systems are computed in the cosine-only subspace:
every system handled here is time-reversible (even in velocity), so orbits
can be anchored as even functions of time. That satisfies the phase
condition s_1(master) = 0 identically and removes the time-shift family;
pseudo-arclength stepping in (cosine coefficients, omega) then traverses
folds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContinuationError, DimensionMismatchError
from .modal_derivatives import ModalDerivativeSet
from .normal_form import NormalFormCoeffs, nf_map
from .tensors import contract_cubic, contract_quad


# ---------------------------------------------------------------------------
# Fourier representation
# ---------------------------------------------------------------------------

def default_aft_samples(n_harm):
    """Smallest power of two giving alias-free projection of cubic products."""
    nt = 32
    while nt < 6 * n_harm + 2:
        nt *= 2
    return nt


_BASIS_CACHE = {}


def _bases(n_harm, nt):
    """Displacement/velocity/acceleration basis matrices on the theta grid.

    x = C @ bx;  v = omega * (C @ bv);  a = omega^2 * (C @ ba), where C is the
    (n, 2H+1) coefficient array [c0, c1, s1, c2, s2, ...].
    """
    key = (n_harm, nt)
    if key not in _BASIS_CACHE:
        theta = 2.0 * np.pi * np.arange(nt) / nt
        bx = np.zeros((2 * n_harm + 1, nt))
        bv = np.zeros_like(bx)
        ba = np.zeros_like(bx)
        bx[0] = 1.0
        for k in range(1, n_harm + 1):
            ck, sk = np.cos(k * theta), np.sin(k * theta)
            bx[2 * k - 1], bx[2 * k] = ck, sk
            bv[2 * k - 1], bv[2 * k] = -k * sk, k * ck
            ba[2 * k - 1], ba[2 * k] = -(k * k) * ck, -(k * k) * sk
        proj = np.zeros((2 * n_harm + 1, nt))
        proj[0] = 1.0 / nt
        proj[1:] = (2.0 / nt) * bx[1:]
        _BASIS_CACHE[key] = (bx, bv, ba, proj)
    return _BASIS_CACHE[key]


class HarmonicSignal:
    """Truncated Fourier series for several coordinates at one frequency.

    coeffs has shape (n_coords, 2*n_harm + 1) laid out as
    [c0, c1, s1, c2, s2, ...]; evaluation is
    x(t) = c0 + sum_k c_k cos(k w t) + s_k sin(k w t).
    """

    def __init__(self, omega, coeffs):
        self.omega = float(omega)
        self.coeffs = np.atleast_2d(np.asarray(coeffs, dtype=float))
        if self.coeffs.shape[1] % 2 != 1:
            raise DimensionMismatchError("coefficient rows must have odd length")

    @property
    def n_coords(self):
        return self.coeffs.shape[0]

    @property
    def n_harm(self):
        return (self.coeffs.shape[1] - 1) // 2

    def cosine(self, k, coord=0):
        return self.coeffs[coord, 0] if k == 0 else self.coeffs[coord, 2 * k - 1]

    def sine(self, k, coord=0):
        return self.coeffs[coord, 2 * k]

    def harmonic_amplitude(self, k, coord=0):
        if k == 0:
            return abs(self.coeffs[coord, 0])
        return float(np.hypot(self.coeffs[coord, 2 * k - 1], self.coeffs[coord, 2 * k]))

    def sample(self, nt=None):
        """(x, v, a) arrays of shape (n_coords, nt) over one period."""
        nt = nt or default_aft_samples(self.n_harm)
        bx, bv, ba, _ = _bases(self.n_harm, nt)
        x = self.coeffs @ bx
        v = self.omega * (self.coeffs @ bv)
        a = self.omega**2 * (self.coeffs @ ba)
        return x, v, a

    def evaluate(self, t):
        """x(t) for scalar or array times."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.repeat(self.coeffs[:, :1], t.size, axis=1)
        for k in range(1, self.n_harm + 1):
            ck = np.cos(k * self.omega * t)
            sk = np.sin(k * self.omega * t)
            out += np.outer(self.coeffs[:, 2 * k - 1], ck)
            out += np.outer(self.coeffs[:, 2 * k], sk)
        return out

    @classmethod
    def from_time_samples(cls, x, omega, n_harm):
        """Project uniform-grid samples over one period onto harmonics."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        nt = x.shape[1]
        theta = 2.0 * np.pi * np.arange(nt) / nt
        coeffs = np.zeros((x.shape[0], 2 * n_harm + 1))
        coeffs[:, 0] = x.mean(axis=1)
        for k in range(1, n_harm + 1):
            coeffs[:, 2 * k - 1] = (2.0 / nt) * x @ np.cos(k * theta)
            coeffs[:, 2 * k] = (2.0 / nt) * x @ np.sin(k * theta)
        return cls(omega, coeffs)

    def amp_max(self, coord=0, nt=512):
        x, _, _ = self.sample(nt)
        return float(np.abs(x[coord]).max())


# ---------------------------------------------------------------------------
# Second-order systems (duck-typed: n, residual_time, accel, linear data)
# ---------------------------------------------------------------------------

class ModalSystem:
    """Full system in modal coordinates: X'' + W^2 X + g X X + h X X X = 0."""

    def __init__(self, modal):
        self.modal = modal
        self.n = modal.n_modes
        self._om2 = modal.omega**2
        self._g = modal.gd()
        self._h = modal.hd()
        # flattened contractions: much cheaper than einsum at desk scale
        self._g2 = self._g.reshape(self.n, -1)
        self._h3 = self._h.reshape(self.n, -1)

    def residual_time(self, x, v, a):
        quad = np.einsum("pij,i...,j...->p...", self._g, x, x)
        cub = np.einsum("pijk,i...,j...,k...->p...", self._h, x, x, x)
        return a + self._om2[:, None] * x + quad + cub

    def accel(self, x, v):
        xx = np.multiply.outer(x, x).ravel()
        xxx = np.multiply.outer(xx, x).ravel()
        return -(self._om2 * x + self._g2 @ xx + self._h3 @ xxx)

    def linear_frequency(self, master):
        return float(self.modal.omega[master])

    def seed_vector(self, master):
        e = np.zeros(self.n)
        e[master] = 1.0
        return e


class PhysicalSystem:
    """Full system in physical coordinates: M u'' + K u + G u u + H u u u = 0."""

    def __init__(self, model, modal=None):
        from .eigen import solve_modes

        self.model = model
        self.n = model.n
        self.modal = modal if modal is not None else solve_modes(model)
        self._Gd = model.G.dense()
        self._Hd = model.H.dense()
        self._G2 = self._Gd.reshape(self.n, -1)
        self._H3 = self._Hd.reshape(self.n, -1)
        self._Minv = np.linalg.inv(model.M)

    def residual_time(self, x, v, a):
        quad = np.einsum("pij,i...,j...->p...", self._Gd, x, x)
        cub = np.einsum("pijk,i...,j...,k...->p...", self._Hd, x, x, x)
        return self.model.M @ a + self.model.K @ x + quad + cub

    def accel(self, x, v):
        xx = np.multiply.outer(x, x).ravel()
        xxx = np.multiply.outer(xx, x).ravel()
        f = self.model.K @ x + self._G2 @ xx + self._H3 @ xxx
        return -(self._Minv @ f)

    def linear_frequency(self, master):
        return float(self.modal.omega[master])

    def seed_vector(self, master):
        return self.modal.phi[:, master].copy()


class QuadraticManifoldSystem:
    """Reduced dynamics of the quadratic manifold, general multi-master form.

    Coefficient tensors are assembled once from the modal tensors and the
    symmetrized derivative set; the single-master case reproduces the
    reduced-oscillator rows exactly.
    """

    def __init__(self, modal, mds: ModalDerivativeSet):
        self.modal = modal
        self.mds = mds
        masters = list(mds.masters)
        self.masters = masters
        self.n = len(masters)
        g = modal.gd()
        h = modal.hd()
        om2 = modal.omega**2
        tb = mds.sym_modal_tensor()  # (N, n_m, n_m)
        n_m = self.n
        M = masters
        self._om2m = om2[M]

        qd = np.zeros((n_m, n_m, n_m))
        qv = np.zeros((n_m, n_m, n_m))
        qa = np.zeros((n_m, n_m, n_m))
        for p in range(n_m):
            for i in range(n_m):
                for j in range(n_m):
                    qd[p, i, j] = (
                        g[M[p], M[i], M[j]]
                        + 0.5 * om2[M[p]] * tb[M[p], i, j]
                        + om2[M[j]] * tb[M[j], p, i]
                    )
                    qv[p, i, j] = tb[M[p], i, j]
                    qa[p, i, j] = tb[M[p], i, j] + tb[M[j], p, i]
        cd = np.zeros((n_m, n_m, n_m, n_m))
        cm = np.zeros((n_m, n_m, n_m, n_m))
        for p in range(n_m):
            for i in range(n_m):
                gbar = 0.5 * (g[M[p], M[i], :] + g[M[p], :, M[i]])
                for j in range(n_m):
                    for k in range(n_m):
                        cd[p, i, j, k] = h[M[p], M[i], M[j], M[k]] + float(
                            np.sum(
                                gbar * tb[:, j, k]
                                + tb[:, p, k]
                                * (g[:, M[i], M[j]] + 0.5 * om2 * tb[:, i, j])
                            )
                        )
                        cm[p, i, j, k] = float(np.sum(tb[:, p, k] * tb[:, i, j]))
        self._qd, self._qv, self._qa, self._cd, self._cm = qd, qv, qa, cd, cm

    def residual_time(self, x, v, a):
        r = a + self._om2m[:, None] * x if x.ndim > 1 else a + self._om2m * x
        r = r + np.einsum("pij,i...,j...->p...", self._qd, x, x)
        r = r + np.einsum("pij,i...,j...->p...", self._qv, v, v)
        r = r + np.einsum("pij,i...,j...->p...", self._qa, x, a)
        r = r + np.einsum("pijk,i...,j...,k...->p...", self._cd, x, x, x)
        r = r + np.einsum("pijk,i...,j...,k...->p...", self._cm, v, v, x)
        r = r + np.einsum("pijk,i...,j...,k...->p...", self._cm, a, x, x)
        return r

    def accel(self, x, v):
        A = (
            np.eye(self.n)
            + np.einsum("piq,i->pq", self._qa, x)
            + np.einsum("pqjk,j,k->pq", self._cm, x, x)
        )
        rhs = -(
            self._om2m * x
            + np.einsum("pij,i,j->p", self._qd, x, x)
            + np.einsum("pij,i,j->p", self._qv, v, v)
            + np.einsum("pijk,i,j,k->p", self._cd, x, x, x)
            + np.einsum("pijk,i,j,k->p", self._cm, v, v, x)
        )
        return np.linalg.solve(A, rhs)

    def linear_frequency(self, master):
        return float(np.sqrt(self._om2m[master]))

    def seed_vector(self, master):
        e = np.zeros(self.n)
        e[master] = 1.0
        return e


# ---------------------------------------------------------------------------
# Harmonic balance residual
# ---------------------------------------------------------------------------

def hbm_residual(system, signal, nt=None):
    """Galerkin-Fourier residual coefficients of a candidate periodic orbit.

    Samples the signal and its exact first/second derivatives over one
    period, evaluates the equation of motion pointwise, and projects back on
    the retained harmonics. Returns an (n_coords, 2*n_harm+1) array.
    """
    nt = nt or default_aft_samples(signal.n_harm)
    bx, bv, ba, proj = _bases(signal.n_harm, nt)
    x = signal.coeffs @ bx
    v = signal.omega * (signal.coeffs @ bv)
    a = signal.omega**2 * (signal.coeffs @ ba)
    r = system.residual_time(x, v, a)
    return r @ proj.T


# ---------------------------------------------------------------------------
# Backbone continuation
# ---------------------------------------------------------------------------

@dataclass
class BackbonePoint:
    omega: float
    signal: HarmonicSignal
    amp: float  # max over the period of |master coordinate|
    residual_norm: float


@dataclass
class BackboneCurve:
    points: list
    master: int
    method: str = ""
    status: str = "completed"
    n_harm: int = 7

    def omegas(self):
        return np.array([pt.omega for pt in self.points])

    def amplitudes(self):
        return np.array([pt.amp for pt in self.points])

    def __len__(self):
        return len(self.points)


class _CosineProblem:
    """Square HBM system in the cosine subspace with one anchor equation."""

    def __init__(self, system, n_harm, nt, master):
        self.system = system
        self.n = system.n
        self.H = n_harm
        self.nt = nt
        self.master = master
        self.cos_idx = np.r_[0, 1 : 2 * n_harm + 1 : 2]
        self.n_unknown = self.n * (n_harm + 1) + 1

    def signal_of(self, z):
        C = np.zeros((self.n, 2 * self.H + 1))
        C[:, self.cos_idx] = z[:-1].reshape(self.n, self.H + 1)
        return HarmonicSignal(z[-1], C)

    def residual_cos(self, z):
        sig = self.signal_of(z)
        r = hbm_residual(self.system, sig, nt=self.nt)
        return r[:, self.cos_idx].ravel()

    def master_c1_index(self):
        return self.master * (self.H + 1) + 1

    def newton(self, z0, extra_row, tol, max_iter=25):
        """Solve [residual_cos; extra] = 0 with a finite-difference Jacobian.

        extra_row(z) -> (value, gradient) supplies the anchor/arclength
        equation. Returns (z, converged, iterations, residual_norm).
        """
        z = z0.copy()
        m = self.n_unknown
        for it in range(1, max_iter + 1):
            r0 = self.residual_cos(z)
            e0, egrad = extra_row(z)
            F0 = np.concatenate([r0, [e0]])
            norm = np.abs(F0).max()
            if norm < tol:
                return z, True, it, norm
            J = np.empty((m, m))
            for j in range(m):
                h = 1e-7 * (1.0 + abs(z[j]))
                zp = z.copy()
                zp[j] += h
                J[:-1, j] = (self.residual_cos(zp) - r0) / h
            J[-1, :] = egrad
            try:
                dz = np.linalg.solve(J, -F0)
            except np.linalg.LinAlgError:
                return z, False, it, norm
            z = z + dz
            if not np.all(np.isfinite(z)):
                return z, False, it, np.inf
        r0 = self.residual_cos(z)
        e0, _ = extra_row(z)
        norm = np.abs(np.concatenate([r0, [e0]])).max()
        return z, norm < tol, max_iter, norm


def backbone(
    system,
    omega_start=None,
    direction=1,
    steps=200,
    n_harm=7,
    master=0,
    tol=1e-10,
    ds=0.02,
    ds_min=1e-8,
    ds_max=0.1,
    max_amp=1.0,
    amp0=1e-3,
    method="",
    omega_min_ratio=0.02,
):
    """Continue the conservative periodic-orbit branch emanating from a mode.

    Starts from the linear eigensolution at amplitude ``amp0`` along the
    master eigenvector (sign chosen by ``direction``), grows the amplitude
    with two anchored Newton solves, then follows the branch by secant
    pseudo-arclength with step halving on Newton failures. The branch stops
    at ``max_amp`` on the master coordinate, after ``steps`` accepted points,
    with a termination report when the step size underflows, or when the
    frequency collapses below ``omega_min_ratio * omega_start`` (orbit
    families that end on a homoclinic loop have their period diverge there).
    """
    if omega_start is None:
        omega_start = system.linear_frequency(master)
    nt = default_aft_samples(n_harm)
    prob = _CosineProblem(system, n_harm, nt, master)
    seed = system.seed_vector(master) * (amp0 if direction >= 0 else -amp0)

    z = np.zeros(prob.n_unknown)
    C0 = np.zeros((system.n, n_harm + 1))
    C0[:, 1] = seed
    z[:-1] = C0.ravel()
    z[-1] = omega_start

    anchor_idx = prob.master_c1_index()

    def make_anchor(target):
        grad = np.zeros(prob.n_unknown)
        grad[anchor_idx] = 1.0
        return lambda zz: (zz[anchor_idx] - target, grad)

    points = []

    def accept(zz, resnorm):
        sig = prob.signal_of(zz)
        amp = sig.amp_max(coord=master)
        points.append(
            BackbonePoint(omega=zz[-1], signal=sig, amp=amp, residual_norm=resnorm)
        )
        return amp

    target1 = z[anchor_idx]
    z, ok, _, norm = prob.newton(z, make_anchor(target1), tol)
    if not ok:
        raise ContinuationError(
            f"seed Newton failed at omega={omega_start} (residual {norm:.2e})"
        )
    amp = accept(z, norm)
    if amp >= max_amp or steps < 2:
        return BackboneCurve(points, master, method, "max_amplitude", n_harm)

    z2 = z.copy()
    z2[:-1] *= 2.0
    z2, ok, _, norm = prob.newton(z2, make_anchor(2.0 * target1), tol)
    if not ok:
        raise ContinuationError("second anchored Newton solve failed")
    zprev, z = z, z2
    amp = accept(z, norm)
    if amp >= max_amp:
        return BackboneCurve(points, master, method, "max_amplitude", n_harm)

    tangent = z - zprev
    tangent /= np.linalg.norm(tangent)
    status = "max_steps"
    while len(points) < steps:
        stepped = False
        while ds >= ds_min:
            zpred = z + ds * tangent

            def arc_row(zz, zp=zpred, t=tangent):
                return (t @ (zz - zp), t)

            znew, ok, iters, norm = prob.newton(zpred, arc_row, tol)
            if ok and znew[-1] > 0:
                stepped = True
                break
            ds *= 0.5
        if not stepped:
            status = "step_failure"
            break
        tangent = znew - z
        tangent /= np.linalg.norm(tangent)
        zprev, z = z, znew
        amp = accept(z, norm)
        if amp >= max_amp:
            status = "max_amplitude"
            break
        if z[-1] < omega_min_ratio * omega_start:
            status = "frequency_floor"
            break
        if iters <= 3:
            ds = min(ds * 1.4, ds_max)
        elif iters >= 8:
            ds *= 0.7
    return BackboneCurve(points, master, method, status, n_harm)


def refine_to_measure(system, curve, target, measure, tol=1e-10, max_secant=40):
    """Solve for the exact branch point where an amplitude functional hits
    ``target``.

    ``measure`` maps a BackbonePoint to a scalar that grows along the branch
    (e.g. the first-harmonic amplitude of a reconstructed coordinate). The
    nearest computed point seeds an anchored Newton solve on the master's
    first cosine coefficient; a secant iteration on that anchor drives the
    measure to the target. Removes interpolation error from cross-branch
    frequency comparisons.
    """
    vals = np.array([measure(pt) for pt in curve.points])
    if target > vals.max() or target < vals.min():
        raise ContinuationError(
            f"target {target} outside the computed branch range "
            f"[{vals.min():.3g}, {vals.max():.3g}]"
        )
    k = int(np.argmin(np.abs(vals - target)))
    pt = curve.points[k]
    prob = _CosineProblem(system, curve.n_harm, default_aft_samples(curve.n_harm), curve.master)
    z = np.empty(prob.n_unknown)
    z[:-1] = pt.signal.coeffs[:, prob.cos_idx].ravel()
    z[-1] = pt.omega
    idx = prob.master_c1_index()

    def solve_at(c1):
        grad = np.zeros(prob.n_unknown)
        grad[idx] = 1.0
        zz, ok, _, norm = prob.newton(z.copy(), lambda q: (q[idx] - c1, grad), tol)
        if not ok:
            raise ContinuationError(f"anchored refinement failed at c1={c1}")
        sig = prob.signal_of(zz)
        point = BackbonePoint(
            omega=zz[-1], signal=sig, amp=sig.amp_max(coord=curve.master),
            residual_norm=norm,
        )
        return zz, point

    c1 = z[idx]
    zz, point = solve_at(c1)
    m0 = measure(point)
    scale = max(abs(target), 1e-12)
    if abs(m0 - target) <= 1e-12 * scale:
        return point
    # secant on the anchor value; the measure is monotone in c1 near the target
    c1_prev, m_prev = c1, m0
    c1 = c1 * (1.0 + 1e-3) + (1e-6 if c1 == 0 else 0.0)
    for _ in range(max_secant):
        z = zz
        zz, point = solve_at(c1)
        m = measure(point)
        if abs(m - target) <= 1e-12 * scale:
            return point
        dm = m - m_prev
        if dm == 0.0:
            raise ContinuationError("secant stalled while refining the branch point")
        c1_next = c1 - (m - target) * (c1 - c1_prev) / dm
        c1_prev, m_prev, c1 = c1, m, c1_next
    raise ContinuationError("amplitude refinement did not converge")


# ---------------------------------------------------------------------------
# Time integration (fixed-step Dormand-Prince 5th order)
# ---------------------------------------------------------------------------

_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
)
_DP_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)


def integrate(system, x0, v0, t_end, dt):
    """Fixed-step explicit integration of x'' = accel(x, v).

    Returns (t, x, v) with x and v of shape (n, n_steps + 1). The last step
    is shortened so the trajectory ends exactly at t_end.
    """
    n = system.n
    x0 = np.asarray(x0, dtype=float).reshape(n)
    v0 = np.asarray(v0, dtype=float).reshape(n)

    def f(y):
        return np.concatenate([y[n:], system.accel(y[:n], y[n:])])

    n_steps = int(np.ceil(t_end / dt - 1e-12))
    t = np.zeros(n_steps + 1)
    ys = np.zeros((2 * n, n_steps + 1))
    y = np.concatenate([x0, v0])
    ys[:, 0] = y
    tcur = 0.0
    k = [None] * 6
    for i in range(n_steps):
        h = min(dt, t_end - tcur)
        k[0] = f(y)
        for stage in range(1, 6):
            yi = y.copy()
            row = _DP_A[stage]
            for j, c in enumerate(row):
                yi += (h * c) * k[j]
            k[stage] = f(yi)
        for b, ki in zip(_DP_B, k):
            if b != 0.0:
                y = y + (h * b) * ki
        tcur += h
        t[i + 1] = tcur
        ys[:, i + 1] = y
    return t, ys[:n], ys[n:]


# ---------------------------------------------------------------------------
# Orbit post-processing and manifold sampling
# ---------------------------------------------------------------------------

def modal_orbit(point, mapping=None, nt=256):
    """Modal coordinate/velocity samples of a backbone orbit over one period.

    mapping=None treats the continued coordinates as the modal ones (full
    system); a NormalFormCoeffs or ModalDerivativeSet maps the reduced orbit
    through the corresponding nonlinear change of coordinates.
    """
    x, v, _ = point.signal.sample(nt)
    if mapping is None:
        return x, v
    if isinstance(mapping, NormalFormCoeffs):
        return nf_map(mapping, x[0], v[0])
    if isinstance(mapping, ModalDerivativeSet):
        tb = mapping.sym_modal_tensor()
        N = tb.shape[0]
        X = np.zeros((N, x.shape[1]))
        Y = np.zeros_like(X)
        for loc, mode in enumerate(mapping.masters):
            X[mode] += x[loc]
            Y[mode] += v[loc]
        X += 0.5 * np.einsum("kij,it,jt->kt", tb, x, x)
        Y += np.einsum("kij,it,jt->kt", tb, x, v)
        return X, Y
    raise TypeError("mapping must be None, NormalFormCoeffs or ModalDerivativeSet")


def fourier_amplitude(samples, k):
    """Amplitude of harmonic k of uniform-grid samples over one period."""
    samples = np.asarray(samples, dtype=float)
    nt = samples.shape[-1]
    theta = 2.0 * np.pi * np.arange(nt) / nt
    if k == 0:
        return np.abs(samples.mean(axis=-1))
    c = (2.0 / nt) * samples @ np.cos(k * theta)
    s = (2.0 / nt) * samples @ np.sin(k * theta)
    return np.hypot(c, s)


def turning_displacements(point, master=0, mapping=None, nt=2048):
    """Displacement states at the master's maximum and minimum over a period."""
    X, _ = modal_orbit(point, mapping, nt=nt)
    i_max = int(np.argmax(X[master]))
    i_min = int(np.argmin(X[master]))
    return X[:, i_max], X[:, i_min]


@dataclass
class ManifoldSample:
    """Point cloud on (or near) a reduction manifold in modal phase space."""

    X: np.ndarray  # (n_modes, n_points)
    Y: np.ndarray
    R: np.ndarray | None = None
    S: np.ndarray | None = None


def manifold_scan(mapping, r_values, s_values=(0.0,)):
    """Evaluate a nonlinear mapping on a (R, S) grid of the master coordinate.

    Quadratic manifolds carry no velocity dependence in X, which the output
    makes visible: rows of X are constant along S. s_values=(0,) gives the
    zero-velocity cut used for the 2-D manifold sections.
    """
    r_values = np.asarray(r_values, dtype=float)
    s_values = np.asarray(s_values, dtype=float)
    Rg, Sg = np.meshgrid(r_values, s_values, indexing="ij")
    R, S = Rg.ravel(), Sg.ravel()
    if isinstance(mapping, NormalFormCoeffs):
        X, Y = nf_map(mapping, R, S)
        return ManifoldSample(X=X, Y=Y, R=R, S=S)
    if isinstance(mapping, ModalDerivativeSet):
        if mapping.n_masters != 1:
            raise DimensionMismatchError("manifold scan expects a single-master set")
        from .modal_derivatives import qm_map, qm_map_velocity

        N = mapping.modal_vectors.shape[2]
        X = np.zeros((N, R.size))
        Y = np.zeros_like(X)
        for idx in range(R.size):
            _, X[:, idx] = qm_map(mapping, [R[idx]])
            Y[:, idx] = qm_map_velocity(mapping, [R[idx]], [S[idx]])
        return ManifoldSample(X=X, Y=Y, R=R, S=S)
    raise TypeError("mapping must be NormalFormCoeffs or ModalDerivativeSet")


def fs_manifold(system, curve, nt=64):
    """Sample the full-system invariant manifold from continuation orbits."""
    xs, ys = [], []
    for pt in curve.points:
        X, Y = modal_orbit(pt, None, nt=nt)
        xs.append(X)
        ys.append(Y)
    if not xs:
        return ManifoldSample(X=np.zeros((system.n, 0)), Y=np.zeros((system.n, 0)))
    return ManifoldSample(X=np.concatenate(xs, axis=1), Y=np.concatenate(ys, axis=1))
