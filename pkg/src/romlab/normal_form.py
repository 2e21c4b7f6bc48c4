"""Normal-form change of coordinates (single master) and reduced dynamics.

The identity-tangent mapping cancels all non-resonant quadratic monomials
from the modal equations. For a single master p it reads

    X_p = R_p + a^p R_p^2 + b^p S_p^2,     Y_p = S_p + gamma^p R_p S_p,
    X_s = a^s R_p^2 + b^s S_p^2 [+ r^s R_p^3 + u^s R_p S_p^2]        (s != p)
    Y_s = gamma^s R_p S_p       [+ mu^s S_p^3 + nu^s S_p R_p^2],

with bracketed third-order terms only in the order-3 mapping. The reduced
dynamics on the manifold is driven by the second-order coefficients alone
(see nf_reduced_dynamics); the third-order mapping terms only refine the
manifold geometry.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ResonanceError

DEFAULT_GUARD = 0.05

ONE_TO_ONE = "one_to_one"
TWO_TO_ONE = "two_to_one"
THREE_TO_ONE = "three_to_one"
_KIND_BY_RATIO = {1: ONE_TO_ONE, 2: TWO_TO_ONE, 3: THREE_TO_ONE}


@dataclass
class ResonancePair:
    slave: int
    kind: str
    detuning: float  # |omega_s/omega_p - k| for a k:1 resonance


@dataclass
class ResonanceReport:
    master: int
    guard: float
    pairs: list

    def kinds(self):
        return {p.kind for p in self.pairs}

    def __bool__(self):
        return bool(self.pairs)


def detect_resonances(modal, p, guard=DEFAULT_GUARD):
    """Flag slaves with |omega_s - k omega_p| < guard * omega_p, k in {1,2,3}."""
    om = modal.omega
    pairs = []
    for s in range(modal.n_modes):
        if s == p:
            continue
        for k in (1, 2, 3):
            if abs(om[s] - k * om[p]) < guard * om[p]:
                pairs.append(ResonancePair(s, _KIND_BY_RATIO[k], abs(om[s] / om[p] - k)))
    return ResonanceReport(master=p, guard=guard, pairs=pairs)


@dataclass
class NormalFormCoeffs:
    """Mapping coefficients for master p; arrays are indexed by slave mode s.

    Second-order a, b, gamma are defined for every s including s = p (the
    master's own entries appear in the master mapping). Third-order r, u, mu,
    nu vanish identically at s = p and are zero arrays for an order-2 build.
    A and B are the full quadratic-cancellation sums over all modes.
    """

    master: int
    order: int
    omega_p: float
    a: np.ndarray
    b: np.ndarray
    gamma: np.ndarray
    r: np.ndarray
    u: np.ndarray
    mu: np.ndarray
    nu: np.ndarray
    A: np.ndarray
    B: np.ndarray
    report: ResonanceReport = field(repr=False, default=None)


def nf_coefficients(modal, p, order=2, guard=DEFAULT_GUARD, force=False):
    """Second- (and optionally third-) order normal-form coefficients.

    Raises ResonanceError when the denominators are within the detuning
    guard: a 2:1 resonance poisons the second order; 1:1 and 3:1 additionally
    poison the third order. ``force=True`` computes anyway (the caller takes
    responsibility for the near-singular values).
    """
    report = detect_resonances(modal, p, guard)
    blocked = {TWO_TO_ONE} if order == 2 else {ONE_TO_ONE, TWO_TO_ONE, THREE_TO_ONE}
    hits = blocked & report.kinds()
    if hits and not force:
        raise ResonanceError(
            f"internal resonance(s) {sorted(hits)} within guard {guard} of master {p}",
            report=report,
        )
    if order not in (2, 3):
        raise ValueError("order must be 2 or 3")

    om2 = modal.omega**2
    wp2 = om2[p]
    gd = modal.gd()
    hd = modal.hd()
    m = modal.n_modes

    g_spp = gd[:, p, p]
    denom2 = -om2 * (4.0 * wp2 - om2)
    a = g_spp * (2.0 * wp2 - om2) / denom2
    b = g_spp * 2.0 / denom2
    gamma = g_spp * 2.0 / (4.0 * wp2 - om2)

    # full-sum cancellation coefficients, Eq. (11) specialization
    gbar_pl = 0.5 * (gd[:, p, :] + gd[:, :, p])  # gbar^s_pl, shape (m, m)
    A = 2.0 * gbar_pl @ a
    B = 2.0 * gbar_pl @ b

    r = np.zeros(m)
    u = np.zeros(m)
    mu = np.zeros(m)
    nu = np.zeros(m)
    if order == 3:
        h_spp = hd[:, p, p, p]
        for s in range(m):
            if s == p:
                continue
            den = (om2[s] - wp2) * (om2[s] - 9.0 * wp2)
            ah = A[s] + h_spp[s]
            r[s] = (ah * (7.0 * wp2 - om2[s]) + 2.0 * B[s] * wp2**2) / den
            u[s] = (6.0 * ah + B[s] * (3.0 * wp2 - om2[s])) / den
            # printed identically to u in the source material
            mu[s] = (6.0 * ah + B[s] * (3.0 * wp2 - om2[s])) / den
            nu[s] = (3.0 * ah * (3.0 * wp2 - om2[s]) + 2.0 * B[s] * wp2 * om2[s]) / den

    return NormalFormCoeffs(
        master=p,
        order=order,
        omega_p=float(modal.omega[p]),
        a=a,
        b=b,
        gamma=gamma,
        r=r,
        u=u,
        mu=mu,
        nu=nu,
        A=A,
        B=B,
        report=report,
    )


def nf_reduced_dynamics(coeffs, modal):
    """Reduced oscillator on the invariant manifold of the master mode.

    R'' + omega_p^2 R + (A^p + h^p_ppp) R^3 + B^p R R'^2 = 0, expressed in
    the generic-oscillator scaling: C4 = h + A, C5 = B * omega_p^2, all
    quadratic coefficients and C6 zero. Identical for mapping orders 2 and 3.
    """
    from .rom import NF, ReducedOscillator

    p = coeffs.master
    hd = modal.hd()
    wp2 = coeffs.omega_p**2
    return ReducedOscillator(
        omega_p=coeffs.omega_p,
        c1=0.0,
        c2=0.0,
        c3=0.0,
        c4=float(hd[p, p, p, p] + coeffs.A[p]),
        c5=float(coeffs.B[p] * wp2),
        c6=0.0,
        method=NF,
        modal=modal,
        master=p,
    )


def nf_map(coeffs, R, S):
    """Evaluate the mapping at normal coordinates (R, S) = (R_p, S_p).

    Scalars give (X, Y) of shape (m,); equal-shaped arrays broadcast to
    (m, *shape) for grid scans.
    """
    R = np.asarray(R, dtype=float)
    S = np.asarray(S, dtype=float)
    p = coeffs.master
    R2, S2, RS = R * R, S * S, R * S
    X = np.multiply.outer(coeffs.a, R2) + np.multiply.outer(coeffs.b, S2)
    Y = np.multiply.outer(coeffs.gamma, RS)
    if coeffs.order == 3:
        X += np.multiply.outer(coeffs.r, R2 * R) + np.multiply.outer(coeffs.u, R * S2)
        Y += np.multiply.outer(coeffs.mu, S2 * S) + np.multiply.outer(coeffs.nu, S * R2)
    X[p] += R
    Y[p] += S
    return X, Y
