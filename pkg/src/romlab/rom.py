"""Generic reduced oscillator, hardening/softening coefficient, and the
cross-method comparison quantities (C-ratios, drift, mode shapes, first
harmonics).

Every single-master reduction collapses onto one oscillator

    R'' + wp^2 R + C1 R^2 + C2 R'^2/wp^2 + C3 R'' R/wp^2
        + C4 R^3 + C5 R'^2 R/wp^2 + C6 R'' R^2/wp^2 = 0

whose coefficients depend on the reduction method. A second-order multiple
scales solution gives the backbone w_NL = wp (1 + Gamma a0^2); Gamma > 0 is
hardening, Gamma < 0 softening.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, PoleError
from .modal_derivatives import ModalDerivativeSet, qm_map
from .normal_form import NormalFormCoeffs, nf_map, nf_reduced_dynamics

NF = "nf"
QM_MD = "qm-md"
QM_SMD = "qm-smd"
STATIC_COND = "static-cond"
FULL = "full"
METHODS = (NF, QM_MD, QM_SMD, STATIC_COND)


@dataclass
class ReducedOscillator:
    """Coefficients of the generic single-dof reduced equation."""

    omega_p: float
    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    c6: float
    method: str
    modal: object = field(default=None, repr=False)  # provenance, optional
    master: int = field(default=None, repr=False)

    n = 1  # SecondOrderSystem interface

    def coefficients(self):
        return (self.c1, self.c2, self.c3, self.c4, self.c5, self.c6)

    # -- SecondOrderSystem interface (continuation / time integration) -----

    def residual_time(self, x, v, a):
        w2 = self.omega_p**2
        x, v, a = x[0], v[0], a[0]
        r = (
            a
            + w2 * x
            + self.c1 * x * x
            + self.c2 * v * v / w2
            + self.c3 * a * x / w2
            + self.c4 * x**3
            + self.c5 * v * v * x / w2
            + self.c6 * a * x * x / w2
        )
        return r[np.newaxis, :] if np.ndim(r) else np.array([[r]])

    def accel(self, x, v):
        w2 = self.omega_p**2
        xx, vv = x[0], v[0]
        rhs = -(
            w2 * xx
            + self.c1 * xx * xx
            + self.c2 * vv * vv / w2
            + self.c4 * xx**3
            + self.c5 * vv * vv * xx / w2
        )
        mass = 1.0 + self.c3 * xx / w2 + self.c6 * xx * xx / w2
        return np.array([rhs / mass])

    def linear_frequency(self, master=0):
        return self.omega_p

    def seed_vector(self, master=0):
        return np.array([1.0])


@dataclass
class GammaResult:
    """Type of nonlinearity plus its per-slave correction decomposition.

    correction[s] is the method's correction term C^s in the cubic sum of the
    closed-form Gamma; correction_sc[s] = 2 (g^s_pp / omega_s)^2 is the
    static-condensation baseline. Both are None when the oscillator has no
    modal provenance. ``pole`` marks an exact resonance pole (signed-infinite
    Gamma) hit during a sweep.
    """

    gamma: float
    correction: dict | None = None
    correction_sc: dict | None = None
    pole: bool = False


@dataclass
class DriftVector:
    """Constant (zeroth-harmonic) offset of the oscillation, per unit a0^2
    it is vector/a0^2; ``vector`` already includes the a0^2/2 factor."""

    vector: np.ndarray
    master_coefficient: float
    slave_coefficients: dict


@dataclass
class MultipleScalesSolution:
    """Second-order perturbation solution of the generic oscillator:
    R = h1 cos(w_NL t) + h2 cos(2 w_NL t) + h0."""

    omega_nl: float
    gamma: float
    h0: float
    h1: float
    h2: float


def build_rom(modal, p, method, reduction=None):
    """Reduced oscillator for master p by the requested method.

    reduction carries the nonlinear mapping data: a NormalFormCoeffs for NF,
    a ModalDerivativeSet of the matching kind for the QM methods, nothing for
    static condensation.
    """
    gd = modal.gd()
    hd = modal.hd()
    om2 = modal.omega**2
    wp2 = om2[p]

    if method == NF:
        if not isinstance(reduction, NormalFormCoeffs) or reduction.master != p:
            raise DimensionMismatchError("NF build needs NormalFormCoeffs for master p")
        return nf_reduced_dynamics(reduction, modal)

    if method in (QM_MD, QM_SMD):
        wanted = "dynamic" if method == QM_MD else "static"
        if not isinstance(reduction, ModalDerivativeSet) or reduction.kind != wanted:
            raise DimensionMismatchError(f"{method} build needs a {wanted} derivative set")
        if p not in reduction.masters:
            raise DimensionMismatchError(f"mode {p} is not a master of the derivative set")
        loc = reduction.masters.index(p)
        theta = reduction.sym_modal_vector(loc, loc)  # thetabar^s_pp over all modes
        gbar_ps = 0.5 * (gd[p, p, :] + gd[p, :, p])
        c1 = gd[p, p, p] + 1.5 * wp2 * theta[p]
        c2 = wp2 * theta[p]
        c3 = 2.0 * wp2 * theta[p]
        c4 = hd[p, p, p, p] + float(
            np.sum(gbar_ps * theta + theta * gd[:, p, p] + 0.5 * om2 * theta**2)
        )
        c5 = wp2 * float(np.sum(theta**2))
        return ReducedOscillator(
            omega_p=float(modal.omega[p]),
            c1=float(c1),
            c2=float(c2),
            c3=float(c3),
            c4=float(c4),
            c5=float(c5),
            c6=float(c5),
            method=method,
            modal=modal,
            master=p,
        )

    if method == STATIC_COND:
        corr = sum(
            2.0 * gd[s, p, p] ** 2 / om2[s] for s in range(modal.n_modes) if s != p
        )
        return ReducedOscillator(
            omega_p=float(modal.omega[p]),
            c1=0.0,
            c2=0.0,
            c3=0.0,
            c4=float(hd[p, p, p, p] - corr),
            c5=0.0,
            c6=0.0,
            method=STATIC_COND,
            modal=modal,
            master=p,
        )

    raise ValueError(f"unknown method {method!r}")


def gamma(osc):
    """Hardening/softening coefficient of a reduced oscillator.

    Gamma = -(10 C1^2 + 10 C1 C2 + 4 C2^2 - 7 C2 C3 + C3^2 - 11 C1 C3)
            / (24 wp^4) + (3 C4 + C5 - 3 C6) / (8 wp^2).

    When the oscillator carries modal provenance, the per-slave correction
    decomposition of the closed-form expression is attached.
    """
    w2 = osc.omega_p**2
    c1, c2, c3, c4, c5, c6 = osc.coefficients()
    quad = -(
        10.0 * c1 * c1
        + 10.0 * c1 * c2
        + 4.0 * c2 * c2
        - 7.0 * c2 * c3
        + c3 * c3
        - 11.0 * c1 * c3
    ) / (24.0 * w2 * w2)
    cub = (3.0 * c4 + c5 - 3.0 * c6) / (8.0 * w2)
    value = quad + cub
    if osc.modal is not None and osc.method in METHODS:
        closed = gamma_from_modal(osc.modal, osc.master, osc.method)
        return GammaResult(
            gamma=value,
            correction=closed.correction,
            correction_sc=closed.correction_sc,
            pole=closed.pole,
        )
    return GammaResult(gamma=value)


def _slave_factor(method, ws2, wp2):
    if method == QM_MD:
        return 1.0 + wp2 * (4.0 * ws2 - 3.0 * wp2) / (3.0 * (ws2 - wp2) ** 2)
    if method == QM_SMD:
        return 1.0 + 4.0 * wp2 / (3.0 * ws2)
    if method == NF:
        return 1.0 + 4.0 * wp2 / (3.0 * (ws2 - 4.0 * wp2))
    if method == STATIC_COND:
        return 1.0
    raise ValueError(f"unknown method {method!r}")


def gamma_from_modal(modal, p, method):
    """Closed-form Gamma with the per-slave correction decomposition.

    Gamma = -(5/12 wp^2) (g^p_pp/wp)^2 + (3/8 wp^2) (h^p_ppp - sum_s C^s).

    Exact resonance poles (slave at the master frequency for MD, at twice it
    for NF) yield signed infinities with the pole flag set, so sweep curves
    can traverse the asymptotes.
    """
    gd = modal.gd()
    hd = modal.hd()
    om2 = modal.omega**2
    wp2 = om2[p]
    g_pp = gd[p, p, p]
    correction = {}
    correction_sc = {}
    pole = False
    total = 0.0
    for s in range(modal.n_modes):
        if s == p:
            continue
        sc = 2.0 * (gd[s, p, p] / modal.omega[s]) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            fac = _slave_factor(method, om2[s], wp2)
        if not math.isfinite(fac):
            pole = True
        correction_sc[s] = sc
        correction[s] = sc * fac
        total += correction[s]
    value = -(5.0 / (12.0 * wp2)) * (g_pp / modal.omega[p]) ** 2 + (
        3.0 / (8.0 * wp2)
    ) * (hd[p, p, p, p] - total)
    return GammaResult(
        gamma=value, correction=correction, correction_sc=correction_sc, pole=pole
    )


@dataclass
class CRatios:
    """Single-slave correction factors normalized by static condensation."""

    md: float
    smd: float
    nf: float
    poles: tuple = ()

    def by_method(self):
        return {QM_MD: self.md, QM_SMD: self.smd, NF: self.nf}


def c_ratios(rho, on_pole="raise"):
    """Correction-factor ratios C_method / C_SC for one slave at rho = ws/wp.

    C_MD/C_SC  = 1 + (4/3) (rho^2 - 3/4) / (rho^2 - 1)^2
    C_SMD/C_SC = 1 + (4/3) / rho^2
    C_NF/C_SC  = 1 + (4/3) / (rho^2 - 4)

    Poles sit exactly at rho = 1 (MD) and rho = 2 (NF). on_pole="raise" turns
    them into PoleError; "inf" returns infinities with the pole recorded (for
    sweep rendering across the asymptotes).
    """
    rho = float(rho)
    if rho <= 0.0:
        raise PoleError("rho must be positive")
    r2 = rho * rho
    poles = []
    if r2 == 1.0:
        poles.append(QM_MD)
    if r2 == 4.0:
        poles.append(NF)
    if poles and on_pole == "raise":
        raise PoleError(f"C-ratio pole at rho={rho} for {', '.join(poles)}")
    with np.errstate(divide="ignore"):
        md = 1.0 + (4.0 / 3.0) * (r2 - 0.75) / (r2 - 1.0) ** 2 if r2 != 1.0 else math.inf
        nf = 1.0 + (4.0 / 3.0) / (r2 - 4.0) if r2 != 4.0 else math.inf
    smd = 1.0 + (4.0 / 3.0) / r2
    return CRatios(md=md, smd=smd, nf=nf, poles=tuple(poles))


def multiple_scales(osc, a0):
    """Second-order multiple-scales solution of the generic oscillator.

    The constant drift is -a0^2 (C1 + C2 - C3)/(2 wp^2) and the second
    harmonic a0^2 (C1 - C2 - C3)/(6 wp^2); with all quadratic coefficients
    zero (NF) both vanish and only the first harmonic survives at this order.
    """
    w2 = osc.omega_p**2
    gam = gamma(osc).gamma
    return MultipleScalesSolution(
        omega_nl=osc.omega_p * (1.0 + gam * a0 * a0),
        gamma=gam,
        h0=-a0 * a0 * (osc.c1 + osc.c2 - osc.c3) / (2.0 * w2),
        h1=a0,
        h2=a0 * a0 * (osc.c1 - osc.c2 - osc.c3) / (6.0 * w2),
    )


def drift(modal, p, method, a0, omega_nl=None):
    """Constant offset of the oscillation at first-harmonic amplitude a0.

    For the NF method the expression contains the nonlinear frequency; when
    omega_nl is not supplied it is taken from the multiple-scales solution at
    this a0, making the drift a function of a0 alone.
    """
    gd = modal.gd()
    om = modal.omega
    om2 = om**2
    wp2 = om2[p]
    g_pp = gd[p, p, p]
    half_a2 = 0.5 * a0 * a0
    slave = {}
    if method in (QM_MD, QM_SMD):
        master_coeff = -g_pp / wp2
        for s in range(modal.n_modes):
            if s == p:
                continue
            den = (om2[s] - wp2) if method == QM_MD else om2[s]
            slave[s] = -gd[s, p, p] / den
    elif method == NF:
        if omega_nl is None:
            from .normal_form import nf_coefficients

            osc = nf_reduced_dynamics(nf_coefficients(modal, p, order=2), modal)
            omega_nl = multiple_scales(osc, a0).omega_nl
        wnl2 = omega_nl**2
        master_coeff = -g_pp / wp2 * (1.0 / 3.0 + 2.0 * wnl2 / (3.0 * wp2))
        for s in range(modal.n_modes):
            if s == p:
                continue
            slave[s] = -gd[s, p, p] / om2[s] * (
                1.0 - 2.0 * (wnl2 - wp2) / (om2[s] - 4.0 * wp2)
            )
    else:
        raise ValueError(f"drift is defined for {NF}, {QM_MD}, {QM_SMD}; got {method!r}")
    vec = master_coeff * modal.phi[:, p]
    for s, coeff in slave.items():
        vec = vec + coeff * modal.phi[:, s]
    return DriftVector(
        vector=half_a2 * vec,
        master_coefficient=master_coeff,
        slave_coefficients=slave,
    )


def reconstruct_modeshape(modal, mapping, p, R_p, S_p=0.0):
    """Physical displacement of the single-master motion at (R_p, S_p).

    mapping is either NormalFormCoeffs (velocity-dependent reconstruction)
    or a ModalDerivativeSet (QM reconstruction; S_p does not enter).
    """
    if isinstance(mapping, NormalFormCoeffs):
        if mapping.master != p:
            raise DimensionMismatchError("mapping master does not match p")
        X, _ = nf_map(mapping, R_p, S_p)
        return modal.phi @ X
    if isinstance(mapping, ModalDerivativeSet):
        if p not in mapping.masters:
            raise DimensionMismatchError(f"mode {p} is not a master of the mapping")
        R = np.zeros(mapping.n_masters)
        R[mapping.masters.index(p)] = R_p
        u, _ = qm_map(mapping, R)
        return u
    raise TypeError("mapping must be NormalFormCoeffs or ModalDerivativeSet")


def orth_component(u, phi_p):
    """Component of u orthogonal to phi_p (plain Euclidean projection)."""
    u = np.asarray(u, dtype=float)
    phi_p = np.asarray(phi_p, dtype=float)
    return u - (phi_p @ u) / (phi_p @ phi_p) * phi_p


def symmetric_orth_component(u_max, u_min, phi_p):
    """Reference orthogonal deformation of a full-system orbit.

    Averages the orthogonal components at the two turning points (master
    maximum and minimum), cancelling the odd harmonics so the quadratic
    content can be compared with the second-order reductions.
    """
    return 0.5 * (orth_component(u_max, phi_p) + orth_component(u_min, phi_p))


def first_harmonic_master(method, a0, g_pp, omega_p):
    """First-harmonic amplitude of the master modal coordinate X_p.

    MD and NF leave it at a0 (to fourth order); the SMD quadratic manifold
    transfers the self-quadratic term into the reconstruction, giving
    a0 (1 - a0^2 (2/3) (g_pp/omega_p^2)^2) and hence a saturating amplitude.
    """
    if method in (QM_MD, NF):
        return a0
    if method == QM_SMD:
        return a0 * (1.0 - a0 * a0 * (2.0 / 3.0) * (g_pp / omega_p**2) ** 2)
    raise ValueError(f"first harmonic closed form exists for nf/qm-md/qm-smd; got {method!r}")
