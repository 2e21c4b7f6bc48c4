"""Built-in 2-dof benchmark models and JSON model ingestion.

Two benchmarks drive all comparisons:

* a flat symmetric structure (one flexural + one in-plane mode of a
  clamped-clamped beam, Galerkin-reduced), whose master-slave coupling is
  purely quadratic:

      X1'' + X1 + 2 Gbar rho X1 X2 + D X1^3 = 0
      X2'' + rho^2 X2 + Gbar rho X1^2 = 0

* a mass-with-two-springs system with the full set of quadratic/cubic terms
  typical of curved structures; every nonlinear coefficient derives from the
  two eigenfrequencies alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .errors import DimensionMismatchError, ModelFormatError
from .tensors import CubicTensor, QuadTensor, StructuralModel, spd_failure_index

DEFAULT_D = 2.67
DEFAULT_GBAR = 0.63


@dataclass
class FlatBeamParams:
    """Parameters of the flat 2-dof benchmark.

    rho is the slave/master frequency ratio; for a beam of slenderness
    sigma = h/L it is rho = 4 pi sqrt(12) / (beta^2 sigma) ~ 1.95/sigma with
    beta the first clamped-clamped flexural wavelength root.
    """

    rho: float
    D: float = DEFAULT_D
    Gbar: float = DEFAULT_GBAR
    beta: float | None = None
    G_raw: float | None = None  # Galerkin integrals before the Gbar scaling
    C_raw: float | None = None


@dataclass
class ShellParams:
    omega1: float
    omega2: float


def flat_beam_model(params_or_rho, D=DEFAULT_D, Gbar=DEFAULT_GBAR):
    """Flat-structure benchmark as a StructuralModel (already modal: M = I).

    The master equation carries 2*Gbar*rho X1 X2 and D X1^3; the slave
    equation Gbar*rho X1^2; there is no master self-quadratic term. Under the
    full-sum convention the quadratic entries are
    g^1_12 = g^1_21 = g^2_11 = Gbar*rho (potential-symmetric).
    """
    if isinstance(params_or_rho, FlatBeamParams):
        rho, D, Gbar = params_or_rho.rho, params_or_rho.D, params_or_rho.Gbar
    else:
        rho = float(params_or_rho)
    if rho <= 0:
        raise DimensionMismatchError("frequency ratio rho must be positive")
    c = Gbar * rho
    G = QuadTensor(
        2,
        [(0, 0, 1, c), (0, 1, 0, c), (1, 0, 0, c)],
        potential_symmetric=True,
    )
    H = CubicTensor(2, [(0, 0, 0, 0, D)], potential_symmetric=True)
    return StructuralModel(
        M=np.eye(2),
        K=np.diag([1.0, rho * rho]),
        G=G,
        H=H,
        labels=["flexural", "in-plane"],
    )


def shell_model(omega1, omega2):
    """Curved-structure benchmark (mass on two nonlinear springs).

    Master equation: (3 w1^2/2) X1^2 + (w1^2/2) X2^2 + w2^2 X1 X2 and the
    mirrored slave equation; cubic coefficient (w1^2 + w2^2)/2 on
    X_i (X1^2 + X2^2). All tensors are potential-symmetric by construction.
    """
    w1s, w2s = float(omega1) ** 2, float(omega2) ** 2
    if w1s <= 0 or w2s <= 0:
        raise DimensionMismatchError("eigenfrequencies must be positive")
    cross = 0.5  # each of the two permutations of the X1 X2 monomial
    G = QuadTensor(
        2,
        [
            (0, 0, 0, 1.5 * w1s),
            (0, 1, 1, 0.5 * w1s),
            (0, 0, 1, cross * w2s),
            (0, 1, 0, cross * w2s),
            (1, 1, 1, 1.5 * w2s),
            (1, 0, 0, 0.5 * w2s),
            (1, 0, 1, cross * w1s),
            (1, 1, 0, cross * w1s),
        ],
        potential_symmetric=True,
    )
    cc = 0.5 * (w1s + w2s)
    third = cc / 3.0
    H = CubicTensor(
        2,
        [
            (0, 0, 0, 0, cc),
            (0, 0, 1, 1, third),
            (0, 1, 0, 1, third),
            (0, 1, 1, 0, third),
            (1, 1, 1, 1, cc),
            (1, 1, 0, 0, third),
            (1, 0, 1, 0, third),
            (1, 0, 0, 1, third),
        ],
        potential_symmetric=True,
    )
    return StructuralModel(
        M=np.eye(2),
        K=np.diag([w1s, w2s]),
        G=G,
        H=H,
        labels=["mode-1", "mode-2"],
    )


def _first_beam_root(tol=1e-12):
    """First positive root of cos(b) cosh(b) = 1, by bisection."""
    f = lambda b: np.cos(b) * np.cosh(b) - 1.0
    lo, hi = 4.0, 5.0
    assert f(lo) < 0 < f(hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# 2000 uniform subintervals (2001 nodes); composite Simpson needs an even
# interval count.
_QUAD_POINTS = 2001


def flat_beam_from_continuum(sigma):
    """Galerkin reduction of the clamped-clamped beam at slenderness sigma.

    Computes the first flexural wavelength root, the mass-normalized shape
    functions of the first flexural and fourth in-plane modes, and their
    coupling integrals by composite Simpson quadrature; returns the resulting
    FlatBeamParams (the two quadratic integrals agree by symmetry).
    """
    sigma = float(sigma)
    if not 0.0 < sigma < 1.0:
        raise DimensionMismatchError("slenderness sigma must lie in (0, 1)")
    beta = _first_beam_root()
    x = np.linspace(0.0, 1.0, _QUAD_POINTS)

    # clamped-clamped flexural shape and derivatives; cosh(beta x) stays
    # below ~60 for the first root so direct evaluation is safe
    s1, c1 = np.sin(beta), np.cos(beta)
    sh1, ch1 = np.sinh(beta), np.cosh(beta)
    A, B = s1 - sh1, c1 - ch1
    sb, cb = np.sin(beta * x), np.cos(beta * x)
    shb, chb = np.sinh(beta * x), np.cosh(beta * x)
    phi = (cb - chb) * A - (sb - shb) * B
    dphi = beta * ((-sb - shb) * A - (cb - chb) * B)
    d2phi = beta**2 * ((-cb - chb) * A + (sb + shb) * B)

    norm_phi = np.sqrt(simpson(phi * phi, x=x))
    phi, dphi, d2phi = phi / norm_phi, dphi / norm_phi, d2phi / norm_phi

    # fourth in-plane mode, sign chosen to make the coupling integral positive
    psi = np.sqrt(2.0) * np.sin(4.0 * np.pi * x)
    dpsi = np.sqrt(2.0) * 4.0 * np.pi * np.cos(4.0 * np.pi * x)
    d2psi = -np.sqrt(2.0) * (4.0 * np.pi) ** 2 * np.sin(4.0 * np.pi * x)

    b4 = beta**4
    G_raw = -(6.0 / b4) * simpson(phi * (d2psi * dphi + dpsi * d2phi), x=x)
    C_raw = -(12.0 / b4) * simpson(psi * dphi * d2phi, x=x)
    D_val = -(6.0 / b4) * simpson(phi * 3.0 * dphi**2 * d2phi, x=x)
    if G_raw < 0:  # flip the in-plane mode sign so the coupling is positive
        G_raw, C_raw = -G_raw, -C_raw

    rho = 4.0 * np.pi * np.sqrt(12.0) / (beta**2 * sigma)
    gbar = G_raw * beta**2 / (4.0 * np.pi * np.sqrt(12.0))
    return FlatBeamParams(
        rho=float(rho),
        D=float(D_val),
        Gbar=float(gbar),
        beta=float(beta),
        G_raw=float(G_raw),
        C_raw=float(C_raw),
    )


# ---------------------------------------------------------------------------
# JSON model format
# ---------------------------------------------------------------------------
#
# {"n": 2,
#  "mass": "identity" | [row-major floats],
#  "stiffness": [row-major floats],
#  "quadratic": [[p, i, j, value], ...],
#  "cubic": [[p, i, j, k, value], ...],
#  "symmetrize": false,
#  "labels": ["X1", "X2"]}
#
# Indices are 0-based; values in consistent nondimensional units.

FORMAT_VERSION = 1


def model_from_dict(data):
    """Build a StructuralModel from the JSON object; validation errors carry
    the offending entry location."""
    if not isinstance(data, dict):
        raise ModelFormatError("model document must be a JSON object")
    try:
        n = int(data["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError("missing or invalid dof count 'n'") from exc
    if n <= 0:
        raise ModelFormatError("'n' must be a positive integer")

    mass = data.get("mass", "identity")
    if isinstance(mass, str):
        if mass != "identity":
            raise ModelFormatError(f"unknown mass keyword {mass!r}")
        M = np.eye(n)
    else:
        M = _matrix_from_list(mass, n, "mass")
    K = _matrix_from_list(data.get("stiffness"), n, "stiffness")

    symmetrize = bool(data.get("symmetrize", False))
    quad_entries = _tensor_entries(data.get("quadratic", []), 3, n, "quadratic")
    cubic_entries = _tensor_entries(data.get("cubic", []), 4, n, "cubic")
    G = QuadTensor(n, quad_entries)
    H = CubicTensor(n, cubic_entries)
    if symmetrize:
        G, H = G.symmetrized(), H.symmetrized()
    if G.is_potential_symmetric():
        G.potential_symmetric = True
    if H.is_potential_symmetric():
        H.potential_symmetric = True

    k = spd_failure_index(M)
    if k is not None:
        raise ModelFormatError(
            f"mass matrix is not positive definite: leading minor {k + 1} fails"
        )
    if np.abs(K - K.T).max() > 1e-10 * max(1.0, np.abs(K).max()):
        raise ModelFormatError("stiffness matrix is not symmetric")

    labels = data.get("labels")
    if labels is not None and len(labels) != n:
        raise ModelFormatError(f"expected {n} labels, got {len(labels)}")
    return StructuralModel(M=M, K=K, G=G, H=H, labels=labels)


def _matrix_from_list(values, n, name):
    if values is None:
        raise ModelFormatError(f"missing '{name}' matrix")
    arr = np.asarray(values, dtype=float)
    if arr.size != n * n:
        raise ModelFormatError(
            f"'{name}' must hold {n * n} row-major values, got {arr.size}"
        )
    return arr.reshape(n, n)


def _tensor_entries(raw, width, n, name):
    entries = []
    for pos, item in enumerate(raw):
        if len(item) != width + 1:
            raise ModelFormatError(
                f"'{name}' entry {pos} must be [{width} indices, value], got {item!r}"
            )
        idx = item[:width]
        for k in idx:
            if int(k) != k or not 0 <= int(k) < n:
                raise ModelFormatError(
                    f"'{name}' entry {pos}: index {k} out of range [0, {n})"
                )
        entries.append(tuple(int(k) for k in idx) + (float(item[width]),))
    return entries


def model_to_dict(model):
    d = {
        "format": FORMAT_VERSION,
        "n": model.n,
        "mass": "identity"
        if np.array_equal(model.M, np.eye(model.n))
        else [float(v) for v in model.M.ravel()],
        "stiffness": [float(v) for v in model.K.ravel()],
        "quadratic": [[e[0], e[1], e[2], e[3]] for e in model.G.entries],
        "cubic": [[e[0], e[1], e[2], e[3], e[4]] for e in model.H.entries],
        "symmetrize": False,
    }
    if model.labels is not None:
        d["labels"] = list(model.labels)
    return d


def load_model(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: invalid JSON ({exc})") from exc
    return model_from_dict(data)


def save_model(model, path):
    with open(path, "w") as fh:
        json.dump(model_to_dict(model), fh, indent=1)
        fh.write("\n")
