"""Computation behind the service endpoints.

The CLI calls these functions directly (in-process); the FastAPI app wraps
them with HTTP. Everything returned is JSON-safe: non-finite sweep values
become null, with pole locations reported on the side.
"""

from __future__ import annotations

import math

import numpy as np

from .. import continuation as cont
from .. import models as mdl
from .. import rom
from ..eigen import solve_modes
from ..errors import RomlabError
from ..modal_derivatives import compute_md, compute_smd
from ..normal_form import nf_coefficients
from . import schemas as sc


def build_model(spec: sc.ModelSpec, rho=None):
    """Instantiate the StructuralModel a request refers to."""
    if spec.kind == "flat":
        if rho is None:
            rho = spec.rho
            if rho is None and spec.sigma is not None:
                rho = mdl.flat_beam_from_continuum(spec.sigma).rho
        if rho is None:
            raise RomlabError("flat model needs rho or sigma")
        return mdl.flat_beam_model(rho, D=spec.d, Gbar=spec.gbar)
    if spec.kind == "shell":
        r = spec.rho if rho is None else rho
        if r is None:
            raise RomlabError("shell model needs rho")
        return mdl.shell_model(spec.omega1, spec.omega1 * r)
    if spec.kind == "file":
        return mdl.load_model(spec.path)
    if spec.kind == "inline":
        return mdl.model_from_dict(spec.data)
    raise RomlabError(f"unknown model kind {spec.kind!r}")


def resolve_master(spec, modal, master):
    """Map the requested master onto a mode index.

    For the builtin benchmarks the master means the model coordinate
    (X1 = flexural/first spring direction), which keeps its identity across
    rho sweeps even when the eigen sort reorders the modes (rho < 1). For
    file/inline models the index is already a mode index.
    """
    if spec.kind in ("flat", "shell"):
        return int(np.argmax(np.abs(modal.phi[master, :])))
    return master


def _reduction_method(name):
    """Map a wire method name to (library method, nf order)."""
    if name in ("nf2", "nf3"):
        return rom.NF, (2 if name == "nf2" else 3)
    if name in (rom.QM_MD, rom.QM_SMD, rom.STATIC_COND, rom.FULL):
        return name, None
    raise RomlabError(f"unknown method {name!r}")


def _clean(x):
    return None if x is None or not math.isfinite(x) else float(x)


def handle_gamma(req: sc.GammaRequest) -> sc.GammaResponse:
    if req.ratios:
        rhos = (req.rho or sc.SweepSpec(start=0.5, stop=12.0, step=0.01)).values()
        curves = {"qm-md": [], "qm-smd": [], "nf": []}
        poles = {"qm-md": [], "nf": []}
        for r in rhos:
            cr = rom.c_ratios(r, on_pole="inf")
            for name in cr.poles:
                poles[name].append(r)
            curves["qm-md"].append(_clean(cr.md))
            curves["qm-smd"].append(_clean(cr.smd))
            curves["nf"].append(_clean(cr.nf))
        return sc.GammaResponse(mode="ratios", rho=list(rhos), curves=curves, poles=poles)

    methods = [m for m in req.methods if m != "full"]
    sweepable = req.model.kind in ("flat", "shell")
    rhos = (req.rho.values() if req.rho else None) if sweepable else None
    if rhos is None:
        rhos = [req.model.rho if sweepable else math.nan]
    curves = {m: [] for m in methods}
    poles = {m: [] for m in methods}
    for r in rhos:
        model = build_model(req.model, rho=r if sweepable else None)
        modal = solve_modes(model)
        p = resolve_master(req.model, modal, req.master)
        for m in methods:
            lib_method, _ = _reduction_method(m)
            res = rom.gamma_from_modal(modal, p, lib_method)
            if res.pole:
                poles[m].append(r)
            curves[m].append(_clean(res.gamma))
    return sc.GammaResponse(
        mode="gamma",
        rho=[_clean(r) for r in rhos],
        curves=curves,
        poles={k: v for k, v in poles.items() if v},
    )


def _build_system(model, modal, method_name, master, order):
    """System to continue plus the mapping back to modal coordinates."""
    lib_method, nf_order = _reduction_method(method_name)
    if lib_method == rom.FULL:
        return cont.ModalSystem(modal), None
    if lib_method == rom.NF:
        coeffs = nf_coefficients(modal, master, order=nf_order or order)
        osc = rom.build_rom(modal, master, rom.NF, coeffs)
        return osc, coeffs
    if lib_method == rom.QM_MD:
        mds = compute_md(model, modal, [master])
        return rom.build_rom(modal, master, rom.QM_MD, mds), mds
    if lib_method == rom.QM_SMD:
        mds = compute_smd(model, modal, [master])
        return rom.build_rom(modal, master, rom.QM_SMD, mds), mds
    if lib_method == rom.STATIC_COND:
        return rom.build_rom(modal, master, rom.STATIC_COND), None
    raise RomlabError(f"method {method_name!r} cannot be continued")


def branch_to_data(curve, mapping, method_name, n_modes, nt=256):
    """Serialize a backbone branch, reconstructing modal harmonics."""
    omega, amp = [], []
    h0 = [[] for _ in range(n_modes)]
    h1 = [[] for _ in range(n_modes)]
    h2 = [[] for _ in range(n_modes)]
    for pt in curve.points:
        omega.append(float(pt.omega))
        amp.append(float(pt.amp))
        X, _ = cont.modal_orbit(pt, mapping, nt=nt)
        for k in range(n_modes):
            h0[k].append(float(cont.fourier_amplitude(X[k], 0)))
            h1[k].append(float(cont.fourier_amplitude(X[k], 1)))
            h2[k].append(float(cont.fourier_amplitude(X[k], 2)))
    return sc.BranchData(
        method=method_name,
        status=curve.status,
        converged=curve.status in ("completed", "max_amplitude", "max_steps"),
        omega=omega,
        amp=amp,
        coord_h0=h0,
        coord_h1=h1,
        coord_h2=h2,
    )


def handle_backbone(req: sc.BackboneRequest) -> sc.BackboneResponse:
    model = build_model(req.model)
    modal = solve_modes(model)
    p = resolve_master(req.model, modal, req.master)
    branches = {}
    for name in req.methods:
        system, mapping = _build_system(model, modal, name, p, 2)
        master = p if name == "full" else 0
        curve = cont.backbone(
            system,
            master=master,
            direction=req.direction,
            steps=req.steps,
            n_harm=req.n_harm,
            tol=req.tol,
            ds=req.ds,
            ds_max=req.ds_max,
            max_amp=req.max_amp,
            amp0=req.amp0,
            method=name,
        )
        branches[name] = branch_to_data(curve, mapping, name, modal.n_modes)
    return sc.BackboneResponse(n_modes=modal.n_modes, branches=branches)


def handle_manifold(req: sc.ManifoldRequest) -> sc.ManifoldResponse:
    model = build_model(req.model)
    modal = solve_modes(model)
    p = resolve_master(req.model, modal, req.master)
    omega_p = float(modal.omega[p])
    r_grid = np.linspace(-req.r_max, req.r_max, req.n_r)
    if req.cut_only:
        s_grid = np.array([0.0])
    else:
        s_max = req.s_max if req.s_max is not None else omega_p * req.r_max
        s_grid = np.linspace(-s_max, s_max, req.n_s)
    surfaces = {}
    for name in req.methods:
        if name == "full":
            system = cont.ModalSystem(modal)
            curve = cont.backbone(
                system,
                master=p,
                n_harm=req.n_harm,
                max_amp=req.max_amp,
                method=name,
            )
            if req.cut_only:
                # the zero-velocity section of the invariant manifold is the
                # set of orbit turning points (both sides of every orbit)
                cols = []
                for pt in curve.points:
                    u_max, u_min = cont.turning_displacements(pt, master=p)
                    cols += [u_min, u_max]
                X = np.array(cols).T if cols else np.zeros((modal.n_modes, 0))
                sample = cont.ManifoldSample(X=X, Y=np.zeros_like(X))
            else:
                sample = cont.fs_manifold(system, curve)
        else:
            _, mapping = _build_system(model, modal, name, p, 2)
            sample = cont.manifold_scan(mapping, r_grid, s_grid)
        surfaces[name] = sc.ManifoldData(
            method=name,
            R=None if sample.R is None else [float(v) for v in sample.R],
            S=None if sample.S is None else [float(v) for v in sample.S],
            X=[[float(v) for v in row] for row in sample.X],
            Y=[[float(v) for v in row] for row in sample.Y],
        )
    return sc.ManifoldResponse(n_modes=modal.n_modes, surfaces=surfaces)


def handle_modeshape(req: sc.ModeshapeRequest) -> sc.ModeshapeResponse:
    model = build_model(req.model)
    modal = solve_modes(model)
    p = resolve_master(req.model, modal, req.master)
    phi_p = modal.phi[:, p]
    out = {}
    for name in req.methods:
        if name == "full":
            continue
        _, mapping = _build_system(model, modal, name, p, 2)
        if mapping is None:
            raise RomlabError(f"method {name!r} has no mode-shape reconstruction")
        u = rom.reconstruct_modeshape(modal, mapping, p, req.amplitude, 0.0)
        out[name] = [float(v) for v in rom.orth_component(u, phi_p)]
    reference = None
    if req.full_reference:
        system = cont.ModalSystem(modal)
        curve = cont.backbone(
            system,
            master=p,
            n_harm=req.n_harm,
            max_amp=max(1.2 * req.amplitude, 5e-3),
            method="full",
        )
        point = cont.refine_to_measure(
            system, curve, req.amplitude, lambda pt: pt.amp
        )
        u_max, u_min = cont.turning_displacements(point, master=p)
        ref = rom.symmetric_orth_component(
            modal.phi @ u_max, modal.phi @ u_min, phi_p
        )
        reference = [float(v) for v in ref]
    return sc.ModeshapeResponse(
        n_coords=model.n,
        labels=model.labels,
        u_perp=out,
        reference=reference,
    )


def handle_validate(req: sc.ValidateRequest) -> sc.ValidateResponse:
    model = mdl.model_from_dict(req.data)
    modal = solve_modes(model)
    return sc.ValidateResponse(
        n=model.n,
        eigenfrequencies=[float(w) for w in modal.omega],
        quad_entries=model.G.nnz,
        cubic_entries=model.H.nnz,
        potential_symmetric=model.symmetric_tensors,
        labels=model.labels,
    )
