"""Command-line front end.

A thin client of the analysis service: each subcommand builds the same
request model the HTTP API accepts, executes it (in-process by default, or
against a running server with --server), and renders the response to CSV
and SVG files. The CSV files are the authoritative artifact; SVG plots are
derived from the same data.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .errors import RomlabError
from .service import handlers
from .service import schemas as sc
from .svg import line_plot

CSV_SCHEMA = "romlab-csv v1"


# ---------------------------------------------------------------------------
# transport
# ---------------------------------------------------------------------------

class Client:
    """Executes service requests either in-process or over HTTP."""

    def __init__(self, server=None):
        self.server = server.rstrip("/") if server else None

    def _post(self, route, req, response_model):
        if self.server is None:
            fn = {
                "/gamma": handlers.handle_gamma,
                "/backbone": handlers.handle_backbone,
                "/manifold": handlers.handle_manifold,
                "/modeshape": handlers.handle_modeshape,
                "/models/validate": handlers.handle_validate,
            }[route]
            return fn(req)
        import httpx

        r = httpx.post(
            self.server + route, json=req.model_dump(mode="json"), timeout=600.0
        )
        if r.status_code != 200:
            raise RomlabError(f"server error {r.status_code}: {r.text}")
        return response_model.model_validate(r.json())

    def gamma(self, req):
        return self._post("/gamma", req, sc.GammaResponse)

    def backbone(self, req):
        return self._post("/backbone", req, sc.BackboneResponse)

    def manifold(self, req):
        return self._post("/manifold", req, sc.ManifoldResponse)

    def modeshape(self, req):
        return self._post("/modeshape", req, sc.ModeshapeResponse)

    def validate(self, req):
        return self._post("/models/validate", req, sc.ValidateResponse)


# ---------------------------------------------------------------------------
# option parsing helpers
# ---------------------------------------------------------------------------

def parse_model(args):
    spec = args.model
    if spec == "flat":
        return sc.ModelSpec(
            kind="flat", rho=args.rho_value, sigma=args.sigma, d=args.d, gbar=args.gbar
        )
    if spec == "shell":
        return sc.ModelSpec(kind="shell", rho=args.rho_value, omega1=args.omega1)
    if spec.startswith("file:"):
        return sc.ModelSpec(kind="file", path=spec[5:])
    raise RomlabError(f"--model must be flat, shell or file:PATH (got {spec!r})")


def parse_rho(text):
    """'a:b[:step]' -> SweepSpec, plain float -> single value."""
    if text is None:
        return None, None
    parts = text.split(":")
    if len(parts) == 1:
        return None, float(parts[0])
    if len(parts) == 2:
        return sc.SweepSpec(start=float(parts[0]), stop=float(parts[1])), None
    if len(parts) == 3:
        return (
            sc.SweepSpec(
                start=float(parts[0]), stop=float(parts[1]), step=float(parts[2])
            ),
            None,
        )
    raise RomlabError(f"cannot parse --rho {text!r}")


def parse_methods(text, default):
    if not text:
        return list(default)
    methods = [m.strip() for m in text.split(",") if m.strip()]
    valid = {"nf2", "nf3", "qm-md", "qm-smd", "static-cond", "full"}
    for m in methods:
        if m not in valid:
            raise RomlabError(f"unknown method {m!r}; pick from {sorted(valid)}")
    return methods


def fmt(v):
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return "nan"
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def write_csv(path, meta, columns):
    """columns: list of (name, values); values may contain None."""
    names = [c[0] for c in columns]
    length = max((len(c[1]) for c in columns), default=0)
    with open(path, "w") as fh:
        fh.write(f"# {CSV_SCHEMA}\n")
        for key, val in meta.items():
            fh.write(f"# {key}: {val}\n")
        fh.write(",".join(names) + "\n")
        for i in range(length):
            row = [fmt(vals[i]) if i < len(vals) else "nan" for _, vals in columns]
            fh.write(",".join(row) + "\n")


def finish(out_dir, command, config, outputs, statuses, ok):
    summary = {
        "command": command,
        "config": config,
        "outputs": outputs,
        "branches": statuses,
        "ok": bool(ok),
    }
    path = os.path.join(out_dir, "summary.json")
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=1)
        fh.write("\n")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_gamma(args, client):
    os.makedirs(args.out, exist_ok=True)
    sweep, single = args.rho_sweep, args.rho_value
    outputs = []
    if args.ratios:
        req = sc.GammaRequest(ratios=True, rho=sweep)
        resp = client.gamma(req)
        csv_path = os.path.join(args.out, "c_ratios.csv")
        write_csv(
            csv_path,
            {"command": "gamma --ratios", "poles": resp.poles},
            [
                ("rho", resp.rho),
                ("c_md_over_sc", resp.curves["qm-md"]),
                ("c_smd_over_sc", resp.curves["qm-smd"]),
                ("c_nf_over_sc", resp.curves["nf"]),
            ],
        )
        svg_path = os.path.join(args.out, "c_ratios.svg")
        line_plot(
            svg_path,
            [
                ("C_MD/C_SC", resp.rho, resp.curves["qm-md"]),
                ("C_SMD/C_SC", resp.rho, resp.curves["qm-smd"]),
                ("C_NF/C_SC", resp.rho, resp.curves["nf"]),
            ],
            title="slave correction factors vs static condensation",
            xlabel="rho = omega_s / omega_p",
            ylabel="C / C_SC",
            ylim=(0.0, 4.0),
            vlines=(1.0, 2.0),
        )
        outputs += [csv_path, svg_path]
        return finish(args.out, "gamma", req.model_dump(mode="json"), outputs, {}, True)

    model = parse_model(args)
    if sweep is None and single is None and args.sigma is None:
        if model.kind in ("flat", "shell"):
            sweep = sc.SweepSpec(start=0.5, stop=12.0)
    methods = parse_methods(args.method, ("nf2", "qm-md", "qm-smd", "static-cond"))
    req = sc.GammaRequest(model=model, rho=sweep, master=args.master, methods=methods)
    resp = client.gamma(req)
    cols = [("rho", resp.rho)] + [
        (f"gamma_{m.replace('-', '_')}", resp.curves[m]) for m in methods
    ]
    csv_path = os.path.join(args.out, "gamma.csv")
    write_csv(csv_path, {"command": "gamma", "model": args.model, "poles": resp.poles}, cols)
    svg_path = os.path.join(args.out, "gamma.svg")
    finite = [v for m in methods for v in resp.curves[m] if v is not None]
    if finite:
        lo, hi = sorted(finite)[len(finite) // 20], sorted(finite)[-1 - len(finite) // 20]
        pad = 0.25 * (hi - lo if hi > lo else 1.0)
        ylim = (lo - pad, hi + pad)
    else:
        ylim = None
    line_plot(
        svg_path,
        [(f"Gamma {m}", resp.rho, resp.curves[m]) for m in methods],
        title=f"type of nonlinearity, {args.model} model",
        xlabel="rho = omega_2 / omega_1",
        ylabel="Gamma",
        ylim=ylim,
        vlines=(1.0, 2.0),
    )
    outputs += [csv_path, svg_path]
    return finish(args.out, "gamma", req.model_dump(mode="json"), outputs, {}, True)


def cmd_backbone(args, client):
    os.makedirs(args.out, exist_ok=True)
    model = parse_model(args)
    methods = parse_methods(args.method, ("nf2", "qm-md", "qm-smd", "full"))
    req = sc.BackboneRequest(
        model=model,
        master=args.master,
        methods=methods,
        n_harm=args.n_harm,
        tol=args.tol,
        steps=args.steps,
        max_amp=args.max_amp,
    )
    resp = client.backbone(req)
    outputs, statuses = [], {}
    series = []
    for m in methods:
        br = resp.branches[m]
        statuses[m] = br.status
        cols = [("omega", br.omega), ("amp_master", br.amp)]
        for k in range(resp.n_modes):
            cols.append((f"x{k + 1}_h0", br.coord_h0[k]))
            cols.append((f"x{k + 1}_h1", br.coord_h1[k]))
            cols.append((f"x{k + 1}_h2", br.coord_h2[k]))
        path = os.path.join(args.out, f"backbone_{m}.csv")
        write_csv(
            path,
            {"command": "backbone", "method": m, "status": br.status,
             "n_harm": args.n_harm, "model": args.model},
            cols,
        )
        outputs.append(path)
        series.append((m, br.omega, br.coord_h1[0]))
    svg_path = os.path.join(args.out, "backbone.svg")
    line_plot(
        svg_path,
        series,
        title=f"backbone curves, {args.model} model",
        xlabel="omega",
        ylabel="ampl(X1), first harmonic",
    )
    outputs.append(svg_path)
    ok = all(resp.branches[m].converged for m in methods)
    return finish(args.out, "backbone", req.model_dump(mode="json"), outputs, statuses, ok)


def cmd_manifold(args, client):
    os.makedirs(args.out, exist_ok=True)
    model = parse_model(args)
    methods = parse_methods(args.method, ("nf2", "nf3", "qm-md", "qm-smd", "full"))
    req = sc.ManifoldRequest(
        model=model,
        master=args.master,
        methods=methods,
        r_max=args.r_max,
        n_r=args.n_r,
        n_s=args.n_s,
        cut_only=args.cut,
        n_harm=args.n_harm,
        max_amp=1.2 * args.r_max,
    )
    resp = client.manifold(req)
    outputs = []
    cut_series = []
    for m in methods:
        surf = resp.surfaces[m]
        cols = []
        if surf.R is not None:
            cols += [("R", surf.R), ("S", surf.S)]
        for k in range(resp.n_modes):
            cols.append((f"X{k + 1}", surf.X[k]))
            cols.append((f"Y{k + 1}", surf.Y[k]))
        path = os.path.join(args.out, f"manifold_{m}.csv")
        write_csv(
            path,
            {"command": "manifold", "method": m, "cut": args.cut, "model": args.model},
            cols,
        )
        outputs.append(path)
        if resp.n_modes >= 2:
            if m == "full":
                # turning points come in min/max pairs; order them by X1
                pairs = sorted(zip(surf.X[0], surf.X[1]))
                cut_series.append(
                    (m, [p[0] for p in pairs], [p[1] for p in pairs])
                )
            else:
                sel = (
                    range(len(surf.X[0]))
                    if surf.S is None
                    else [i for i, s in enumerate(surf.S) if s == 0.0]
                )
                cut_series.append(
                    (m, [surf.X[0][i] for i in sel], [surf.X[1][i] for i in sel])
                )
    if cut_series:
        svg_path = os.path.join(args.out, "manifold_cut.svg")
        line_plot(
            svg_path,
            cut_series,
            title=f"manifold section at zero master velocity, {args.model} model",
            xlabel="X1",
            ylabel="X2",
        )
        outputs.append(svg_path)
    return finish(args.out, "manifold", req.model_dump(mode="json"), outputs, {}, True)


def cmd_modeshape(args, client):
    os.makedirs(args.out, exist_ok=True)
    model = parse_model(args)
    methods = parse_methods(args.method, ("nf2", "qm-md", "qm-smd"))
    req = sc.ModeshapeRequest(
        model=model,
        master=args.master,
        methods=[m for m in methods if m != "full"],
        amplitude=args.amplitude,
        full_reference=args.full_reference,
        n_harm=args.n_harm,
    )
    resp = client.modeshape(req)
    cols = [("coordinate", list(range(resp.n_coords)))]
    if resp.labels:
        cols.append(("label", resp.labels))
    for m, vec in resp.u_perp.items():
        cols.append((f"u_perp_{m.replace('-', '_')}", vec))
    if resp.reference is not None:
        cols.append(("u_perp_full_reference", resp.reference))
    path = os.path.join(args.out, "modeshape.csv")
    write_csv(
        path,
        {"command": "modeshape", "amplitude": args.amplitude, "model": args.model},
        cols,
    )
    return finish(args.out, "modeshape", req.model_dump(mode="json"), [path], {}, True)


def cmd_validate(args, client):
    with open(args.path) as fh:
        data = json.load(fh)
    resp = client.validate(sc.ValidateRequest(data=data))
    print(f"model ok: n={resp.n}, eigenfrequencies={resp.eigenfrequencies}")
    print(
        f"quadratic entries: {resp.quad_entries}, cubic entries: {resp.cubic_entries}, "
        f"potential symmetric: {resp.potential_symmetric}"
    )
    return 0


def cmd_serve(args, _client):
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


# ---------------------------------------------------------------------------

def _add_model_opts(p):
    p.add_argument("--model", default="shell", help="flat | shell | file:PATH")
    p.add_argument("--rho", default=None, help="frequency ratio; a:b[:step] sweeps (gamma)")
    p.add_argument("--sigma", type=float, default=None, help="flat-beam slenderness h/L")
    p.add_argument("--d", type=float, default=2.67, help="flat-model cubic coefficient")
    p.add_argument("--gbar", type=float, default=0.63, help="flat-model quadratic coefficient")
    p.add_argument("--omega1", type=float, default=1.0, help="shell-model first frequency")
    p.add_argument("--master", type=int, default=0, help="master mode index (0-based)")
    p.add_argument("--method", default=None, help="comma list: nf2,nf3,qm-md,qm-smd,static-cond,full")
    p.add_argument("--out", default="romlab_out", help="output directory")
    p.add_argument("--server", default=None, help="run against a romlab server URL")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="romlab",
        description="reduced-order models of geometrically nonlinear vibrating systems",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gamma", help="hardening/softening coefficient sweeps (ratio or model)")
    _add_model_opts(g)
    g.add_argument("--ratios", action="store_true", help="plot C/C_SC ratios instead of Gamma")

    b = sub.add_parser("backbone", help="backbone curves per reduction method")
    _add_model_opts(b)
    b.add_argument("--n-harm", type=int, default=7, help="retained harmonics")
    b.add_argument("--tol", type=float, default=1e-10, help="HBM residual tolerance")
    b.add_argument("--steps", type=int, default=200, help="max continuation points")
    b.add_argument("--max-amp", type=float, default=0.6, help="master amplitude cap")

    m = sub.add_parser("manifold", help="manifold scans and full-system orbits")
    _add_model_opts(m)
    m.add_argument("--r-max", type=float, default=0.35)
    m.add_argument("--n-r", type=int, default=71)
    m.add_argument("--n-s", type=int, default=21)
    m.add_argument("--cut", action="store_true", help="only the zero-velocity section")
    m.add_argument("--n-harm", type=int, default=7)

    s = sub.add_parser("modeshape", help="orthogonal deformation per method")
    _add_model_opts(s)
    s.add_argument("--amplitude", type=float, default=0.1)
    s.add_argument("--full-reference", action="store_true",
                   help="add the symmetric-filtered full-system deformation")
    s.add_argument("--n-harm", type=int, default=7)

    v = sub.add_parser("validate", help="validate a JSON model file")
    v.add_argument("path")
    v.add_argument("--server", default=None)

    sv = sub.add_parser("serve", help="run the HTTP service")
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--port", type=int, default=8000)
    return ap


_DISPATCH = {
    "gamma": cmd_gamma,
    "backbone": cmd_backbone,
    "manifold": cmd_manifold,
    "modeshape": cmd_modeshape,
    "validate": cmd_validate,
    "serve": cmd_serve,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    if hasattr(args, "rho"):
        args.rho_sweep, args.rho_value = parse_rho(args.rho)
        # single-model commands fall back to the slow/fast showcase ratio
        if (
            args.command != "gamma"
            and args.rho_value is None
            and getattr(args, "sigma", None) is None
            and args.model in ("flat", "shell")
        ):
            args.rho_value = 10.0
    client = Client(getattr(args, "server", None))
    try:
        return _DISPATCH[args.command](args, client)
    except RomlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
