"""FastAPI application exposing the analysis handlers."""

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..errors import RomlabError
from . import handlers
from . import schemas as sc

app = FastAPI(
    title="romlab",
    description=(
        "Reduced-order models of geometrically nonlinear vibrating systems: "
        "hardening/softening sweeps, backbone curves, manifold scans and "
        "amplitude-dependent mode shapes for the normal-form and "
        "quadratic-manifold reductions."
    ),
    version=__version__,
)


def _run(fn, req):
    try:
        return fn(req)
    except RomlabError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    except FileNotFoundError as exc:
        raise HTTPException(status_code=404, detail=str(exc)) from exc


@app.get("/health", response_model=sc.HealthResponse)
def health():
    return sc.HealthResponse(status="ok", version=__version__)


@app.post("/gamma", response_model=sc.GammaResponse)
def gamma(req: sc.GammaRequest):
    return _run(handlers.handle_gamma, req)


@app.post("/backbone", response_model=sc.BackboneResponse)
def backbone(req: sc.BackboneRequest):
    return _run(handlers.handle_backbone, req)


@app.post("/manifold", response_model=sc.ManifoldResponse)
def manifold(req: sc.ManifoldRequest):
    return _run(handlers.handle_manifold, req)


@app.post("/modeshape", response_model=sc.ModeshapeResponse)
def modeshape(req: sc.ModeshapeRequest):
    return _run(handlers.handle_modeshape, req)


@app.post("/models/validate", response_model=sc.ValidateResponse)
def validate(req: sc.ValidateRequest):
    return _run(handlers.handle_validate, req)
