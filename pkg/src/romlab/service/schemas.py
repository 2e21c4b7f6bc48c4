"""Request/response models of the analysis service.

All payloads are JSON-safe: sweep values that hit a pole are transmitted as
null with the pole location listed separately.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

MethodName = Literal["nf2", "nf3", "qm-md", "qm-smd", "static-cond", "full"]


class ModelSpec(BaseModel):
    """Where the structural model comes from.

    kind="flat"/"shell" build the 2-dof benchmarks (rho or sigma select the
    frequency ratio); kind="file" loads the JSON model format from a path on
    the service host; kind="inline" embeds the same document in the request.
    """

    kind: Literal["flat", "shell", "file", "inline"]
    rho: Optional[float] = None
    sigma: Optional[float] = None
    d: float = 2.67
    gbar: float = 0.63
    omega1: float = 1.0
    path: Optional[str] = None
    data: Optional[dict] = None

    @model_validator(mode="after")
    def _check_source(self):
        if self.kind == "file" and not self.path:
            raise ValueError("kind='file' requires path")
        if self.kind == "inline" and self.data is None:
            raise ValueError("kind='inline' requires data")
        # flat/shell may omit rho when the request sweeps it externally
        return self


class SweepSpec(BaseModel):
    start: float
    stop: float
    step: Optional[float] = None
    count: Optional[int] = None

    def values(self):
        import numpy as np

        if self.step is not None:
            n = int(round((self.stop - self.start) / self.step)) + 1
            return [self.start + i * self.step for i in range(max(n, 1))]
        count = self.count or 241
        return list(np.linspace(self.start, self.stop, count))


class GammaRequest(BaseModel):
    ratios: bool = False
    model: Optional[ModelSpec] = None
    rho: Optional[SweepSpec] = None
    master: int = 0
    methods: list[MethodName] = ["nf2", "qm-md", "qm-smd", "static-cond"]

    @model_validator(mode="after")
    def _check(self):
        if not self.ratios and self.model is None:
            raise ValueError("either ratios=true or a model is required")
        return self


class GammaResponse(BaseModel):
    mode: Literal["ratios", "gamma"]
    rho: list[Optional[float]]
    curves: dict[str, list[Optional[float]]]
    poles: dict[str, list[float]] = Field(default_factory=dict)


class BackboneRequest(BaseModel):
    model: ModelSpec
    master: int = 0
    methods: list[MethodName] = ["nf2", "qm-md", "qm-smd", "full"]
    n_harm: int = Field(default=7, ge=1)
    tol: float = 1e-10
    steps: int = 200
    max_amp: float = 1.0
    ds: float = 0.02
    ds_max: float = 0.1
    amp0: float = 1e-3
    direction: int = 1


class BranchData(BaseModel):
    method: str
    status: str
    converged: bool
    omega: list[float]
    amp: list[float]                  # max over period of the continued master
    coord_h1: list[list[float]]       # per modal coordinate, first harmonic
    coord_h0: list[list[float]]
    coord_h2: list[list[float]]


class BackboneResponse(BaseModel):
    n_modes: int
    branches: dict[str, BranchData]


class ManifoldRequest(BaseModel):
    model: ModelSpec
    master: int = 0
    methods: list[MethodName] = ["nf2", "nf3", "qm-md", "qm-smd"]
    r_max: float = 0.35
    n_r: int = 71
    s_max: Optional[float] = None     # defaults to omega_p * r_max
    n_s: int = 21
    cut_only: bool = False            # sample only the S = 0 section
    # full-system orbits are sampled from a short backbone run when requested
    n_harm: int = 7
    max_amp: float = 0.4


class ManifoldData(BaseModel):
    method: str
    R: Optional[list[float]] = None
    S: Optional[list[float]] = None
    X: list[list[float]]
    Y: list[list[float]]


class ManifoldResponse(BaseModel):
    n_modes: int
    surfaces: dict[str, ManifoldData]


class ModeshapeRequest(BaseModel):
    model: ModelSpec
    master: int = 0
    methods: list[MethodName] = ["nf2", "qm-md", "qm-smd"]
    amplitude: float = 0.1
    full_reference: bool = False      # compute the filtered full-system u_perp
    n_harm: int = 7


class ModeshapeResponse(BaseModel):
    n_coords: int
    labels: Optional[list[str]] = None
    u_perp: dict[str, list[float]]
    reference: Optional[list[float]] = None


class ValidateRequest(BaseModel):
    data: dict


class ValidateResponse(BaseModel):
    n: int
    eigenfrequencies: list[float]
    quad_entries: int
    cubic_entries: int
    potential_symmetric: bool
    labels: Optional[list[str]] = None


class HealthResponse(BaseModel):
    status: str
    version: str
