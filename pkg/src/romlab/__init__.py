"""romlab: reduced-order models of geometrically nonlinear vibrating systems.

Builds and compares three nonlinear reductions of a single master mode --
the normal-form change of coordinates and the quadratic manifolds from
dynamic/static modal derivatives -- against full-system reference solutions
computed by harmonic-balance continuation.
"""

from .continuation import (
    BackboneCurve,
    BackbonePoint,
    HarmonicSignal,
    ManifoldSample,
    ModalSystem,
    PhysicalSystem,
    QuadraticManifoldSystem,
    backbone,
    fs_manifold,
    hbm_residual,
    integrate,
    manifold_scan,
    modal_orbit,
)
from .eigen import ModalModel, solve_modes
from .errors import (
    ContinuationError,
    DecompositionError,
    DimensionMismatchError,
    ModelFormatError,
    PoleError,
    ResonanceError,
    RigidBodyModeError,
    RomlabError,
    SymmetryError,
)
from .modal_derivatives import (
    ModalDerivativeSet,
    compute_md,
    compute_smd,
    md_modal_closed_form,
    qm_map,
    qm_map_velocity,
    qm_tangent,
)
from .models import (
    FlatBeamParams,
    ShellParams,
    flat_beam_from_continuum,
    flat_beam_model,
    load_model,
    save_model,
    shell_model,
)
from .normal_form import (
    NormalFormCoeffs,
    ResonanceReport,
    detect_resonances,
    nf_coefficients,
    nf_map,
    nf_reduced_dynamics,
)
from .rom import (
    FULL,
    METHODS,
    NF,
    QM_MD,
    QM_SMD,
    STATIC_COND,
    CRatios,
    DriftVector,
    GammaResult,
    MultipleScalesSolution,
    ReducedOscillator,
    build_rom,
    c_ratios,
    drift,
    first_harmonic_master,
    gamma,
    gamma_from_modal,
    multiple_scales,
    orth_component,
    reconstruct_modeshape,
    symmetric_orth_component,
)
from .tensors import (
    CubicTensor,
    QuadTensor,
    StructuralModel,
    contract_cubic,
    contract_quad,
    energy,
    force,
    hessian_action,
    jacobian,
    to_modal,
)

__version__ = "0.1.0"
