"""Numerical toolkit for frames, fusion frames, and woven families."""

from .errors import ToolkitError
from .frames import (
    BoundsReport,
    DiscreteFrame,
    analysis_matrix,
    bessel_bound,
    dual_frame,
    frame_operator,
    is_riesz_basis,
    optimal_bounds,
)
from .fusion import (
    FusionBoundsReport,
    FusionFrame,
    Subspace,
    analysis_apply,
    fusion_bounds,
    fusion_frame_operator,
    is_orthonormal_fusion_basis,
    is_riesz_decomposition,
    synthesis_is_onto,
)
from .linalg import SpectrumReport, orthonormalize, projector, sym_eig
from .perturbation import (
    PerturbationCertificate,
    op_perturbation_check,
    proj_perturbation_check,
    pw_check,
)
from .transforms import (
    EquivalenceReport,
    InvertibleOperator,
    LocalSystem,
    RemovalReport,
    apply_operator_discrete,
    conjugation_check,
    flatten_local_system,
    intersect_family,
    remove_subset_check,
    subspace_intersection,
    local_global_equivalence_report,
)
from .weaving import (
    Partition,
    RieszWeavingReport,
    WovenFamily,
    WovenReport,
    find_nonwoven_witness,
    weave,
    weaving_bessel_bound,
    woven_bounds_exhaustive,
    woven_bounds_sampled,
    woven_riesz_decomposition_check,
)

__version__ = "0.1.0"

__all__ = [
    "ToolkitError",
    "SpectrumReport",
    "orthonormalize",
    "sym_eig",
    "projector",
    "DiscreteFrame",
    "BoundsReport",
    "frame_operator",
    "analysis_matrix",
    "optimal_bounds",
    "bessel_bound",
    "dual_frame",
    "is_riesz_basis",
    "Subspace",
    "FusionFrame",
    "FusionBoundsReport",
    "fusion_frame_operator",
    "fusion_bounds",
    "analysis_apply",
    "synthesis_is_onto",
    "is_riesz_decomposition",
    "is_orthonormal_fusion_basis",
    "Partition",
    "WovenFamily",
    "WovenReport",
    "RieszWeavingReport",
    "weave",
    "woven_bounds_exhaustive",
    "woven_bounds_sampled",
    "weaving_bessel_bound",
    "find_nonwoven_witness",
    "woven_riesz_decomposition_check",
    "InvertibleOperator",
    "LocalSystem",
    "EquivalenceReport",
    "RemovalReport",
    "apply_operator_discrete",
    "conjugation_check",
    "subspace_intersection",
    "intersect_family",
    "flatten_local_system",
    "local_global_equivalence_report",
    "remove_subset_check",
    "PerturbationCertificate",
    "pw_check",
    "op_perturbation_check",
    "proj_perturbation_check",
]
