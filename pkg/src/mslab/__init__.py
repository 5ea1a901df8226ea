"""Model spaces K_I, truncated Toeplitz operators and nearly invariant subspaces g K_I."""
from __future__ import annotations

__version__ = "0.1.0"

from .kernels import BACKEND
from .disk import (
    ApproachSequence,
    CircleGrid,
    StolzRegion,
    StolzSweep,
    circle_grid,
    geometric_depths,
    pseudohyperbolic_distance,
    stolz_contains,
    stolz_sample,
)
from .errors import (
    ConfigError,
    DegenerateDenominatorError,
    DegenerateModulusError,
    DomainError,
    GridMismatchError,
    InvalidPairError,
    MslabError,
    NonAnalyticError,
    NonExtremalError,
    RankViolationError,
    ResolutionError,
    SingularityError,
    SubsetViolationError,
)
from .inner import InnerFunction, adc_probe, blaschke_lambda, kernel_norm_sq
from .boundary import (
    BoundaryFunction,
    HardyEvaluator,
    cauchy_eval,
    inner_product,
    outer_from_modulus,
    riesz_project,
    tail_norm,
)
from .model_space import (
    ModelSpaceElement,
    TMBasis,
    boundary_kernel,
    element,
    interior_kernel,
    kernel_eval,
    project,
    tm_basis,
)
from .toeplitz import (
    OperatorMatrix,
    assemble,
    complex_symmetry_residual,
    compressed_shift,
    conjugation,
    rank_one,
    sarason_defect,
    tto_residual,
    zero_symbol_residual,
)
from .nearly_invariant import (
    NearlyInvariantSpace,
    SarasonPair,
    build_resolved_space,
    build_space,
    constant_pair,
    extremality_check,
    inner_pair,
    kernel_M,
    project_M,
    spatial_isomorphism_residual,
    trivial_pair,
)
from .probe import (
    dichotomy_classify,
    growth_bound_check,
    mntl_check,
    nt_limit,
    paper_example,
    vanishing_space,
)
