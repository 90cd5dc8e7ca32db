"""Fusion of two estimates whose errors share an unknown common noise term.

Bounds of the joint covariance family (dual upper bounds, CI and ICI
bounds, lower bound), fusion weights, samplers of admissible
cross-covariances and ellipse data for 2x2 illustrations.
"""

from .bounds import (
    BoundParams,
    b_matrix,
    ci_dominance_gap,
    ci_dominance_outer,
    ci_upper_bound,
    dual_upper_bound,
    ici_upper_bound,
    lower_bound,
    verify_lower,
    verify_upper,
)
from .errors import (
    DimensionError,
    FusionError,
    InputError,
    NotPositiveDefiniteError,
    ParameterError,
    RankDeficiencyError,
)
from .families import (
    AdmissibleX,
    JointCovariance,
    OmegaFactorization,
    family_sampler,
    joint_from_x,
    omega_factorization,
    sample_ci_general,
    sample_ici,
    sample_omega,
    sample_rank1,
    validate_joint,
)
from .fusion import (
    FusionResult,
    FusionWeight,
    ci_weights,
    fuse,
    fused_bound,
    fused_from_bound,
    fused_lower,
    ideal_fusion,
    optimize_bound,
    weight_from_bound,
)
from .geometry import EllipsePolyline, ellipse_boundary, ellipse_contains, fused_set_samples
from .linalg import GevdFactors, gevd, is_psd, loewner_geq, schur_complement, spd_sqrt

__version__ = "0.1.0"
