"""Linear control systems on the 3-D Heisenberg group and its quotients."""

from .core import (
    AlgebraElement,
    GroupAutomorphism,
    GroupElement,
    LinearField,
    apply_automorphism,
    bracket,
    derivation_apply,
    flow,
    flow_automorphism,
    flow_matrix,
    inverse,
    lambda_operator,
    left_invariant_eval,
    linear_field_eval,
    multiply,
    theta,
)
from .subgroups import (
    Subgroup,
    SubgroupFamily,
    UnsupportedSubgroupError,
    contains,
    coset_equal_0p,
    coset_equal_1p,
    is_invariant,
    is_invariant_bruteforce,
    is_normal,
    project_0p,
    project_1p,
)
from .systems import (
    ControlBox,
    ControlSignal,
    IntegrationError,
    Sigma0pParams,
    Sigma10Params,
    Sigma11Params,
    Trajectory,
    conjugation_residual,
    induced_drift_1p,
    induced_invariant_1p,
    induced_sigma11_params,
    integrate,
    sigma_0p_rhs,
    sigma_10_rhs,
    sigma_11_rhs,
    sigma_H_rhs,
    sigma_R_closed_form,
)
from .analysis import (
    ControlSetDescription,
    GridConfig,
    IntervalSet,
    RegionEstimate,
    control_set_estimate,
    control_set_sigma_11,
    control_set_sigma_R,
    larc_numeric_rank,
    larc_predicate,
    p_polynomial,
    q_polynomial,
    reachable_grid,
)

__version__ = "0.1.0"
