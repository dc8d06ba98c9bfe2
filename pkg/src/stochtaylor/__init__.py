"""Mean-square optimal approximation of iterated Ito stochastic integrals by
truncated multiple Fourier-Legendre series, with exact truncation-error
formulas, minimal-cap planning, and strong Taylor SDE schemes of orders
1.0, 1.5, 2.0, and 2.5.
"""

from .coefficients import (
    CoeffTensor,
    ExactNorm,
    WeightProfile,
    bar_coefficient,
    build_tensor,
    exact_norm,
    parseval_defect,
    scaled_coefficient,
)
from .errors import ErrorResult, IndexPattern, error_bound_kfact, exact_error
from .legendre import BasisFn, RationalPoly, eval_phi, legendre_poly, poly_antiderivative
from .planner import (
    Condition,
    TruncationPlan,
    check_hypothesis,
    minimal_order,
    minimal_order_kfact,
    reproduce_table,
    scheme_plan,
)
from .sampling import (
    GaussianPanel,
    IntegralSpec,
    PairPartition,
    discretization_oracle,
    enumerate_pair_partitions,
    sample_ito,
    sample_stratonovich,
)
from .schemes import (
    SdeProblem,
    StepContext,
    bilinear_problem,
    estimate_strong_order,
    gbm_problem,
    integrate,
    integrate_batch,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "BasisFn",
    "CoeffTensor",
    "Condition",
    "ErrorResult",
    "ExactNorm",
    "GaussianPanel",
    "IndexPattern",
    "IntegralSpec",
    "PairPartition",
    "RationalPoly",
    "SdeProblem",
    "StepContext",
    "TruncationPlan",
    "WeightProfile",
    "bar_coefficient",
    "bilinear_problem",
    "build_tensor",
    "check_hypothesis",
    "discretization_oracle",
    "enumerate_pair_partitions",
    "error_bound_kfact",
    "estimate_strong_order",
    "eval_phi",
    "exact_error",
    "exact_norm",
    "gbm_problem",
    "integrate",
    "integrate_batch",
    "legendre_poly",
    "minimal_order",
    "minimal_order_kfact",
    "parseval_defect",
    "poly_antiderivative",
    "reproduce_table",
    "sample_ito",
    "sample_stratonovich",
    "scaled_coefficient",
    "scheme_plan",
    "step",
]
