"""Kernel-based set-to-set matching with negative sampling and a bound laboratory."""

from .bounds import (
    BoundReport,
    OptimalAlpha,
    OptimalNegativeRatio,
    RademacherEstimate,
    empirical_rademacher_rkhs,
    lemma1_bound,
    margin_bound,
    marginal_rademacher,
    optimal_alpha,
    optimal_negative_ratio,
    rademacher_from_gram,
    rkhs_deviation_bound,
    rkhs_tail_probability,
)
from .errors import (
    CannotRecombineError,
    DimensionMismatchError,
    EmptyInputError,
    InvalidPermutationError,
    SetMatchError,
    UnboundedKernelError,
)
from .kernels import (
    BaseKernelSpec,
    GramMatrix,
    PairKernel,
    RkhsScoreFunction,
    base_kernel,
    empirical_kappa,
    evaluate,
    evaluate_batch,
    gram,
    kappa,
    median_heuristic_gamma,
    pair_kernel,
    pair_kernel_matrix,
    project_to_ball,
    rkhs_norm,
    set_kernel,
    set_kernel_matrix,
    sup_norm_bound,
)
from .learner import (
    ModelReport,
    TrainConfig,
    TrainTrace,
    coefficient_gradient,
    evaluate_model,
    train,
)
from .losses import (
    RiskEstimate,
    SurrogateSpec,
    empirical_margin_risk,
    empirical_risk,
    lipschitz_constant,
    logistic_phi,
    margin_phi,
    mc_expected_risk,
    mc_ranking_error,
    pair_loss,
)
from .sampling import (
    GeneratorSpec,
    MatchingDataset,
    PairGenerator,
    assemble,
    assemble_with_ratio,
    generate_positives,
    negative_sampling,
)
from .sets import (
    CheckResult,
    ItemSet,
    Permutation,
    SetPair,
    apply_permutation,
    check_equivariance,
    check_permutation_invariance,
    check_symmetry,
    select_best_candidate,
)

__version__ = "0.1.0"
