"""Error tradeoffs for approximate joint measurements of qubit observables."""
from .bounds import (
    BoundaryPoint,
    branciard_family,
    branciard_lhs,
    branciard_metric_errors,
    branciard_sharp,
    linear_tradeoff_residual,
    unsharpness_tradeoff,
    yu_oh_from_unsharpness,
    yu_oh_optimal_vectors,
    yu_oh_point,
)
from .compat import (
    IncompatibleError,
    JointObservable,
    commutator_norm,
    compat_boundary_residual,
    compatible,
    joint_from_functions,
    joint_observable,
    post_process,
    unsharpness,
)
from .core import (
    DensityOperator,
    DichotomicPovm,
    DiscretePovm,
    Effect,
    InvalidOperatorError,
    QubitOperator,
    moment,
    operator_norm,
    probability,
)
from .counterexamples import (
    CounterexampleReport,
    hall_optimal_f,
    run_biased_zero_noise,
    run_ebar_discontinuity,
    run_n_outcome_commuting,
    run_three_outcome_example,
)
from .errors import (
    ErrorPoint,
    Measure,
    local_uniform_error,
    metric_error_dichotomic,
    metric_error_general,
    noise_biased,
    noise_general,
    noise_symmetric,
)
from .optimize import (
    IterationTrace,
    OptimizerConfig,
    alternate_minimize,
    grid_oracle_min,
    lagrange_residual,
    min_D_given_c,
    min_noise_given_c,
    sample_admissible_region,
)
