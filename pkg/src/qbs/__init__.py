"""Kantorovich-type q-Bernstein-Stancu operators: q-calculus, basis weights,
operator evaluation, closed-form moments, error bounds and experiments."""

from .analysis import (
    ExperimentRow,
    ModulusEstimate,
    bound_lipschitz,
    bound_shisha_mond,
    bound_theorem_3_2,
    bound_theorem_4_1,
    bound_theorem_4_4,
    convergence_sweep,
    modulus,
    q_sweep,
    second_modulus,
    sup_error,
    voronovskaja_deviation,
)
from .functions import FunctionSyntaxError, builtin, builtin_names, parse_function
from .moments import (
    MomentReport,
    NegativeDeltaError,
    QSequence,
    central2_bound,
    central2_exact,
    delta_n,
    delta_n_x,
    derived_variance_limit,
    local_shift_coeffs,
    moment1_closed,
    moment2_closed,
    moment2_q_shifted_reading,
    moment_report,
    scaled_limits,
)
from .operators import (
    DomainWarning,
    Kind,
    Lipschitz,
    OperatorSpec,
    TargetFunction,
    apply,
    node_functionals,
    operator_domain,
    q_kantorovich_stancu,
    sample_nodes,
)
from .qcalc import (
    DEFAULT_TOL,
    JacksonTolerance,
    JacksonTruncationError,
    QValue,
    jackson_integral,
    q_binomial,
    q_factorial,
    q_integer,
)
from .stancu_basis import StancuDomain, StancuParams, stancu_domain, stancu_weights

__version__ = "0.1.0"
