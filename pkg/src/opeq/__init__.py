"""Solvability and solution families for the operator equation AX = C.

Four layers:

- :mod:`opeq.matcore` -- complex-matrix primitives (pseudoinverse, PSD square
  root, polar partial isometry, range and majorization tests) behind a single
  tolerance configuration;
- :mod:`opeq.douglas` -- the solvability criteria and the general /
  Hermitian / positive solution families;
- :mod:`opeq.projpair` -- a discretized algebra of 2x2 matrix functions on
  [0, 1] with diagonal boundary values, where ``(P + Q)^{1/2} X = P`` is
  provably unsolvable and an arbitrarily small perturbation of Q repairs it;
- :mod:`opeq.oracle` -- deliberately naive independent verifiers and the
  seeded randomized property suite.

The ``opeq`` console script exposes all of it; see ``opeq --help``.
"""

from .errors import (
    BadEpsilon,
    BadGridSize,
    MatrixFormatError,
    NotASolution,
    NotHermitian,
    NotPSD,
    NotSolvable,
    NotSolvableHermitian,
    NotSolvablePositive,
    OpeqError,
    ParameterNotHermitian,
    ParameterNotPSD,
    PreconditionFailed,
    ShapeMismatch,
    SingularAtZero,
)
from .matcore import (
    DEFAULT_TOLERANCES,
    MajorizationResult,
    ToleranceConfig,
    adjoint,
    as_matrix,
    is_psd,
    matrix_from_json,
    matrix_to_json,
    min_majorization_scale,
    pinv,
    polar_partial_isometry,
    range_inclusion,
    spectral_norm,
    sqrt_psd,
)
from .douglas import (
    LambdaDiagnostic,
    SolutionFamily,
    SolutionKind,
    SolvabilityReport,
    Verdict,
    block_psd_test,
    general_solution,
    hermitian_solution,
    hermitian_solvability,
    lambda_diagnostic,
    positive_solution,
    positive_solvability,
    recover_parameter,
    reduced_solution,
    solution_family,
    solvability_report,
    tn_sequence,
)
from .projpair import (
    Grid,
    GridFunction,
    NonexistenceCertificate,
    PartialGridFunction,
    algebra_membership,
    canonical_pair,
    inv_sqrt_sum,
    nonexistence_certificate,
    perturb_q,
    perturbed_solution,
    pointwise_solution,
    sqrt_sum_closed_form,
    uniform_grid,
)
from .oracle import (
    TrialSpec,
    douglas_properties_check,
    lsq_solve,
    positive_search,
    property_suite,
    psd_quadratic_probe,
)

__version__ = "0.1.0"
