"""Finite-dimensional dilation criteria and explicit constructions.

Decides, from a truncated operator moment sequence, whether
self-adjoint / positive / isometric / unitary dilations can exist, and
builds them explicitly in block-operator form with independent
verification of every certificate.
"""

from .errors import *  # noqa: F401,F403
from .opcore import (  # noqa: F401
    BORDERLINE,
    DEFAULT_TOL,
    NOT_PSD,
    PSD,
    BlockMatrix,
    PsdReport,
    Tolerance,
    as_matrix,
    block_assemble,
    corner_compress,
    hermitian_eig,
    krylov_orthonormalize,
    matrix_from_json,
    matrix_to_json,
    norm2,
    numerical_radius,
    pinv_psd,
    psd_check,
    sqrt_psd,
)
from .moments import (  # noqa: F401
    NO,
    YES,
    CriterionReport,
    MomentSequence,
    completely_monotone_check,
    hamburger_check,
    hankel,
    jacobi_matrix,
    jacobi_parameters,
    moment_sequence,
    poisson_check,
    selfadjoint_contraction_check,
    sequence_from_json,
    sequence_to_json,
    szego_partial_sum,
    toeplitz_positivity_check,
    validate_growth,
)
from .dilations import (  # noqa: F401
    ISOMETRIC,
    PARTIAL,
    POSITIVE,
    SELF_ADJOINT,
    UNITARY,
    DilationResult,
    TridiagonalBlocks,
    dilation_from_json,
    dilation_to_json,
    equivalence_by_moments,
    gns_selfadjoint,
    isometric_recursive,
    minimal_reduce,
    schaffer_isometry,
    schaffer_unitary,
    tridiagonal_recursive,
    verify_dilation,
)
from .ca_class import (  # noqa: F401
    CaInstance,
    CaMembershipReport,
    berger_stampfli_check,
    c_rho_build,
    ca_build,
    ca_isometric_V,
    ca_membership_report,
    ca_moments,
    ca_unitary_U,
    instance_from_json,
    instance_to_json,
    istratescu_monotonicity_test,
    kernel_check,
    minimal_subspace_check,
    partial_isometry_R,
    zeta_check,
)

__version__ = "0.1.0"
