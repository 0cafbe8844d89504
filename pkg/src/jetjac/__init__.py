"""jetjac: exact jet-scheme computations over Q and prime fields.

Computes Hasse-Schmidt derivation components of polynomials, the
equations of jet schemes of hypersurfaces, classical and higher-order
Jacobian matrices together with their block extensions, exact ranks and
determinantal minors, and rank-based singularity certificates.
"""

from .field import (
    DivisionByZero,
    FieldElement,
    FieldError,
    FieldSpec,
    MixedFields,
    binomial,
    is_prime,
)
from .hasse import (
    CommutationReport,
    HSExpansion,
    NotBasePolynomial,
    check_commutation,
    hs_components,
    hs_components_leibniz,
    jet_partial,
)
from .jacobian import (
    EmptyInput,
    IndexFamilies,
    PolyMatrix,
    exponent_vectors,
    index_families,
    jac,
    jac_m,
)
from .jetmatrix import (
    BlockSpec,
    FdbdReport,
    check_fdbd,
    dn_matrix,
    jet_jacobian,
    reverse_blocks,
)
from .jetscheme import (
    CokernelReport,
    ConstantPolynomial,
    FreeRankComparison,
    JetSchemeDesc,
    NobileCertificate,
    NoSmoothPointFound,
    NotSingularBase,
    PointNotOnScheme,
    Presentation,
    RankReport,
    classical_rank_test,
    extend_to_jet,
    find_smooth_point,
    generic_cokernel_rank,
    higher_rank_test,
    jet_equations,
    nobile_certificate,
    on_jet_scheme,
    presentation_of,
    rank_counterexample_check,
    zero_jet_over,
)
from .linalg import (
    MinorSet,
    ScalarMatrix,
    TooManyMinors,
    eval_matrix,
    generic_rank,
    minors,
    poly_det,
    rank,
)
from .poly import (
    BadExponent,
    JetVariable,
    MissingCoordinate,
    MultiIndex,
    ParseError,
    Point,
    Polynomial,
    UnknownVariable,
    base_variables,
    jet_grid,
    parse_poly,
)

__version__ = "0.1.0"
