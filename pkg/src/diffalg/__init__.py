"""Exact symbolic engine for relative differential-algebraic geometry:
relative prolongations, relative D-varieties and D-groups, logarithmic
differential equations, integrability checking and Kolchin dimension
polynomials, all over exact rational arithmetic."""

from .coeffield import (
    DD,
    DELTA,
    DerivationName,
    FieldDescriptor,
    FieldElement,
    coeff_derive,
    declare_field,
    normalize,
)
from .diffpoly import (
    DerivativeVar,
    DiffPolynomial,
    DiffRational,
    DiffRing,
    ORDERLY,
    Ranking,
    as_rational,
    derive,
    leader_initial_separant,
    partial,
    rank_compare,
    reindex,
    substitute,
)
from .dgroup import (
    LinearSystem,
    RationalGroupLaw,
    RelativeDGroup,
    adjoint,
    check_crossed_hom,
    hom_check,
    integrable_point_check,
    law_check,
    linear_integrability,
    log_derivative,
    nabla_e,
    tau_inv,
    tau_mul,
    twisted_section,
)
from .dvariety import (
    RelativeDVariety,
    check_integrability,
    is_subdvariety,
    sharp_member,
    validate_section,
)
from .errors import (
    CertificateError,
    ConstantPolynomial,
    DiffAlgError,
    DimensionMismatch,
    DivisionByZero,
    NonCommutingTable,
    NotOnGroup,
    NotOnVariety,
    ParseError,
    SessionError,
    UndefinedSymbol,
)
from .kolchin import (
    LeaderSet,
    NumericalPolynomial,
    brute_force_count,
    dim_poly,
    leaders_of,
    sharp_bound_check,
    sharp_leaders,
    type_and_dim,
)
from .prolong import (
    ProlongationPresentation,
    TauPoint,
    d_lin,
    d_rel,
    entries_equal,
    nabla,
    prolongation_gens,
    prolongation_ring,
    tau_apply,
)
from .reduction import (
    AutoreducedSet,
    ReductionCertificate,
    Verdict,
    is_autoreduced,
    membership_verdict,
    ritt_reduce,
)
from .reports import CheckRow, CheckSection, Status
from .session import Session, load_session, parse_session

__version__ = "0.1.0"
