"""Exact jet-level construction of flat-data solutions to analytic elliptic equations."""

from .certificate import (
    BairePoint,
    CounterexampleCertificate,
    assemble_G,
    baire_point,
    build_certificate,
    compute_bk,
    default_pk,
    divergence_table,
    verify_flatness,
)
from .errors import (
    CertificateError,
    DimensionMismatch,
    InputError,
    JetError,
    NoStabilization,
    NotEllipticPosition,
    NotInvertible,
    ReliabilityExhausted,
    SingularMatrix,
    SolveError,
)
from .jets import (
    Jet,
    jet_derive,
    jet_eval,
    jet_linear_combination,
    jet_mul,
    jet_ord,
    jet_reciprocal,
    jet_restrict_last_zero,
    jet_substitute_linear,
    polynomial,
)
from .operator import (
    CanonicalOperator,
    DiffOperator,
    canonical_form,
    cauchy_riemann,
    ellipticity_check,
    laplacian,
    op_apply,
)
from .scalar import Scalar
from .solver import SolverConfig, SolveTrace, build_uk, picard_iterate, solve_uk

__version__ = "0.1.0"
