"""Exact local-global surjectivity checks for matrix groups over Z/mZ."""

__version__ = "0.1.0"

from .errors import (
    BadReduction,
    CapExceeded,
    InvalidModulus,
    ModlgError,
    NotADivisor,
    NotInvertible,
    NotSimple,
    NotTraceZero,
    ParseError,
    PreconditionViolated,
    SearchExhausted,
    ShapeMismatch,
    SmallPrime,
    Unsupported,
)
from .families import GroupFamily, family_order, is_member, similitude_factor, standard_generators
from .galrep import CurveQ, FrobeniusSample, ap_count, collect_samples, mod_ell_test, mod_m_verdict, signature_tables
from .groups import (
    GeneratedGroup,
    closure,
    commutator_subgroup,
    contains_element,
    contains_family,
    equals_family,
    group_order,
    kernel_component,
    project_group,
)
from .lifting import (
    check_general_conditions,
    construct_counterexample,
    lift_check_algebraic,
    lift_check_sl2,
    square_zero_decompose,
)
from .modular import MatrixModM, Modulus, factor_modulus, lift_crt, reduce_modulus
from .occ import (
    CompositionFactorReport,
    Direction,
    SimpleGroupId,
    composition_factors,
    identify_simple,
    predicted_occ,
    sl2_occ_criterion,
)
from .verdicts import Status, SurjectivityVerdict, check_delta_pair, check_gsp, check_surjectivity_gl2

__all__ = [name for name in dir() if not name.startswith("_")]
