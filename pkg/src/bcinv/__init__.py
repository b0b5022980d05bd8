"""Generalized-inverse toolkit over exact finite rings and matrix algebras."""

from .errors import (
    BcinvError,
    CapExceeded,
    ConvergenceFailure,
    DimensionMismatch,
    InverseAbsent,
    NotInvertible,
    NotRegular,
    PreconditionFailed,
    RingMismatch,
    SingularCorner,
    SpectralPreconditionFailed,
)
from .rings import (
    Ideal,
    RingDescriptor,
    RingValue,
    canonical_inner_inverse,
    ideal,
    inner_inverses,
    invert,
    is_idempotent,
    is_unit,
    normalized_inner_inverse,
    rank_factorization,
    ring_arith,
    values_equal,
)
from .inverses import (
    BcCertificate,
    CornerFrame,
    CornerUnit,
    ReverseOrderResult,
    annihilator_inverse,
    ats_outer_inverse,
    bc_inverse,
    bott_duffin_inverse,
    bott_duffin_split_inverse,
    build_v,
    corner_ring_inverse,
    corner_unit_membership,
    decompose_bc_invertible,
    group_inverse,
    hybrid_inverse,
    inverse_of_inverse,
    outer_inverse_pql,
    perturb_invariant,
    reverse_order_law_check,
    scale_corner,
    unit_consistency,
    verify_bc_inverse,
)
from .lab import (
    DEFAULT_RINGS,
    LabReport,
    RingTable,
    verify_bott_duffin_section,
    verify_equivalence_suite,
    verify_reverse_order,
    verify_set_decomposition,
)
from .analytic import (
    BoundReport,
    ContinuityReport,
    SequenceSpec,
    SpectralReport,
    build_H,
    build_H_right,
    choose_beta,
    continuity_experiment,
    difference_identity,
    integral_representation,
    limit_representation,
    perturbation_bound,
    series_representation,
    spectrum,
)

__version__ = "0.1.0"
