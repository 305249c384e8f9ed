"""Clifford algebra Cl(8), its spinor module, and the twistor geometry of G(2,8).

Exact and floating-point multivector arithmetic, the 16-dimensional spinor
module with its matrix isomorphism, the identification of oriented 2-planes
in R^8 with orthogonal complex structures, the fibrations over S^6 and S^4,
and numerical differential geometry of bundle sections, plus a verification
CLI covering every desk-checkable claim of the construction.
"""

from .geometry import (
    G28Tangent,
    RetractionFailure,
    Section,
    beta_form,
    canonical_section,
    holo_defect,
    hv_split,
    induced_acs,
    jtilde,
    kahler_d_omega,
    metric_g,
    nijenhuis_g28,
    nijenhuis_s6,
    perturbed_section,
    retract_bivector,
    s6_frame,
    section_push,
    section_registry,
    tangent_frame,
    tau_push,
)
from .multivector import (
    EXACT,
    FLOAT,
    AlgebraError,
    DimensionMismatch,
    Multivector,
    ParseError,
    RingMismatch,
    blade_inner,
    format_multivector,
    geometric_product,
    grade_involution,
    grade_project,
    parse_multivector,
    reversion,
    wedge,
)
from .spinor import (
    NotInIdeal,
    SpinorBasisError,
    SpinorStructure,
    build_spinor_structure,
    get_structure,
    odd_block,
    rep,
    rep_to_json,
    spinor_coords,
)
from .suites import VERSION, CheckRecord, ConfigError, SuiteConfig, run
from .twistor import (
    STANDARD_J,
    DecompositionFailure,
    GeometryError,
    GrassmannPoint,
    InvarianceFailure,
    NotInFiber,
    PreconditionViolation,
    calibration_form,
    fiber_point,
    j_v,
    phi_star,
    s4_invariance_check,
    standard_j,
    tangent_action,
    tau,
    tau1,
    theta_fiber,
    theta_space,
)

__version__ = VERSION
