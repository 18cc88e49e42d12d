"""Finite engine for set-family posets with graded morphism labels.

The package decides six morphism labels over antichain-presented set
families, factors arrows, searches zigzag reachability with replayable
certificates, minimizes object functions over reachability classes,
computes exact covering numbers, and batch-verifies the axioms of the
construction on exhaustive finite grids.
"""

from .core import (
    BOTTOM,
    Instance,
    SetFamily,
    arrow_exists,
    canonicalize,
    enumerate_objects,
    family_from_obj,
    family_to_obj,
    instance_from_obj,
    instance_to_obj,
    is_isomorphic,
    is_kappa_directed,
    join_raw,
    kappa_union_closure,
    meet,
    set_caps_enabled,
    top,
)
from .cover import CovProblem, CovSolution, cov_bounds, cov_exact, is_covering_family
from .derived import (
    CARDINALITY,
    MEMBER_SIZE_SUM,
    DerivedResult,
    ObjectFunction,
    derived_cofibrant,
    derived_plain,
    get_object_function,
    revised_power_derived,
)
from .errors import FamcatError, InputError, ResourceLimitError
from .factorization import (
    AxiomCheck,
    Factorization,
    cute_reflection,
    factor,
    factor_c_wf,
    factor_wc_f,
    is_cute,
    verify_m2_m4_m5,
)
from .homotopy import (
    Diagram,
    HoResult,
    IndecResult,
    ZigzagCertificate,
    ZigzagStep,
    almost_containment_refuter,
    claim1_necessary,
    containment_refuter,
    ho_iso,
    ho_reaches,
    is_degenerate_limit,
    is_indecomposable,
    posetal_limit,
    replay_certificate,
    zigzag_reach_map,
)
from .labels import (
    LABELS,
    IdentityReport,
    LabelReport,
    chain_reachable,
    check_label_identities,
    clear_faults,
    has_label,
    inject_fault,
    label_set,
    mode_arrow,
    mode_view,
)
from .lifting import (
    ArrowRef,
    generated_label,
    generator_arrows,
    lifting_holds,
    lifting_report,
    lifts_against_generators,
    make_arrow,
    verify_m1,
)
from .verifier import (
    ALL_AXIOMS,
    Claim2Result,
    M5SearchResult,
    VerificationReport,
    check_claim2_closure,
    check_m0,
    check_measurable_equivalences,
    detect_faults,
    equivariance_suite,
    find_m5_counterexample_st,
    run_axiom_suite,
    standard_grid,
    standard_pool,
)

__all__ = [
    "ALL_AXIOMS",
    "ArrowRef",
    "AxiomCheck",
    "BOTTOM",
    "CARDINALITY",
    "Claim2Result",
    "CovProblem",
    "CovSolution",
    "DerivedResult",
    "Diagram",
    "Factorization",
    "FamcatError",
    "HoResult",
    "IdentityReport",
    "IndecResult",
    "InputError",
    "Instance",
    "LABELS",
    "LabelReport",
    "M5SearchResult",
    "MEMBER_SIZE_SUM",
    "ObjectFunction",
    "ResourceLimitError",
    "SetFamily",
    "VerificationReport",
    "ZigzagCertificate",
    "ZigzagStep",
    "almost_containment_refuter",
    "arrow_exists",
    "canonicalize",
    "chain_reachable",
    "check_claim2_closure",
    "check_label_identities",
    "check_m0",
    "check_measurable_equivalences",
    "claim1_necessary",
    "clear_faults",
    "containment_refuter",
    "cov_bounds",
    "cov_exact",
    "cute_reflection",
    "derived_cofibrant",
    "derived_plain",
    "detect_faults",
    "enumerate_objects",
    "equivariance_suite",
    "factor",
    "factor_c_wf",
    "factor_wc_f",
    "family_from_obj",
    "family_to_obj",
    "find_m5_counterexample_st",
    "generated_label",
    "generator_arrows",
    "get_object_function",
    "has_label",
    "ho_iso",
    "ho_reaches",
    "inject_fault",
    "instance_from_obj",
    "instance_to_obj",
    "is_covering_family",
    "is_cute",
    "is_degenerate_limit",
    "is_indecomposable",
    "is_isomorphic",
    "is_kappa_directed",
    "join_raw",
    "kappa_union_closure",
    "label_set",
    "lifting_holds",
    "lifting_report",
    "lifts_against_generators",
    "make_arrow",
    "meet",
    "mode_arrow",
    "mode_view",
    "posetal_limit",
    "replay_certificate",
    "revised_power_derived",
    "run_axiom_suite",
    "set_caps_enabled",
    "standard_grid",
    "standard_pool",
    "top",
    "verify_m1",
    "verify_m2_m4_m5",
    "zigzag_reach_map",
]
