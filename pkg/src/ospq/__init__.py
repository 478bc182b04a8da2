"""Exact q-series, characters, fusion rings, modular data and parafermion
cosets for the admissible-level osp(1|2) vertex superalgebra families."""

from .qseries import (
    EmptySeries,
    EvalResult,
    NonconvergentDomain,
    QSeries,
    qs_add,
    qs_equal_below,
    qs_eta,
    qs_eval,
    qs_invert,
    qs_mul,
    qs_scalar,
    qs_shift,
)
from .theta import (
    InvalidIndex,
    WQSeries,
    theta_big,
    theta_q,
    vartheta1_times_i,
    vartheta2,
    weyl_denominator,
    wq_add,
    wq_div,
    wq_equal_on_box,
    wq_from_q,
    wq_invert,
    wq_mul,
    wq_scalar,
    wq_scale_w,
    wq_shift,
    wq_specialize_w1,
    wq_specialize_w_signed,
    wq_to_q,
)
from .characters import (
    AdmissibleLevel,
    IdentityReport,
    InvalidLabel,
    OspLabel,
    Sl2Label,
    VirLabel,
    char_w1,
    char_w_signed_direct,
    component_chars_w1,
    is_integer_graded,
    osp_char,
    osp_vacuum_central_charge,
    sl2_char,
    verify_decomposition,
    verify_theta_identity,
    vir_char,
)
from .fusion import (
    FusionTensor,
    OutOfRange,
    SuperFusionEntry,
    n_coeff,
    osp_fusion,
    parafermion_fusion,
    sl2_fusion,
    super_fusion,
    vir_fusion,
)
from .modular import (
    ExtendedSMatrix,
    FPItem,
    FPReport,
    NonIntegralFusion,
    SMatrix,
    STransformReport,
    SuperVerlinde,
    TMatrix,
    check_s_transform_numeric,
    derived_tolerance,
    extended_smatrix,
    fp_dimension_report,
    fp_ratios,
    min_conformal_weight,
    s_small,
    sl2_smatrix,
    st_cube_defect,
    stilde_matrix,
    t_matrix,
    unitarity_defect,
    verlinde_standard,
    verlinde_super,
    vir_smatrix,
    vir_weight_map,
)
from .coset import (
    CosetLabel,
    InconsistentBranching,
    LatticeData,
    coset_char_direct,
    coset_char_phase_sum,
    coset_labels,
    coset_reassembly,
    coset_smatrix,
    coset_t_phase,
    lattice_theta,
)
from .selftest import CRITERIA, CriterionResult, run_all

__version__ = "0.1.0"

__all__ = [
    "AdmissibleLevel",
    "CRITERIA",
    "CosetLabel",
    "CriterionResult",
    "EmptySeries",
    "EvalResult",
    "ExtendedSMatrix",
    "FPItem",
    "FPReport",
    "FusionTensor",
    "IdentityReport",
    "InconsistentBranching",
    "InvalidIndex",
    "InvalidLabel",
    "LatticeData",
    "NonIntegralFusion",
    "NonconvergentDomain",
    "OspLabel",
    "OutOfRange",
    "QSeries",
    "SMatrix",
    "STransformReport",
    "Sl2Label",
    "SuperFusionEntry",
    "SuperVerlinde",
    "TMatrix",
    "VirLabel",
    "WQSeries",
    "char_w1",
    "char_w_signed_direct",
    "check_s_transform_numeric",
    "component_chars_w1",
    "coset_char_direct",
    "coset_char_phase_sum",
    "coset_labels",
    "coset_reassembly",
    "coset_smatrix",
    "coset_t_phase",
    "derived_tolerance",
    "extended_smatrix",
    "fp_dimension_report",
    "fp_ratios",
    "is_integer_graded",
    "lattice_theta",
    "min_conformal_weight",
    "n_coeff",
    "osp_char",
    "osp_fusion",
    "osp_vacuum_central_charge",
    "parafermion_fusion",
    "qs_add",
    "qs_equal_below",
    "qs_eta",
    "qs_eval",
    "qs_invert",
    "qs_mul",
    "qs_scalar",
    "qs_shift",
    "run_all",
    "s_small",
    "sl2_char",
    "sl2_fusion",
    "sl2_smatrix",
    "st_cube_defect",
    "stilde_matrix",
    "super_fusion",
    "t_matrix",
    "theta_big",
    "theta_q",
    "unitarity_defect",
    "vartheta1_times_i",
    "vartheta2",
    "verify_decomposition",
    "verify_theta_identity",
    "verlinde_standard",
    "verlinde_super",
    "vir_char",
    "vir_fusion",
    "vir_smatrix",
    "vir_weight_map",
    "weyl_denominator",
    "wq_add",
    "wq_div",
    "wq_equal_on_box",
    "wq_from_q",
    "wq_invert",
    "wq_mul",
    "wq_scalar",
    "wq_scale_w",
    "wq_shift",
    "wq_specialize_w1",
    "wq_specialize_w_signed",
    "wq_to_q",
]
