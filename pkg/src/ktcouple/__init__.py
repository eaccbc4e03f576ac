"""Certified K-functional brackets and rectangle norms for mixed-norm
couples on finite weighted measure spaces."""

from .measure import (
    MeasureSpace,
    Rearrangement,
    Rectangle,
    WeightedMatrix,
    rearrange,
    rect_mass_sum,
)
from .norms import (
    CoupleSpec,
    lorentz_pq_norm,
    lq_norm,
    mixed_inf_one,
    mixed_inf_one_T,
    mixed_weak_norm,
    mixed_weak_norm_T,
    row_q_norms,
    weak_lp_norm,
)
from .rectnorm import (
    GUARD_LIMIT,
    GuardError,
    RectNormResult,
    quad_norm,
    triple_norm,
    triple_norm_p1_degenerate,
)
from .splitting import (
    CertificationError,
    SplitResult,
    SplitStage,
    SplitTrace,
    split_infty_one,
    split_p_one,
    split_p_q,
)
from .kt import (
    KtBracket,
    LpSolution,
    MaskSolution,
    kt_bracket,
    kt_exact_lp,
    kt_mask_bruteforce,
)
from .interp import (
    InterpSpec,
    Interval,
    OperatorKernel,
    bracket_u_p,
    op_triple_norm,
    theta_inf_norm,
    theta_q_norm,
    weak_type_check,
)
from .repro import (
    ReproCheck,
    ReproReport,
    repro_prop34,
    repro_remark23,
    repro_remark24,
    repro_varopoulos,
)
from .harness import PropertyResult, VerifyReport, run_verification

__version__ = "0.1.0"

__all__ = [
    "MeasureSpace",
    "WeightedMatrix",
    "Rectangle",
    "Rearrangement",
    "rearrange",
    "rect_mass_sum",
    "CoupleSpec",
    "lq_norm",
    "weak_lp_norm",
    "lorentz_pq_norm",
    "mixed_inf_one",
    "mixed_inf_one_T",
    "mixed_weak_norm",
    "mixed_weak_norm_T",
    "row_q_norms",
    "GUARD_LIMIT",
    "GuardError",
    "RectNormResult",
    "triple_norm",
    "quad_norm",
    "triple_norm_p1_degenerate",
    "CertificationError",
    "SplitStage",
    "SplitTrace",
    "SplitResult",
    "split_infty_one",
    "split_p_one",
    "split_p_q",
    "KtBracket",
    "LpSolution",
    "MaskSolution",
    "kt_bracket",
    "kt_exact_lp",
    "kt_mask_bruteforce",
    "OperatorKernel",
    "InterpSpec",
    "Interval",
    "op_triple_norm",
    "bracket_u_p",
    "theta_inf_norm",
    "theta_q_norm",
    "weak_type_check",
    "ReproCheck",
    "ReproReport",
    "repro_remark23",
    "repro_remark24",
    "repro_prop34",
    "repro_varopoulos",
    "PropertyResult",
    "VerifyReport",
    "run_verification",
]
