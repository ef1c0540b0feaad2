"""Lusin-measurable curves [0, 1] -> E in locally convex spaces.

Exact interval-union measure theory (:mod:`.borel`), seminorm-family space
models (:mod:`.lcs`), curves with Lusin certificates (:mod:`.curves`), Lp
quadrature and weak integrals (:mod:`.lpnorm`) and the approximation
drivers (:mod:`.approx`).
"""

from .approx import (
    ApproxReport,
    continuous_approx_char,
    dyadic_average,
    lp_simple_approx,
    uniform_limit_certificate,
    uniform_simple_approx,
    urysohn_1d,
)
from .borel import (
    CompactSet,
    DyadicCover,
    IntervalSet,
    complement,
    dyadic_cover,
    inner_compact,
    intersect,
    measure,
    outer_open,
    symm_diff,
    union,
)
from .curves import (
    CurveSum,
    DeltaPath,
    HatPath,
    LusinCertificate,
    PiecewiseAffine,
    PiecewiseContinuous,
    Simple,
    certificate_for,
    certify_restriction,
    char_certificate,
    constant,
    delta_separation,
    hat_cauchy_gap,
    intersect_certificates,
)
from .kernels import BACKEND
from .lcs import (
    FiniteDim,
    PointwiseSpace,
    evaluation,
    functional_apply,
    hat,
    indicator,
    seminorm_eval,
    vec_add,
    vec_eval,
    vec_scale,
)
from .lpnorm import (
    QuadratureResult,
    abs_continuity_delta,
    hb_inequality_check,
    lp_seminorm,
    p_monotonicity_check,
    running_integral,
    weak_integral,
)

__version__ = "0.1.0"

__all__ = [
    "abs_continuity_delta",
    "ApproxReport",
    "BACKEND",
    "certificate_for",
    "certify_restriction",
    "char_certificate",
    "CompactSet",
    "complement",
    "constant",
    "continuous_approx_char",
    "CurveSum",
    "delta_separation",
    "DeltaPath",
    "dyadic_average",
    "dyadic_cover",
    "DyadicCover",
    "evaluation",
    "FiniteDim",
    "functional_apply",
    "hat",
    "hat_cauchy_gap",
    "HatPath",
    "hb_inequality_check",
    "indicator",
    "inner_compact",
    "intersect",
    "intersect_certificates",
    "IntervalSet",
    "lp_seminorm",
    "lp_simple_approx",
    "LusinCertificate",
    "measure",
    "outer_open",
    "p_monotonicity_check",
    "PiecewiseAffine",
    "PiecewiseContinuous",
    "PointwiseSpace",
    "QuadratureResult",
    "running_integral",
    "seminorm_eval",
    "Simple",
    "symm_diff",
    "uniform_limit_certificate",
    "uniform_simple_approx",
    "union",
    "urysohn_1d",
    "vec_add",
    "vec_eval",
    "vec_scale",
    "weak_integral",
]
