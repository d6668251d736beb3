"""Generalized ultraspherical moments on the two-gap sets E2(b) and E4(b).

Closed forms, a power series and tanh-sinh quadrature give independent routes
to the same numbers; ``gapmoments.verify`` cross-checks them.
"""

from .errors import ConvergenceError, DomainError, PoleError
from .geometry import (
    IntervalSet,
    Method,
    MomentQuery,
    MomentValue,
    SetKind,
    cos_phi_e2,
    cos_phi_e4,
    make_set,
    weight_e2,
    weight_e4,
)
from .moments import (
    e2_even_moment,
    e2_odd_moment_hyp,
    e2_odd_moment_series,
    e4_even_moment,
    e4_odd_limit,
    e4_odd_moment,
    full_range_moment,
    half_range_moment,
    moment,
)
from .quadrature import QuadratureSpec, integrate_de, moment_by_quadrature
from .specfun import gauss_2f1, log_gamma, pochhammer

__all__ = [
    "ConvergenceError",
    "DomainError",
    "PoleError",
    "IntervalSet",
    "Method",
    "MomentQuery",
    "MomentValue",
    "SetKind",
    "cos_phi_e2",
    "cos_phi_e4",
    "make_set",
    "weight_e2",
    "weight_e4",
    "e2_even_moment",
    "e2_odd_moment_hyp",
    "e2_odd_moment_series",
    "e4_even_moment",
    "e4_odd_limit",
    "e4_odd_moment",
    "full_range_moment",
    "half_range_moment",
    "moment",
    "QuadratureSpec",
    "integrate_de",
    "moment_by_quadrature",
    "gauss_2f1",
    "log_gamma",
    "pochhammer",
]
