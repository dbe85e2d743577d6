"""Shearing of Loewner chains on the unit ball of C^2.

Truncated power-series maps, the shearing operator, sampled membership in
the class M_-, Loewner ODE flows, and the sharp bound 3*sqrt(3)/2 for the
z2^2 coefficient of the first component.
"""

from .analysis import (
    ReproductionReport,
    StarlikeReport,
    check_starlike,
    functional_L102,
    growth_check,
    reproduce_theorems,
    starlike_defect,
)
from .loewner import (
    CoefficientFlow,
    HerglotzField,
    QProfile,
    TransitionMap,
    envelope_bound,
    integrate_transition,
    recover_chain_map,
    shear_coefficient_flow,
    transition_map,
)
from .mminus import (
    MembershipReport,
    SamplingConfig,
    check_mminus,
    fourier_average,
    herglotz_defect,
    sharp_shear_bound,
    shear_membership_threshold,
)
from .series import MultiIndex, Point2, PowerSeriesMap2, coefficient, compose, eval_map, jacobian_at
from .shear import (
    SHARP_CONSTANT,
    ShearMap,
    phi_map,
    shear_compose,
    shear_field,
    shear_inverse,
    shear_of,
    shear_to_series,
)

__version__ = "0.1.0"
