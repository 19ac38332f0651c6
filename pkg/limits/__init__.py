# limits/__init__.py
"""ε → 0 극한 실험 패키지"""
from limits.growth import GrowthResult, UniformBoundReport, growth_exponent, growth_tracking, uniform_bound_check
from limits.linear_limit import (
    PlateauReport,
    limit_integral,
    limit_integral_closed_form,
    limit_integral_plateau,
    linear_limit_error,
    operator_norm_gap,
    plateau_report,
)
from limits.semiclassical import NegativeSResult, SweepResult, negative_s_difference, semiclassical_sweep
