# solitons/__init__.py
"""기저 상태 솔리톤과 변분 항등식"""
from solitons.petviashvili import SolitonProblem, SolitonResult, default_initial_guess, petviashvili_solve
from solitons.scaling import ScalingReport, scaling_exponents_check
from solitons.variational import (
    NonexistenceReport,
    action,
    action_gradient,
    combined_identity,
    nehari_residual,
    nonexistence_report,
    pohozaev_residual,
    reconstruct_v,
    trilinear_ratio,
)
