# evolution/__init__.py
"""시간 적분 패키지"""
from evolution.integrator import (
    Diagnostics,
    EvolutionResult,
    SplitStepper,
    energy,
    evolve,
    mass,
    nonlinear_step,
    strang_step,
    trajectory,
)

__all__ = [
    "Diagnostics",
    "EvolutionResult",
    "SplitStepper",
    "energy",
    "evolve",
    "mass",
    "nonlinear_step",
    "strang_step",
    "trajectory",
]
