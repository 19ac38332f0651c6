# kernels/__init__.py
"""근 공식, 미적분 커널, 평활 상한 감사 패키지"""
from kernels.calculus import phi_kernel_audit, phi_kernel_integral, tail_integral, tail_integral_audit
from kernels.roots import (
    RootProblem,
    alpha_ratio,
    eval_P,
    lower_bound_audit,
    root_bisection,
    root_r,
    upper_bound_audit,
)
from kernels.smoothing import smoothing_supremum_sample
