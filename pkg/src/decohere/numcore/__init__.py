"""Numerical core: dense complex linear algebra, adaptive quadrature for
damped-oscillatory integrands, and an embedded Runge-Kutta integrator.

Everything here is a pure function of its inputs; specs and matrices are
immutable values, safe to share between threads.
"""

from .linalg import (
    EXP_NORM_BOUND,
    as_square_complex,
    hermitian_eigensystem,
    hermitian_eigenvalues,
    hermiticity_defect,
    matrix_exp,
    require_hermitian,
)
from .ode import DEFAULT_ODE, OdeSpec, ode_solve
from .quadrature import (
    DEFAULT_QUADRATURE,
    OSC_THRESHOLD,
    QuadratureSpec,
    integrate_adaptive,
    integrate_oscillatory,
)

__all__ = [
    "EXP_NORM_BOUND",
    "DEFAULT_ODE",
    "DEFAULT_QUADRATURE",
    "OSC_THRESHOLD",
    "OdeSpec",
    "QuadratureSpec",
    "as_square_complex",
    "hermitian_eigensystem",
    "hermitian_eigenvalues",
    "hermiticity_defect",
    "integrate_adaptive",
    "integrate_oscillatory",
    "matrix_exp",
    "ode_solve",
    "require_hermitian",
]
