"""GKSL generators and completely positive semigroup dynamics.

A generator acts on density matrices as

    L(rho) = -i [H, rho] + sum_jk a_jk (L_j rho L_k^dag
                                        - 1/2 {L_k^dag L_j, rho})

with Hermitian H and a positive semidefinite coefficient matrix ``a``
(rejected at construction otherwise).  Superoperator matrices use the
column-stacking convention, vec(A X B) = (B^T kron A) vec(X); the Choi
matrix is the unnormalized C = sum_ij E_ij kron Map(E_ij), positive
semidefinite exactly when the map is completely positive.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import numcore
from .errors import (
    DimensionMismatchError,
    InvariantViolationError,
    NotHermitianError,
    ValidationError,
)
from .numcore import OdeSpec

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

# Hard error threshold for invariant drift during time integration; silent
# positivity loss would poison downstream decoherence measurements.
DRIFT_ERROR_THRESHOLD = 1e-6


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(m).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of :func:`vec`."""
    return np.asarray(v).reshape((dim, dim), order="F")


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite state.

    ``atol`` loosens the construction tolerance for states produced by
    numerical integration, which are allowed small drift.
    """

    matrix: np.ndarray
    atol: InitVar[float] = 1e-10

    def __post_init__(self, atol):
        m = numcore.as_square_complex(self.matrix, "density matrix")
        defect = numcore.hermiticity_defect(m)
        if defect > atol:
            raise NotHermitianError(
                f"density matrix Hermiticity defect {defect:.3e} > {atol:.1e}"
            )
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > atol:
            raise ValidationError(f"density matrix trace {tr!r} differs from 1")
        min_eig = float(numcore.hermitian_eigenvalues(0.5 * (m + m.conj().T),
                                                      atol=np.inf)[0])
        if min_eig < -atol:
            raise ValidationError(
                f"density matrix has negative eigenvalue {min_eig:.3e}"
            )
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, amplitudes: Sequence[complex]) -> "DensityMatrix":
        v = np.asarray(amplitudes, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim)


@dataclass(frozen=True)
class GkslGenerator:
    """Hamiltonian, Lindblad operators and Kossakowski matrix of a generator.

    ``validate_psd=False`` admits an indefinite coefficient matrix; this is
    only used for time-dependent rates that may transiently go negative, in
    which case complete positivity of the propagated map is not certified.
    """

    hamiltonian: np.ndarray
    lindblad_ops: tuple[np.ndarray, ...] = ()
    kossakowski: np.ndarray = field(default_factory=lambda: np.zeros((0, 0), complex))
    validate_psd: InitVar[bool] = True

    def __post_init__(self, validate_psd):
        h = numcore.require_hermitian(self.hamiltonian, name="hamiltonian")
        ops = tuple(
            numcore.as_square_complex(op, f"lindblad_ops[{i}]")
            for i, op in enumerate(self.lindblad_ops)
        )
        for i, op in enumerate(ops):
            if op.shape != h.shape:
                raise DimensionMismatchError(
                    f"lindblad_ops[{i}] shape {op.shape} != hamiltonian {h.shape}"
                )
        a = numcore.require_hermitian(self.kossakowski, name="kossakowski")
        if a.shape[0] != len(ops):
            raise DimensionMismatchError(
                f"kossakowski is {a.shape[0]}x{a.shape[0]} but there are "
                f"{len(ops)} Lindblad operators"
            )
        if validate_psd and a.shape[0] > 0:
            min_eig = float(numcore.hermitian_eigenvalues(a)[0])
            if min_eig < -1e-10:
                raise ValidationError(
                    "kossakowski matrix is not positive semidefinite "
                    f"(min eigenvalue {min_eig:.3e})"
                )
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "lindblad_ops", ops)
        object.__setattr__(self, "kossakowski", a)

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]


@dataclass(frozen=True)
class Superoperator:
    """d^2 x d^2 matrix acting on column-stacked density matrices."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"superoperator must be square, got {m.shape}")
        d = int(round(m.shape[0] ** 0.5))
        if d * d != m.shape[0]:
            raise DimensionMismatchError(
                f"superoperator size {m.shape[0]} is not a perfect square"
            )
        if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
            raise ValidationError("superoperator contains non-finite entries")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return int(round(self.matrix.shape[0] ** 0.5))

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.matrix @ vec(rho), self.dim)


@dataclass(frozen=True)
class ChoiMatrix:
    """Choi matrix of a map on d-dimensional states (unnormalized)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"Choi matrix must be square, got {m.shape}")
        d = int(round(m.shape[0] ** 0.5))
        if d * d != m.shape[0]:
            raise DimensionMismatchError(
                f"Choi matrix size {m.shape[0]} is not a perfect square"
            )
        if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
            raise ValidationError("Choi matrix contains non-finite entries")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return int(round(self.matrix.shape[0] ** 0.5))


@dataclass(frozen=True)
class CpCheckResult:
    """Outcome of a complete-positivity check with the Choi spectrum."""

    passed: bool
    min_eigenvalue: float
    spectrum: np.ndarray
    tol: float

    def __bool__(self) -> bool:
        return self.passed


def _as_state(rho) -> np.ndarray:
    matrix = getattr(rho, "matrix", rho)
    return numcore.as_square_complex(matrix, "state")


def apply_generator(gen: GkslGenerator, rho) -> np.ndarray:
    """Evaluate the generator on a state, returning d rho / dt."""
    r = _as_state(rho)
    if r.shape[0] != gen.dim:
        raise DimensionMismatchError(
            f"state dimension {r.shape[0]} != generator dimension {gen.dim}"
        )
    h = gen.hamiltonian
    out = -1j * (h @ r - r @ h)
    a = gen.kossakowski
    ops = gen.lindblad_ops
    for j in range(a.shape[0]):
        for k in range(a.shape[0]):
            ajk = a[j, k]
            if ajk == 0:
                continue
            lk_lj = ops[k].conj().T @ ops[j]
            out += ajk * (
                ops[j] @ r @ ops[k].conj().T - 0.5 * (lk_lj @ r + r @ lk_lj)
            )
    return out


def to_superoperator(gen: GkslGenerator) -> Superoperator:
    """Matrix of the generator in the column-stacking convention."""
    d = gen.dim
    eye = np.eye(d, dtype=complex)
    h = gen.hamiltonian
    s = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    a = gen.kossakowski
    ops = gen.lindblad_ops
    for j in range(a.shape[0]):
        for k in range(a.shape[0]):
            ajk = a[j, k]
            if ajk == 0:
                continue
            lk_lj = ops[k].conj().T @ ops[j]
            s += ajk * (
                np.kron(ops[k].conj(), ops[j])
                - 0.5 * (np.kron(eye, lk_lj) + np.kron(lk_lj.T, eye))
            )
    return Superoperator(s)


def trace_defect(superop: Superoperator) -> float:
    """How badly the superoperator violates d(tr rho)/dt = 0: the max
    entry of vec(I)^dag S, which must vanish for trace preservation."""
    d = superop.dim
    row = vec(np.eye(d, dtype=complex)).conj() @ superop.matrix
    return float(np.abs(row).max())


def semigroup_propagator(gen: GkslGenerator, t: float) -> Superoperator:
    """exp(t L) as a superoperator matrix."""
    if t < 0:
        raise ValidationError("propagation time must be >= 0")
    s = to_superoperator(gen)
    return Superoperator(numcore.matrix_exp(t * s.matrix))


def propagate_semigroup(gen: GkslGenerator, rho0: DensityMatrix, t: float) -> DensityMatrix:
    """Propagate a state by the time-independent semigroup exp(t L)."""
    if t == 0:
        return rho0
    prop = semigroup_propagator(gen, t)
    return DensityMatrix(prop.apply(rho0.matrix), atol=1e-8)


def integrate_constant(
    gen: GkslGenerator,
    rho0: DensityMatrix,
    t_grid,
    spec: OdeSpec | None = None,
) -> list[DensityMatrix]:
    """ODE-integrate a time-independent generator along the grid."""
    s = to_superoperator(gen).matrix
    return _integrate_superop(lambda t: s, rho0, t_grid, spec)


def integrate_time_dependent(
    gen_at: Callable[[float], GkslGenerator],
    rho0: DensityMatrix,
    t_grid,
    spec: OdeSpec | None = None,
) -> list[DensityMatrix]:
    """Integrate d rho/dt = L(t) rho, rebuilding the generator at every
    internal Runge-Kutta stage (no interpolation of rates)."""
    return _integrate_superop(
        lambda t: to_superoperator(gen_at(t)).matrix, rho0, t_grid, spec
    )


def _integrate_superop(superop_at, rho0, t_grid, spec) -> list[DensityMatrix]:
    d = rho0.dim

    def rhs(t, v):
        return superop_at(t) @ v

    states = numcore.ode_solve(rhs, vec(rho0.matrix), t_grid, spec)
    out = []
    for row in states:
        m = unvec(row, d)
        trace_drift = abs(complex(np.trace(m)) - 1.0)
        herm_drift = numcore.hermiticity_defect(m)
        if trace_drift > DRIFT_ERROR_THRESHOLD or herm_drift > DRIFT_ERROR_THRESHOLD:
            raise InvariantViolationError(
                f"invariant drift exceeded {DRIFT_ERROR_THRESHOLD:.0e}: "
                f"trace {trace_drift:.3e}, Hermiticity {herm_drift:.3e}"
            )
        out.append(DensityMatrix(m, atol=2 * DRIFT_ERROR_THRESHOLD))
    return out


def choi_of_propagator(prop: Superoperator | Callable[[np.ndarray], np.ndarray],
                       dim: int | None = None) -> ChoiMatrix:
    """Choi matrix C = sum_ij E_ij kron Map(E_ij) of a map.

    ``prop`` is either a Superoperator or a callable acting on d x d
    matrices (then ``dim`` is required).
    """
    if isinstance(prop, Superoperator):
        d = prop.dim
        action = prop.apply
    else:
        if dim is None:
            raise ValidationError("dim is required for a callable map")
        d = dim
        action = prop
    c = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            e_ij = np.zeros((d, d), dtype=complex)
            e_ij[i, j] = 1.0
            mapped = np.asarray(action(e_ij), dtype=complex)
            if mapped.shape != (d, d):
                raise DimensionMismatchError(
                    f"map returned shape {mapped.shape}, expected {(d, d)}"
                )
            c += np.kron(e_ij, mapped)
    return ChoiMatrix(c)


def is_completely_positive(choi: ChoiMatrix, tol: float = 1e-9) -> CpCheckResult:
    """PSD test on the Choi spectrum: CP iff min eigenvalue >= -tol."""
    defect = numcore.hermiticity_defect(choi.matrix)
    if defect > 1e-9:
        raise NotHermitianError(
            f"Choi matrix Hermiticity defect {defect:.3e} > 1e-09; "
            "the map is not Hermiticity-preserving"
        )
    spectrum = numcore.hermitian_eigenvalues(choi.matrix, atol=np.inf)
    min_eig = float(spectrum[0])
    return CpCheckResult(min_eig >= -tol, min_eig, spectrum, tol)


def canonical_form(gen: GkslGenerator) -> GkslGenerator:
    """Equivalent generator with diagonal Kossakowski matrix.

    Diagonalizing a = U diag(rates) U^dag rotates the Lindblad operators to
    L'_m = sum_j U[j, m] L_j; rates are clamped at zero within tolerance.
    """
    a = gen.kossakowski
    if a.shape[0] == 0:
        return gen
    rates, u = numcore.hermitian_eigensystem(a)
    rates = np.where((rates < 0) & (rates > -1e-10), 0.0, rates)
    new_ops = tuple(
        sum(u[j, m] * gen.lindblad_ops[j] for j in range(a.shape[0]))
        for m in range(a.shape[0])
    )
    return GkslGenerator(
        gen.hamiltonian,
        new_ops,
        np.diag(rates).astype(complex),
        validate_psd=bool(np.all(rates >= 0)),
    )
