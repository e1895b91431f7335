"""Collisional decoherence in the position representation (1D).

A test particle in a gas undergoes momentum kicks q drawn from a
probability law with characteristic function Phi at collision rate
``rate``; the position matrix elements then evolve in closed form,

    rho(x, y, t) = exp(-rate * (1 - Phi(x - y)) * t) * rho(x, y, 0),

so diagonals are untouched while spatial coherences decay, saturating at
the bare collision rate for widely separated points.  The same dynamics
discretized on a position grid is a genuine GKSL generator whose Lindblad
operators are the momentum-kick unitaries diag(exp(i q x)), giving a
machine-checkable equivalence between the generator and the closed form.

The gas itself is summarized by its dynamic structure factor; for an ideal
Maxwell-Boltzmann gas (1D, hbar = 1)

    S(q, E) = sqrt(beta M / (2 pi q^2))
              * exp(-beta M (E + q^2/(2M))^2 / (2 q^2)),

a Gaussian in the energy transfer, normalized to 1 in E at fixed q and
obeying detailed balance S(q, E) = exp(-beta E) S(q, -E).
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass
from typing import Union

import numpy as np

from . import numcore
from .errors import (
    NotHermitianError,
    QuadratureSupportError,
    ValidationError,
    ZeroMomentumTransferError,
)
from .gksl import GkslGenerator


@dataclass(frozen=True)
class GaussianMomentumLaw:
    """Gaussian momentum transfers, Phi(x) = exp(-sigma_q^2 x^2 / 2)."""

    rate: float
    sigma_q: float

    def __post_init__(self):
        if not (self.rate > 0):
            raise ValidationError("rate must be > 0")
        if not (self.sigma_q > 0):
            raise ValidationError("sigma_q must be > 0")

    def phi(self, x: float) -> float:
        return math.exp(-0.5 * self.sigma_q**2 * x * x)

    def nodes(self, n_q: int) -> tuple[np.ndarray, np.ndarray]:
        """Gauss-Hermite nodes and weights for the kick distribution;
        weights sum to the collision rate."""
        if n_q < 16:
            raise QuadratureSupportError(
                f"gaussian law needs n_q >= 16 quadrature nodes, got {n_q}"
            )
        h, v = np.polynomial.hermite.hermgauss(n_q)
        q = math.sqrt(2.0) * self.sigma_q * h
        w = self.rate * v / math.sqrt(math.pi)
        if np.abs(q).max() < 4.0 * self.sigma_q:
            raise QuadratureSupportError(
                "quadrature nodes do not cover the law's effective support"
            )
        return q, w


@dataclass(frozen=True)
class TwoPointMomentumLaw:
    """Symmetric two-point kicks +-q0, Phi(x) = cos(q0 x); exactly
    representable by its two atoms, so the discretized generator is exact."""

    rate: float
    q0: float

    def __post_init__(self):
        if not (self.rate > 0):
            raise ValidationError("rate must be > 0")
        if not (self.q0 > 0):
            raise ValidationError("q0 must be > 0")

    def phi(self, x: float) -> float:
        return math.cos(self.q0 * x)

    def nodes(self, n_q: int) -> tuple[np.ndarray, np.ndarray]:
        if n_q < 2:
            raise QuadratureSupportError(
                f"two-point law needs n_q >= 2 nodes, got {n_q}"
            )
        q = np.array([-self.q0, self.q0])
        w = np.array([0.5 * self.rate, 0.5 * self.rate])
        return q, w


MomentumTransferLaw = Union[GaussianMomentumLaw, TwoPointMomentumLaw]


@dataclass(frozen=True)
class PositionDensityMatrix:
    """State on a 1D position grid; trace convention is the plain sum of
    diagonal entries (uniform unit weight per grid point)."""

    grid: np.ndarray
    matrix: np.ndarray
    atol: InitVar[float] = 1e-8

    def __post_init__(self, atol):
        g = np.asarray(self.grid, dtype=float)
        if g.ndim != 1 or g.size < 1:
            raise ValidationError("grid must be a non-empty 1-D array")
        if not np.all(np.isfinite(g)):
            raise ValidationError("grid must be finite")
        if g.size > 1 and not np.all(np.diff(g) > 0):
            raise ValidationError("grid must be strictly ascending")
        m = numcore.as_square_complex(self.matrix, "position density matrix")
        if m.shape[0] != g.size:
            raise ValidationError(
                f"matrix is {m.shape[0]}x{m.shape[0]} but grid has {g.size} points"
            )
        defect = numcore.hermiticity_defect(m)
        if defect > 1e-10:
            raise NotHermitianError(
                f"position density matrix Hermiticity defect {defect:.3e}"
            )
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > atol:
            raise ValidationError(f"diagonal sum {tr!r} differs from 1")
        min_eig = float(numcore.hermitian_eigenvalues(0.5 * (m + m.conj().T),
                                                      atol=np.inf)[0])
        if min_eig < -atol:
            raise ValidationError(f"negative eigenvalue {min_eig:.3e}")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "matrix", m)

    @property
    def n_sites(self) -> int:
        return self.grid.size

    @property
    def dim(self) -> int:
        return self.grid.size

    @classmethod
    def superposition(cls, grid) -> "PositionDensityMatrix":
        """Equal-amplitude coherent superposition over all grid points."""
        g = np.asarray(grid, dtype=float)
        n = g.size
        return cls(g, np.full((n, n), 1.0 / n, dtype=complex))


def decoherence_factor(law: MomentumTransferLaw, dx: float, t: float) -> float:
    """exp(-rate * (1 - Phi(dx)) * t): the closed-form suppression of a
    position coherence at separation dx after time t."""
    if t < 0:
        raise ValidationError("t must be >= 0")
    return math.exp(-law.rate * (1.0 - law.phi(dx)) * t)


def evolve_exact(
    rho0: PositionDensityMatrix, law: MomentumTransferLaw, t: float
) -> PositionDensityMatrix:
    """Entrywise closed-form evolution; diagonals are exactly invariant."""
    if t < 0:
        raise ValidationError("t must be >= 0")
    dx = rho0.grid[:, None] - rho0.grid[None, :]
    phi = np.vectorize(law.phi)(dx)
    kernel = np.exp(-law.rate * (1.0 - phi) * t)
    return PositionDensityMatrix(rho0.grid, kernel * rho0.matrix)


def discretized_characteristic_function(
    law: MomentumTransferLaw, n_q: int, dx
) -> np.ndarray:
    """Phi_n(dx): the n_q-node quadrature approximant of the law's
    characteristic function (exact for the two-point law)."""
    q, w = law.nodes(n_q)
    dx = np.atleast_1d(np.asarray(dx, dtype=float))
    vals = (np.exp(1j * np.outer(dx, q)) * w).sum(axis=1) / law.rate
    return vals.real


def build_discretized_generator(
    law: MomentumTransferLaw, grid, n_q: int
) -> GkslGenerator:
    """GKSL generator whose position-representation action is
    -rate * (1 - Phi_n(x_i - x_j)) * rho_ij: one unitary kick operator
    diag(exp(i q_m x)) per quadrature node, with the node weights on the
    diagonal of the Kossakowski matrix."""
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size < 1:
        raise ValidationError("grid must be a non-empty 1-D array")
    q, w = law.nodes(n_q)
    ops = tuple(np.diag(np.exp(1j * qm * g)) for qm in q)
    return GkslGenerator(
        np.zeros((g.size, g.size), dtype=complex),
        ops,
        np.diag(w).astype(complex),
    )


@dataclass(frozen=True)
class GasSpec:
    """Ideal-gas environment: particle mass, number density, inverse
    temperature, and a Gaussian Fourier-transformed interaction
    v_tilde(q) = v0 * exp(-q^2 / (2 sigma_v^2))."""

    mass: float
    density: float
    beta: float
    v0: float = 1.0
    sigma_v: float = 1.0

    def __post_init__(self):
        for name in ("mass", "density", "beta", "sigma_v"):
            if not (getattr(self, name) > 0):
                raise ValidationError(f"{name} must be > 0")

    def interaction_ft(self, q: float) -> float:
        return self.v0 * math.exp(-q * q / (2.0 * self.sigma_v**2))

    def mu(self, q: float) -> float:
        """Collision kernel prefactor (2 pi)^4 n |v_tilde(q)|^2 (hbar = 1);
        sets the overall scale of the momentum-transfer density."""
        return (2.0 * math.pi) ** 4 * self.density * self.interaction_ft(q) ** 2


def log_mb_structure_factor(gas: GasSpec, q: float, e: float) -> float:
    """log S(q, E) for the Maxwell-Boltzmann gas; kept in log space so
    ratios of exponentially small values stay exact."""
    if q == 0:
        raise ZeroMomentumTransferError("structure factor needs q != 0")
    bm = gas.beta * gas.mass
    recoil = q * q / (2.0 * gas.mass)
    return 0.5 * math.log(bm / (2.0 * math.pi * q * q)) - bm * (e + recoil) ** 2 / (
        2.0 * q * q
    )


def mb_structure_factor(gas: GasSpec, q: float, e: float) -> float:
    """Dynamic structure factor of the ideal Maxwell-Boltzmann gas: a
    Gaussian in E peaked at -q^2/(2M), unit-normalized in E."""
    return math.exp(log_mb_structure_factor(gas, q, e))


def detailed_balance_ratio(gas: GasSpec, q: float, e: float) -> float:
    """S(q, E) / S(q, -E), computed in log space; equals exp(-beta E)."""
    return math.exp(
        log_mb_structure_factor(gas, q, e) - log_mb_structure_factor(gas, q, -e)
    )


def fdt_response(gas: GasSpec, q: float, e: float) -> float:
    """Dissipative response chi''(q, E) = pi (1 - exp(beta E)) S(q, E),
    antisymmetric in E; the E = 0 limit is 0.  Computed in log space once
    beta E is large enough for exp(beta E) to dominate."""
    if e == 0.0:
        if q == 0:
            raise ZeroMomentumTransferError("structure factor needs q != 0")
        return 0.0
    be = gas.beta * e
    log_s = log_mb_structure_factor(gas, q, e)
    if be > 30.0:
        return -math.pi * math.exp(be + log_s)
    return -math.pi * math.expm1(be) * math.exp(log_s)
