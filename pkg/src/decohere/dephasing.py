"""Exactly solvable two-level dephasing driven by a bosonic bath.

The bath enters only through an Ohmic-family spectral density

    J(omega) = coupling * omega^s * omega_c^(1-s) * exp(-omega/omega_c)

and an inverse temperature beta (beta = +inf replaces coth(beta*omega/2)
by 1 analytically).  The model is the two-level system H = omega0 * sigma_z
with pure-dephasing coupling along sigma_z, whose exact solution fixes the
populations and multiplies the coherence by exp(-Gamma(t)) times a phase.

Conventions (pinned here, used consistently everywhere):

* Basis index 0 is the sigma_z eigenvector with eigenvalue +1, index 1 the
  one with eigenvalue -1; "the coherence" is matrix[0, 1].
* The commutator -i[H, rho] with H = omega0 * sigma_z rotates the
  coherence by exp(-2i*omega0*t); the factor 2 is the sigma_z eigenvalue
  gap.  Only the magnitude exp(-Gamma(t)) is convention independent.
* The master-equation rate is half the dephasing rate gamma(t): the
  dissipator gamma/2 * (sigma_z rho sigma_z - rho) multiplies the
  coherence by exp(-integral of gamma) = exp(-Gamma), consistent with the
  exact solution and with gamma(t) = integral of J(w) coth(beta w/2)
  sin(w t)/w dw.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NegativeFrequencyError, NegativeRateWarning, ValidationError
from .gksl import SIGMA_Z, DensityMatrix, GkslGenerator
from .numcore import (
    DEFAULT_QUADRATURE,
    OSC_THRESHOLD,
    QuadratureSpec,
    integrate_adaptive,
    integrate_oscillatory,
)

# Outer spec for the nested time-domain cross-check integrals: tight
# relative tolerance so the check stays meaningful for large hot-bath
# values of Gamma.
_CROSS_CHECK_SPEC = QuadratureSpec(abs_tol=1e-9, rel_tol=1e-11)


@dataclass(frozen=True)
class SpectralDensity:
    """Ohmic family with exponential cutoff; s < 1 sub-Ohmic, s = 1 Ohmic,
    s > 1 super-Ohmic."""

    coupling: float
    s: float = 1.0
    omega_c: float = 1.0

    def __post_init__(self):
        if not (self.coupling >= 0):
            raise ValidationError("coupling must be >= 0")
        if not (self.s > 0):
            raise ValidationError("exponent s must be > 0")
        if not (self.omega_c > 0):
            raise ValidationError("cutoff omega_c must be > 0")

    def __call__(self, omega: float) -> float:
        if omega < 0:
            raise NegativeFrequencyError(f"spectral density needs omega >= 0, got {omega}")
        if omega == 0.0:
            return 0.0
        return (
            self.coupling
            * omega**self.s
            * self.omega_c ** (1.0 - self.s)
            * math.exp(-omega / self.omega_c)
        )


@dataclass(frozen=True)
class BathSpec:
    """Inverse temperature; beta = math.inf is the zero-temperature bath."""

    beta: float

    def __post_init__(self):
        if not (self.beta > 0):
            raise ValidationError("beta must be > 0 (use math.inf for T = 0)")

    @property
    def zero_temperature(self) -> bool:
        return math.isinf(self.beta)

    def thermal_factor(self, omega: float) -> float:
        """coth(beta*omega/2), or 1 exactly at zero temperature."""
        if self.zero_temperature:
            return 1.0
        return 1.0 / math.tanh(0.5 * self.beta * omega)


@dataclass(frozen=True)
class DephasingModel:
    """Two-level pure dephasing: free frequency, spectral density, bath."""

    omega0: float
    spectral: SpectralDensity
    bath: BathSpec

    def __post_init__(self):
        if not math.isfinite(self.omega0):
            raise ValidationError("omega0 must be finite")

    def _thermal(self, w: float) -> float:
        """J(w) * coth(beta w / 2), the temperature-dressed spectral weight."""
        return self.spectral(w) * self.bath.thermal_factor(w)

    # -- bath correlation function -------------------------------------

    def bath_correlation(self, t: float, quad: QuadratureSpec | None = None) -> complex:
        """alpha(t): real part integral of J(w) coth(beta w/2) cos(w t),
        imaginary part -integral of J(w) sin(w t), over w in (0, inf).
        Even real part, odd imaginary part in t."""
        if not math.isfinite(t):
            raise ValidationError("t must be finite")
        j = self.spectral
        wc = j.omega_c
        if t == 0.0:
            real, _ = integrate_adaptive(self._thermal, 0.0, math.inf, quad, scale=wc)
            return complex(real, 0.0)

        abs_t = abs(t)
        real, _ = integrate_oscillatory(
            self._thermal, "cos", abs_t, 0.0, math.inf, quad, scale=wc
        )
        imag, _ = integrate_oscillatory(j, "sin", abs_t, 0.0, math.inf, quad, scale=wc)
        return complex(real, -math.copysign(1.0, t) * imag)

    # -- dephasing rate gamma(t) ----------------------------------------

    def dephasing_rate(self, t: float, quad: QuadratureSpec | None = None) -> float:
        """gamma(t) = integral of J(w) coth(beta w/2) sin(w t)/w dw."""
        if t < 0:
            raise ValidationError("t must be >= 0")
        if t == 0.0:
            return 0.0

        value, _ = integrate_oscillatory(
            lambda w: self._thermal(w) / w,
            "sin",
            t,
            0.0,
            math.inf,
            quad,
            scale=self.spectral.omega_c,
            # sin(w t)/w written as t*sinc to stay stable near w = 0
            head=lambda w: self._thermal(w) * t * np.sinc(w * t / math.pi),
        )
        return value

    def dephasing_rate_from_correlation(
        self, t: float, quad: QuadratureSpec | None = None
    ) -> float:
        """Independent route: Re integral of alpha(tau) for tau in (0, t)."""
        if t < 0:
            raise ValidationError("t must be >= 0")
        if t == 0.0:
            return 0.0
        value, _ = integrate_adaptive(
            lambda tau: self.bath_correlation(tau, quad).real,
            0.0,
            t,
            _CROSS_CHECK_SPEC,
        )
        return value

    # -- decoherence function Gamma(t) ----------------------------------

    def decoherence_function(self, t: float, quad: QuadratureSpec | None = None) -> float:
        """Gamma(t) = integral of J(w) coth(beta w/2) (1 - cos(w t))/w^2 dw."""
        if t < 0:
            raise ValidationError("t must be >= 0")
        if t == 0.0:
            return 0.0

        def integrand(w):
            # (1 - cos x)/x^2 = (sin(x/2)/(x/2))^2 / 2, cancellation-free
            half_sinc = np.sinc(w * t / (2.0 * math.pi))
            return self._thermal(w) * 0.5 * t * t * half_sinc * half_sinc

        spec = quad or DEFAULT_QUADRATURE
        upper = spec.tail_cutoff_multiplier * self.spectral.omega_c
        if t * upper <= OSC_THRESHOLD:
            value, _ = integrate_adaptive(
                integrand, 0.0, upper, quad, breakpoints=(1.0 / t,)
            )
            return value

        # Fast oscillation: keep the infrared stretch [0, 1/t] as the full
        # regularized integrand, then split 1 - cos into a smooth tail and
        # a weighted-oscillatory tail (each finite away from w = 0).
        split = 1.0 / t
        envelope = lambda w: self._thermal(w) / (w * w)  # noqa: E731
        head, _ = integrate_adaptive(integrand, 0.0, split, quad)
        smooth, _ = integrate_adaptive(envelope, split, upper, quad)
        oscillating, _ = integrate_oscillatory(envelope, "cos", t, split, upper, quad)
        return head + smooth - oscillating

    def decoherence_function_from_rate(
        self, t: float, quad: QuadratureSpec | None = None
    ) -> float:
        """Independent route: integral of gamma(tau) for tau in (0, t)."""
        if t < 0:
            raise ValidationError("t must be >= 0")
        if t == 0.0:
            return 0.0
        value, _ = integrate_adaptive(
            lambda tau: self.dephasing_rate(tau, quad),
            0.0,
            t,
            _CROSS_CHECK_SPEC,
        )
        return value

    # -- exact solution ---------------------------------------------------

    def coherence(
        self, rho0: DensityMatrix, t: float, quad: QuadratureSpec | None = None
    ) -> complex:
        """Predicted matrix[0, 1] element at time t: the initial coherence
        damped by exp(-Gamma(t)) and rotated by exp(-2i*omega0*t)."""
        if rho0.dim != 2:
            raise ValidationError("dephasing coherence needs a 2x2 state")
        if t < 0:
            raise ValidationError("t must be >= 0")
        c0 = complex(rho0.matrix[0, 1])
        if c0 == 0:
            return 0.0j
        gamma_int = self.decoherence_function(t, quad)
        return c0 * math.exp(-gamma_int) * np.exp(-2j * self.omega0 * t)

    def generator_at(self, t: float, quad: QuadratureSpec | None = None) -> GkslGenerator:
        """Generator of the time-local master equation at time t:
        H = omega0 sigma_z, single Lindblad operator sigma_z, rate
        gamma(t)/2 (see module docstring for the factor of two)."""
        rate = 0.5 * self.dephasing_rate(t, quad)
        if rate < 0:
            warnings.warn(
                f"dephasing rate is negative at t = {t}: the generator is "
                "not GKSL at this instant",
                NegativeRateWarning,
                stacklevel=2,
            )
        return GkslGenerator(
            self.omega0 * SIGMA_Z,
            (SIGMA_Z,),
            np.array([[rate]], dtype=complex),
            validate_psd=rate >= 0,
        )
