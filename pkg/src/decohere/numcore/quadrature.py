"""Adaptive quadrature for damped-oscillatory integrands.

Semi-infinite integrals are truncated at ``tail_cutoff_multiplier`` times a
caller-supplied intrinsic scale (all spectral integrands in scope decay
exponentially beyond their cutoff), then handed to adaptive Gauss-Kronrod
bisection.  Integrands carrying a trigonometric factor sin/cos(omega*t)
have two strategies once the truncated interval spans many oscillation
periods: :func:`integrate_adaptive` pre-subdivides at integer multiples of
pi/t, while :func:`integrate_oscillatory` hands the trigonometric weight
to an adaptive Clenshaw-Curtis rule, which costs far fewer evaluations at
large t and is what the spectral-integral callers use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import scipy.integrate

from ..errors import (
    MaxSubdivisionsError,
    NonFiniteIntegrandError,
    QuadratureError,
    ValidationError,
)

# A trigonometric factor is treated as oscillatory once t * interval length
# exceeds this (public so callers can mirror the branch).
OSC_THRESHOLD = 20.0


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerance and budget knobs for the quadrature routines."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 2048
    tail_cutoff_multiplier: float = 40.0

    def __post_init__(self):
        if not (self.abs_tol >= 1e-14):
            raise ValidationError("abs_tol must be >= 1e-14")
        if not (self.rel_tol >= 1e-14):
            raise ValidationError("rel_tol must be >= 1e-14")
        if not (isinstance(self.max_subdivisions, int) and self.max_subdivisions >= 1):
            raise ValidationError("max_subdivisions must be a positive integer")
        if not (self.tail_cutoff_multiplier >= 10):
            raise ValidationError("tail_cutoff_multiplier must be >= 10")


DEFAULT_QUADRATURE = QuadratureSpec()


def _checked(f: Callable[[float], float]) -> Callable[[float], float]:
    def wrapped(x: float) -> float:
        y = f(x)
        if not math.isfinite(y):
            raise NonFiniteIntegrandError(f"integrand returned {y!r} at x = {x!r}")
        return y

    return wrapped


def _invoke_quad(f, a, b, spec, *, points=None, weight=None, wvar=None):
    kwargs = {
        "limit": spec.max_subdivisions,
        "epsabs": spec.abs_tol,
        "epsrel": spec.rel_tol,
        "full_output": True,
    }
    if points:
        kwargs["points"] = points
    if weight is not None:
        kwargs["weight"] = weight
        kwargs["wvar"] = wvar
        kwargs["maxp1"] = 100
    try:
        result = scipy.integrate.quad(_checked(f), a, b, **kwargs)
    except NonFiniteIntegrandError:
        raise
    except Exception as exc:  # pragma: no cover - defensive
        raise QuadratureError(f"quadrature failed: {exc}") from exc
    value, err = result[0], result[1]
    if len(result) > 3:  # QUADPACK warning message appended
        message = result[3]
        if "subdivisions" in message or "cycles" in message:
            raise MaxSubdivisionsError(message.strip())
        raise QuadratureError(message.strip())
    return float(value), float(err)


def _truncate(a: float, b: float, spec: QuadratureSpec, scale: float | None) -> float:
    if not math.isfinite(a):
        raise ValidationError("lower limit must be finite")
    if math.isinf(b):
        if scale is None or scale <= 0:
            raise ValidationError(
                "semi-infinite integration requires a positive intrinsic scale"
            )
        b = a + spec.tail_cutoff_multiplier * scale
    if b < a:
        raise ValidationError("integration limits must be ascending")
    return b


def integrate_adaptive(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
    *,
    scale: float | None = None,
    osc_time: float | None = None,
    breakpoints: Sequence[float] = (),
) -> tuple[float, float]:
    """Integrate f over (a, b), b possibly +inf, to (value, error_estimate).

    ``scale`` is the intrinsic frequency scale used to truncate b = +inf;
    ``osc_time`` is the t of a sin/cos(omega*t) factor, used to place
    subdivision points at multiples of pi/t; extra ``breakpoints`` are
    merged in.
    """
    spec = spec or DEFAULT_QUADRATURE
    b = _truncate(a, b, spec, scale)
    if b == a:
        return 0.0, 0.0

    pts = [p for p in breakpoints if a < p < b]
    if osc_time is not None and osc_time > 0 and osc_time * (b - a) > OSC_THRESHOLD:
        step = math.pi / osc_time
        n = int((b - a) / step)
        # Cap to the subdivision budget: the head of the interval dominates
        # for the exponentially damped integrands in scope.
        n = min(n, max(spec.max_subdivisions - 64, 0))
        pts.extend(a + k * step for k in range(1, n + 1) if a + k * step < b)
    pts = sorted(set(pts))

    return _invoke_quad(f, a, b, spec, points=pts or None)


def integrate_oscillatory(
    envelope: Callable[[float], float],
    kind: str,
    t: float,
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
    *,
    scale: float | None = None,
    head: Callable[[float], float] | None = None,
) -> tuple[float, float]:
    """Integrate envelope(w) * sin(t w) (kind="sin") or * cos(t w)
    (kind="cos") over (a, b), b possibly +inf.

    For slow oscillation the product is integrated directly.  Otherwise a
    weighted Clenshaw-Curtis rule handles the bulk; the first stretch
    [a, a + 1/t] is integrated as the plain product via ``head``, which
    callers supply when envelope alone is singular at ``a`` (the weighted
    rule evaluates at interval endpoints, the plain rule does not).
    """
    spec = spec or DEFAULT_QUADRATURE
    if kind not in ("sin", "cos"):
        raise ValidationError('kind must be "sin" or "cos"')
    if not (t > 0):
        raise ValidationError("oscillation parameter t must be > 0")
    b = _truncate(a, b, spec, scale)
    if b == a:
        return 0.0, 0.0

    trig = math.sin if kind == "sin" else math.cos
    if head is None:
        head = lambda w: envelope(w) * trig(t * w)  # noqa: E731

    if t * (b - a) <= OSC_THRESHOLD:
        return integrate_adaptive(head, a, b, spec)

    split = a + 1.0 / t
    head_value, head_err = _invoke_quad(head, a, split, spec)
    bulk_value, bulk_err = _invoke_quad(envelope, split, b, spec, weight=kind, wvar=t)
    return head_value + bulk_value, head_err + bulk_err
