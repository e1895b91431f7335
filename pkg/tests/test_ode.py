import math

import numpy as np
import pytest

from decohere.errors import MaxStepsError, StepUnderflowError, ValidationError
from decohere.numcore import OdeSpec, ode_solve


def test_zero_rhs_is_constant():
    v = np.array([1.0, -2.0, 0.5])
    t = np.linspace(0.0, 4.0, 9)
    out = ode_solve(lambda tt, y: np.zeros_like(y), v, t)
    assert out.shape == (9, 3)
    assert np.abs(out - v).max() == 0.0


def test_exponential_decay():
    out = ode_solve(lambda t, y: -y, [1.0], [0.0, 1.0])
    assert abs(out[-1, 0] - math.exp(-1.0)) < 1e-8


def test_complex_rotation_as_real_pair():
    # y' = i y encoded as (re, im): re' = -im, im' = re
    def rhs(t, u):
        return np.array([-u[1], u[0]])

    out = ode_solve(rhs, [1.0, 0.0], [0.0, math.pi])
    z = complex(out[-1, 0], out[-1, 1])
    assert abs(z - (-1.0)) < 1e-8


def test_complex_rotation_native():
    out = ode_solve(lambda t, y: 1j * y, np.array([1.0 + 0j]), [0.0, math.pi])
    assert abs(out[-1, 0] - (-1.0)) < 1e-8


def test_dense_output_at_grid_times():
    t = np.linspace(0.0, 2.0, 21)
    out = ode_solve(lambda tt, y: -y, [1.0], t)
    assert np.abs(out[:, 0] - np.exp(-t)).max() < 1e-8


def test_halved_tolerance_self_consistency():
    t = [0.0, 3.0]
    rhs = lambda tt, y: np.array([y[1], -y[0]])  # noqa: E731
    coarse = OdeSpec(abs_tol=1e-9, rel_tol=1e-9)
    fine = OdeSpec(abs_tol=5e-10, rel_tol=5e-10)
    a = ode_solve(rhs, [1.0, 0.0], t, coarse)
    b = ode_solve(rhs, [1.0, 0.0], t, fine)
    assert np.abs(a - b).max() < 1e-9


def test_single_time_returns_initial_state():
    out = ode_solve(lambda tt, y: -y, [2.0], [1.5])
    assert out.shape == (1, 1)
    assert out[0, 0] == 2.0


def test_grid_must_ascend():
    with pytest.raises(ValidationError):
        ode_solve(lambda tt, y: -y, [1.0], [0.0, 1.0, 0.5])


def test_max_steps_budget():
    spec = OdeSpec(max_steps=10)
    with pytest.raises(MaxStepsError):
        ode_solve(lambda tt, y: -1000.0 * (y - np.cos(100 * tt)), [0.0],
                  [0.0, 50.0], spec)


def test_step_underflow_near_blowup():
    # y' = y^2 from y0 = 1 blows up at t = 1; the required step collapses
    with pytest.raises(StepUnderflowError):
        ode_solve(lambda tt, y: y * y, [1.0], [0.0, 2.0])


def test_spec_invariants():
    with pytest.raises(ValidationError):
        OdeSpec(abs_tol=1e-14)
    with pytest.raises(ValidationError):
        OdeSpec(initial_step=0.0)
    with pytest.raises(ValidationError):
        OdeSpec(max_steps=0)
