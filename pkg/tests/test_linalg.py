import math

import numpy as np
import pytest

from decohere.errors import (
    DimensionMismatchError,
    MatrixOverflowError,
    NotHermitianError,
    ValidationError,
)
from decohere.numcore import (
    as_square_complex,
    hermitian_eigensystem,
    hermitian_eigenvalues,
    matrix_exp,
)

SIGMA_Y = np.array([[0, -1j], [1j, 0]])


def test_eigenvalues_identity():
    assert np.allclose(hermitian_eigenvalues(np.eye(2)), [1.0, 1.0])


def test_eigenvalues_sigma_z():
    w = hermitian_eigenvalues(np.diag([1.0, -1.0]))
    assert np.allclose(w, [-1.0, 1.0])  # ascending


def test_eigenvalues_2x2_hand_computed():
    # trace 5, det 4 -> (5 +- 3)/2 = {1, 4}
    m = np.array([[2.0, 1 + 1j], [1 - 1j, 3.0]])
    w = hermitian_eigenvalues(m)
    assert np.allclose(w, [1.0, 4.0], atol=1e-12)
    assert abs(w.sum() - 5.0) < 1e-12
    assert abs(w.prod() - 4.0) < 1e-12


def test_eigensystem_reconstruction_residual():
    rng = np.random.default_rng(7)
    for d in (2, 4, 8):
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        m = a + a.conj().T
        w, v = hermitian_eigensystem(m)
        residual = np.abs(m - v @ np.diag(w) @ v.conj().T).max()
        assert residual <= 1e-9 * np.abs(m).max()


def test_eigenvalues_unitary_invariance():
    rng = np.random.default_rng(11)
    for d in (2, 3, 8):
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        m = a + a.conj().T
        q, _ = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
        w1 = hermitian_eigenvalues(m)
        w2 = hermitian_eigenvalues(q @ m @ q.conj().T)
        assert np.abs(w1 - w2).max() < 1e-9


def test_eigenvalues_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        hermitian_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_as_square_complex_rejects_nonfinite_and_nonsquare():
    with pytest.raises(ValidationError):
        as_square_complex(np.array([[np.nan, 0], [0, 0]]))
    with pytest.raises(DimensionMismatchError):
        as_square_complex(np.zeros((2, 3)))


def test_matrix_exp_zero_is_identity():
    assert np.allclose(matrix_exp(np.zeros((3, 3))), np.eye(3))


def test_matrix_exp_diagonal():
    out = matrix_exp(np.diag([1.5, -0.3 + 0.2j]))
    assert np.allclose(np.diag(out), [np.exp(1.5), np.exp(-0.3 + 0.2j)], atol=1e-12)


def test_matrix_exp_rotation():
    # exp(i theta sigma_y) = cos(theta) I + i sin(theta) sigma_y
    out = matrix_exp(1j * (math.pi / 2) * SIGMA_Y)
    assert np.abs(out - np.array([[0.0, 1.0], [-1.0, 0.0]])).max() < 1e-10


def test_matrix_exp_inverse_identity():
    rng = np.random.default_rng(3)
    for _ in range(5):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        m *= 10.0 / np.linalg.norm(m, 2)
        check = matrix_exp(m) @ matrix_exp(-m)
        assert np.abs(check - np.eye(4)).max() <= 1e-9


def test_matrix_exp_block_diagonal():
    rng = np.random.default_rng(5)
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    n = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    block = np.zeros((5, 5), dtype=complex)
    block[:2, :2] = m
    block[2:, 2:] = n
    out = matrix_exp(block)
    assert np.abs(out[:2, :2] - matrix_exp(m)).max() < 1e-10
    assert np.abs(out[2:, 2:] - matrix_exp(n)).max() < 1e-10
    assert np.abs(out[:2, 2:]).max() < 1e-10


def test_matrix_exp_overflow_guard():
    with pytest.raises(MatrixOverflowError):
        matrix_exp(np.diag([800.0, 0.0]))
