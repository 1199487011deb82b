import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from conftest import toeplitz_oracle
from linalg.matrix_core import (
    as_matrix,
    get_eigensolver,
    init_eigensolver,
    inv_spd,
    mat_mul,
    random_spd,
    random_symmetric,
    sqrt_psd,
    sym_eig,
)
from linalg.symplectic_core import symplectic_form
from utils.errors import (
    DimensionError,
    NonConvergenceError,
    NotPositiveDefiniteError,
    NotSymmetricError,
)

ORTHO_TOL = 1e-10
RECON_TOL = 1e-8
METHODS = ['jacobi', 'lapack']


def test_as_matrix_rejects_bad_shapes():
    with pytest.raises(DimensionError):
        as_matrix([1.0, 2.0])
    with pytest.raises(DimensionError):
        as_matrix([[]])
    with pytest.raises(DimensionError):
        as_matrix([[1.0, np.nan]])


def test_as_matrix_is_read_only():
    m = as_matrix([[1, 2], [3, 4]])
    assert m.dtype == np.float64
    with pytest.raises(ValueError):
        m[0, 0] = 5.0


def test_mat_mul_examples():
    m = np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]])
    assert np.array_equal(mat_mul(np.eye(3), m), m)

    a = np.array([[4.0, 2.0], [2.0, 2.0]])
    b = np.array([[2.0, 1.0], [1.0, 1.0]])
    assert np.allclose(mat_mul(a, b), [[10.0, 6.0], [6.0, 4.0]])

    j = symplectic_form(2)
    assert np.array_equal(mat_mul(j, j), -np.eye(4))


def test_mat_mul_dimension_mismatch():
    with pytest.raises(DimensionError):
        mat_mul(np.eye(2), np.eye(3))


@pytest.mark.parametrize('method', METHODS)
def test_sym_eig_small_examples(method):
    assert np.allclose(sym_eig(np.eye(4), method).eigenvalues, np.ones(4))
    result = sym_eig(np.array([[2.0, 0.5], [0.5, 2.0]]), method)
    assert np.allclose(result.eigenvalues, [1.5, 2.5], atol=1e-14)


@pytest.mark.parametrize('method', METHODS)
@pytest.mark.parametrize('n', [5, 17, 40])
def test_sym_eig_tridiagonal_toeplitz(method, n):
    column = np.zeros(n)
    column[:2] = [2.0, 0.5]
    values = sym_eig(scipy.linalg.toeplitz(column), method).eigenvalues
    assert np.max(np.abs(values - toeplitz_oracle(n))) <= 1e-10


@pytest.mark.parametrize('method', METHODS)
def test_sym_eig_rejects_non_symmetric(method):
    with pytest.raises(NotSymmetricError):
        sym_eig(np.array([[1.0, 2.0], [0.0, 1.0]]), method)
    with pytest.raises(DimensionError):
        sym_eig(np.ones((2, 3)), method)


def test_jacobi_sweep_limit():
    s = np.array([[2.0, 1.0], [1.0, 3.0]])
    with pytest.raises(NonConvergenceError):
        sym_eig(s, 'jacobi', max_sweeps=0)


def test_auto_method_follows_installed_options():
    init_eigensolver('auto', jacobi_max_order=4, max_sweeps=0)
    assert get_eigensolver().jacobi_max_order == 4
    # order 3 goes to Jacobi, which may not sweep
    with pytest.raises(NonConvergenceError):
        sym_eig(np.array([[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 1.0]]))
    # order 5 goes to LAPACK
    assert sym_eig(np.diag([1.0, 2.0, 3.0, 4.0, 5.0]) + 0.1).eigenvalues.shape == (5,)


def test_init_eigensolver_rejects_unknown_method():
    with pytest.raises(ValueError):
        init_eigensolver('power')


@seed(1)
@settings(max_examples=25, deadline=None)
@given(order=st.integers(1, 50), sample=st.integers(0, 2 ** 32 - 1), method=st.sampled_from(METHODS))
def test_sym_eig_orthogonal_and_reconstructs(order, sample, method):
    s = random_symmetric(order, np.random.default_rng(sample))
    result = sym_eig(s, method)
    q, lam = result.vectors, result.eigenvalues

    assert np.all(np.diff(lam) >= 0)
    assert np.linalg.norm(q.T @ q - np.eye(order)) <= ORTHO_TOL * order
    scale = max(np.linalg.norm(s), 1e-300)
    assert np.linalg.norm(s @ q - q * lam) <= RECON_TOL * scale
    assert np.linalg.norm((q * lam) @ q.T - s) <= RECON_TOL * scale


def test_sqrt_psd_examples():
    assert np.allclose(sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14)
    assert np.allclose(sqrt_psd(np.eye(3)), np.eye(3), atol=1e-14)
    root = sqrt_psd(np.array([[20.0, 12.0], [12.0, 8.0]]))
    assert np.allclose(root, [[4.0, 2.0], [2.0, 2.0]], atol=1e-12)


def test_sqrt_psd_accepts_singular_psd():
    assert np.allclose(sqrt_psd(np.diag([1.0, 0.0])), np.diag([1.0, 0.0]), atol=1e-14)


def test_sqrt_psd_rejects_indefinite():
    with pytest.raises(NotPositiveDefiniteError):
        sqrt_psd(np.diag([1.0, -1.0]))


def test_inv_spd_examples():
    assert np.allclose(inv_spd(np.diag([2.0, 4.0])), np.diag([0.5, 0.25]))
    assert np.allclose(inv_spd(np.eye(3)), np.eye(3))
    assert np.allclose(inv_spd(np.array([[2.0, 1.0], [1.0, 1.0]])), [[1.0, -1.0], [-1.0, 2.0]])


def test_inv_spd_rejects_singular():
    with pytest.raises(NotPositiveDefiniteError):
        inv_spd(np.diag([1.0, 0.0]))


@seed(2)
@settings(max_examples=30, deadline=None)
@given(order=st.integers(1, 20), sample=st.integers(0, 2 ** 32 - 1),
       log_cond=st.floats(0.0, 6.0))
def test_sqrt_and_inverse_on_random_spd(order, sample, log_cond):
    s = random_spd(order, np.random.default_rng(sample), condition=10.0 ** log_cond)
    scale = np.linalg.norm(s)

    root = sqrt_psd(s)
    assert np.allclose(root, root.T)
    assert np.linalg.norm(root @ root - s) <= 1e-10 * scale

    again = inv_spd(inv_spd(s))
    assert np.linalg.norm(again - s) <= 1e-6 * scale


def test_random_spd_condition(rng):
    s = random_spd(12, rng, condition=1e4)
    values = np.linalg.eigvalsh(s)
    assert values[0] == pytest.approx(1.0, rel=1e-8)
    assert values[-1] == pytest.approx(1e4, rel=1e-8)
