import numpy as np
import pytest

from hopsign.eigen import (DenseMatrix, SolverFailure, eigvals, eigvals_batch,
                           eigvals_stack, oracle_eigvals)
from hopsign.metrics import matching_distance

seed = 9
nruns = 40

np.random.seed(seed)
random_sizes = [int(np.random.randint(1, 31)) for _ in range(nruns)]


def random_matrix(n):
    return np.random.normal(size=(n, n)) + 1j * np.random.normal(size=(n, n))


# ---------------------------------------------------------------- basics

def test_dense_matrix_validation():
    with pytest.raises(ValueError):
        DenseMatrix(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        DenseMatrix(np.ones(4))
    with pytest.raises(ValueError):
        DenseMatrix([[np.nan, 0], [0, 1]])
    m = DenseMatrix([[1, 2], [3, 4]])
    assert m.n == 2 and m.entries.dtype == complex


def test_eigvals_stack_validation():
    with pytest.raises(ValueError):
        eigvals_stack(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        eigvals_stack(np.zeros((2, 2, 3)))


def test_solver_failure_carries_context():
    e = SolverFailure(4, 120)
    assert e.index == 4 and e.sweeps == 120
    assert "matrix 4" in str(e)


def test_small_exact_cases():
    assert eigvals([[3.5]]) == [3.5 + 0j]
    w = eigvals([[2, 1], [0, 2]])  # already deflated Jordan block
    assert w == [2 + 0j, 2 + 0j]
    w = eigvals([[0, 1], [1, 0]])
    assert w[0] == pytest.approx(-1) and w[1] == pytest.approx(1)


def test_circulant_ring():
    # all-ones ring: spectrum {2, -1, -1}
    a = np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]], dtype=complex)
    w = np.array(eigvals(a))
    assert matching_distance(w, np.array([-1.0, -1.0, 2.0])) < 1e-9


def test_companion_of_unit_roots():
    # companion matrix of z^8 - 1
    n = 8
    a = np.zeros((n, n), dtype=complex)
    a[np.arange(1, n), np.arange(n - 1)] = 1.0
    a[0, n - 1] = 1.0
    w = np.array(eigvals(a))
    roots = np.exp(2j * np.pi * np.arange(n) / n)
    assert matching_distance(w, roots) < 1e-9


@pytest.mark.parametrize("n", random_sizes)
def test_random_matrices_match_lapack(n):
    a = random_matrix(n)
    mine = np.array(eigvals(a))
    ref = np.linalg.eigvals(a)
    assert matching_distance(mine, ref) < 1e-8 * max(1.0, np.abs(ref).max())
    assert np.all(np.diff(mine.real) >= 0)  # sorted by (real, imag)


def test_output_sorted_with_imag_tiebreak():
    w = np.array(eigvals(np.diag([1.0 + 1j, 1.0 - 1j, 0.5])))
    assert w[0] == 0.5
    assert w[1].imag < w[2].imag


def test_similarity_invariance():
    rng = np.random.default_rng(2)
    a = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
    d = rng.uniform(0.5, 2.0, size=12)
    b = (d[:, None] * a) / d[None, :]
    assert matching_distance(np.array(eigvals(a)), np.array(eigvals(b))) < 1e-8


def test_trace_and_det_consistency():
    rng = np.random.default_rng(8)
    for n in (2, 4, 7):
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        w = np.array(eigvals(a))
        assert w.sum() == pytest.approx(np.trace(a), abs=1e-9)
        assert np.prod(w) == pytest.approx(np.linalg.det(a), rel=1e-8)


def test_wide_magnitude_spread_is_balanced():
    a = np.array([[1e8, 1.0], [1.0, 1e-8]], dtype=complex)
    w = np.array(eigvals(a))
    ref = np.linalg.eigvals(a)
    assert matching_distance(w, ref) < 1e-6


def test_batch_matches_singles_and_preserves_order():
    rng = np.random.default_rng(3)
    mats = [rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            for n in (4, 7, 4, 2, 7)]
    batch = eigvals_batch(mats)
    for m, w in zip(mats, batch):
        assert len(w) == m.shape[0]
        assert matching_distance(np.array(w), np.array(eigvals(m))) < 1e-10


def test_stack_matches_singles():
    rng = np.random.default_rng(6)
    stack = rng.normal(size=(5, 6, 6)) + 1j * rng.normal(size=(5, 6, 6))
    w = eigvals_stack(stack)
    assert w.shape == (5, 6)
    for k in range(5):
        assert matching_distance(w[k], np.array(eigvals(stack[k]))) < 1e-10


def test_nilpotent_accuracy_is_limited():
    # triple defective eigenvalue 0: any backward-stable method scatters the
    # roots at roughly eps^(1/3); only a loose bound is meaningful here
    a = np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=complex)
    w = np.abs(eigvals(a))
    assert max(w) < 1e-3


# ---------------------------------------------------------------- oracle

def test_oracle_matches_lapack_small():
    rng = np.random.default_rng(14)
    for n in (1, 2, 3, 5, 9, 12, 16):
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        w = np.array(oracle_eigvals(a))
        ref = np.linalg.eigvals(a)
        assert matching_distance(w, ref) < 1e-7 * max(1.0, np.abs(ref).max())


def test_oracle_merges_multiple_roots():
    a = np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]], dtype=complex)
    w = np.array(oracle_eigvals(a))
    assert matching_distance(w, np.array([-1.0, -1.0, 2.0])) < 1e-8
    assert w[0] == w[1]  # cluster mean repeated with multiplicity


def test_oracle_size_limit():
    with pytest.raises(ValueError):
        oracle_eigvals(np.eye(17))


def test_oracle_agrees_with_main_solver_on_sign_matrices():
    rng = np.random.default_rng(21)
    for _ in range(20):
        n = int(rng.integers(4, 11))
        a = np.zeros((n, n), dtype=complex)
        idx = np.arange(n - 1)
        a[idx, idx + 1] = 1.0
        a[idx + 1, idx] = np.where(rng.random(n - 1) < 0.5, 1.0, -1.0)
        a[0, n - 1] = np.exp(2j * np.pi * rng.random())
        a[n - 1, 0] = 1.0 / a[0, n - 1]
        d = matching_distance(np.array(eigvals(a)), np.array(oracle_eigvals(a)))
        assert d < 1e-7
