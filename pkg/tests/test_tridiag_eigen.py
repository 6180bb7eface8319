import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extremezeros.errors import DomainError, StaleEigenvalueError
from extremezeros.tridiag_eigen import (
    JacobiMatrix,
    batch_extremes,
    eigenvalues,
    eigenvector_via_recurrence,
    extreme_eigenvalues,
    leading_extremes,
    refine_eigenvalue,
    sturm_count,
)


def random_jacobi(rng, m, scale=1.0):
    off = rng.uniform(0.1, 2.0, m - 1) * rng.choice([-1.0, 1.0], m - 1)
    return JacobiMatrix(scale * rng.normal(size=m), scale * off)


def jacobi_strategy(max_size=30):
    entry = st.floats(-10, 10, allow_nan=False)
    coupling = st.floats(0.05, 5).flatmap(
        lambda b: st.sampled_from([b, -b])
    )
    return st.integers(2, max_size).flatmap(
        lambda m: st.tuples(
            st.lists(entry, min_size=m, max_size=m),
            st.lists(coupling, min_size=m - 1, max_size=m - 1),
        )
    ).map(lambda ab: JacobiMatrix(np.array(ab[0]), np.array(ab[1])))


def test_sturm_count_two_by_two():
    # [[2, 1], [1, 2]] has eigenvalues 1 and 3
    M = JacobiMatrix([2.0, 2.0], [1.0])
    assert [sturm_count(M, x) for x in (0.5, 1.5, 2.5, 3.5)] == [0, 1, 1, 2]


def test_sturm_count_at_pivot_zero():
    # shift equal to a_1 makes the first pivot vanish
    M = JacobiMatrix([1.0, 1.0, 1.0], [1.0, 1.0])
    # eigenvalues 1 - sqrt 2, 1, 1 + sqrt 2
    assert sturm_count(M, 1.0) in (1, 2)
    assert sturm_count(M, 1.0 - 1e-9) == 1
    assert sturm_count(M, 1.0 + 1e-9) == 2


def test_two_by_two_closed_form():
    a, c, b = 1.3, -0.4, 0.7
    M = JacobiMatrix([a, c], [b])
    mid, rad = (a + c) / 2, np.hypot((a - c) / 2, b)
    spec = eigenvalues(M, tol=1e-14).eigenvalues
    np.testing.assert_allclose(spec, [mid - rad, mid + rad], atol=1e-13)


def test_one_by_one():
    M = JacobiMatrix([4.5], [])
    assert extreme_eigenvalues(M) == pytest.approx((4.5, 4.5), abs=1e-12)
    np.testing.assert_array_equal(eigenvector_via_recurrence(M, 4.5), [1.0])


def test_matches_dense_solver():
    rng = np.random.default_rng(1)
    for m in (3, 10, 40):
        M = random_jacobi(rng, m, scale=3.0)
        ref = np.linalg.eigvalsh(M.dense())
        res = eigenvalues(M)
        assert res.tolerance <= M.default_tol()
        np.testing.assert_allclose(res.eigenvalues, ref, atol=10 * M.default_tol())


def test_shift_and_scale_equivariance():
    rng = np.random.default_rng(2)
    M = random_jacobi(rng, 12)
    base = eigenvalues(M, tol=1e-13).eigenvalues
    shifted = eigenvalues(M.shifted(2.5), tol=1e-13).eigenvalues
    scaled = eigenvalues(M.scaled(-3.0), tol=1e-13).eigenvalues
    np.testing.assert_allclose(shifted, base + 2.5, atol=1e-11)
    np.testing.assert_allclose(scaled, np.sort(-3.0 * base), atol=1e-11)


def test_rejects_bad_input():
    with pytest.raises(DomainError):
        JacobiMatrix([1.0, 2.0], [1.0, 1.0])
    with pytest.raises(DomainError):
        JacobiMatrix([1.0, np.nan], [1.0])
    with pytest.raises(DomainError):
        JacobiMatrix([], [])
    M = JacobiMatrix([1.0, 2.0], [1.0])
    for tol in (0.0, -1.0, np.inf):
        with pytest.raises(DomainError):
            eigenvalues(M, tol=tol)
    with pytest.raises(DomainError):
        sturm_count(M, np.nan)


def test_matrix_is_read_only():
    M = JacobiMatrix([1.0, 2.0], [1.0])
    with pytest.raises(ValueError):
        M.diag[0] = 5.0


def test_batch_and_leading_agree_with_direct():
    rng = np.random.default_rng(3)
    M = random_jacobi(rng, 25)
    sizes = [2, 7, 25]
    lmin, lmax, emin, emax = leading_extremes(M, sizes)
    for i, s in enumerate(sizes):
        ref = np.linalg.eigvalsh(M.leading(s).dense())
        assert abs(lmin[i] - ref[0]) <= emin[i] + 1e-13
        assert abs(lmax[i] - ref[-1]) <= emax[i] + 1e-13
    diags = np.stack([M.diag, M.diag + 1])
    offs = np.stack([M.offdiag, M.offdiag])
    bmin, bmax, _, _ = batch_extremes(diags, offs, precise=True)
    ref = np.linalg.eigvalsh(M.dense())
    assert bmin[1] - bmin[0] == pytest.approx(1.0, abs=1e-12)
    assert bmin[0] == pytest.approx(ref[0], abs=1e-12)
    assert bmax[0] == pytest.approx(ref[-1], abs=1e-12)


def test_refine_rejects_stale_value():
    M = JacobiMatrix([2.0, 2.0], [1.0])
    assert refine_eigenvalue(M, 1.0 + 1e-13) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(StaleEigenvalueError):
        refine_eigenvalue(M, 2.0, tol=1e-10)


def test_eigenvector_residual_and_dense_agreement():
    rng = np.random.default_rng(4)
    for m in (2, 5, 30):
        M = random_jacobi(rng, m, scale=2.0)
        w, V = np.linalg.eigh(M.dense())
        for j in range(m):
            v = eigenvector_via_recurrence(M, w[j])
            assert np.linalg.norm(M.dense() @ v - w[j] * v) < 1e-11 * max(1, M.norm())
            ref = V[:, j] * np.sign(V[0, j])
            np.testing.assert_allclose(v, ref, atol=1e-10)


def test_eigenvector_agrees_with_inverse_iteration():
    rng = np.random.default_rng(5)
    M = random_jacobi(rng, 20)
    lam = extreme_eigenvalues(M)[1]
    A = M.dense() - (lam + 1e-9) * np.eye(20)
    x = np.ones(20)
    for _ in range(3):
        x = np.linalg.solve(A, x)
        x /= np.linalg.norm(x)
    x *= np.sign(x[0])
    np.testing.assert_allclose(eigenvector_via_recurrence(M, lam), x, atol=1e-9)


def test_eigenvector_tiny_trailing_components():
    # large spread: trailing components of the smallest eigenvector vanish fast
    k = np.arange(1, 61, dtype=float)
    M = JacobiMatrix(2 * k - 1, np.sqrt(k[:-1] ** 2))
    lam = extreme_eigenvalues(M)[0]
    v = eigenvector_via_recurrence(M, lam)
    assert np.linalg.norm(M.dense() @ v - lam * v) < 1e-12 * M.norm()


def test_eigenvector_sign_last_override():
    M = JacobiMatrix([1.0, 2.0, 3.0], [1.0, 1.0])
    lam = extreme_eigenvalues(M)[1]
    v = eigenvector_via_recurrence(M, lam)
    w = eigenvector_via_recurrence(M, lam, sign_last=-1)
    np.testing.assert_allclose(w[:-1], v[:-1])
    assert w[-1] == pytest.approx(-v[-1])


@settings(max_examples=60, deadline=None)
@given(jacobi_strategy())
def test_gershgorin_contains_spectrum(M):
    lo, hi = M.gershgorin()
    spec = eigenvalues(M).eigenvalues
    tol = M.default_tol()
    assert spec[0] >= lo - tol and spec[-1] <= hi + tol


@settings(max_examples=60, deadline=None)
@given(jacobi_strategy())
def test_cauchy_interlacing(M):
    full = eigenvalues(M).eigenvalues
    sub = eigenvalues(M.leading(M.size - 1), tol=M.default_tol()).eigenvalues
    tol = 2 * M.default_tol()
    assert np.all(full[:-1] <= sub + tol)
    assert np.all(sub <= full[1:] + tol)


@settings(max_examples=60, deadline=None)
@given(jacobi_strategy(), st.floats(-30, 30))
def test_sturm_count_matches_spectrum(M, x):
    spec = np.linalg.eigvalsh(M.dense())
    if np.min(np.abs(spec - x)) < 1e-8:
        return
    assert sturm_count(M, x) == int(np.sum(spec < x))


@settings(max_examples=40, deadline=None)
@given(jacobi_strategy(20))
def test_offdiagonal_signs_do_not_change_spectrum(M):
    flipped = JacobiMatrix(M.diag, -M.offdiag)
    np.testing.assert_allclose(
        eigenvalues(M).eigenvalues,
        eigenvalues(flipped).eigenvalues,
        atol=2 * M.default_tol(),
    )
