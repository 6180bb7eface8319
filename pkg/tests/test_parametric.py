import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extremezeros.errors import DegenerateEigenvalueError, DomainError
from extremezeros.orthopoly import laguerre_jacobi, laguerre_zeros
from extremezeros.parametric import (
    IDENTITY,
    SQRT,
    SQUARE,
    TRANSITIONS,
    DeformedJacobi,
    TransitionFunction,
    alpha_derivative_matrix,
    closed_form_inverse_derivative,
    deformed_matrix,
    diagonal_dominance_margins,
    extreme_path,
    hadamard_derivative,
    laguerre_deformation,
    laguerre_scaled_log_derivative,
    path_extremes,
    predicted_product_sign,
    product_slope_functional,
    q_functional,
    q_functional_terms,
    scaled_log_derivative,
    verify_polynomial_identities,
)
from extremezeros.tridiag_eigen import JacobiMatrix, eigenvalues, extreme_eigenvalues


def dense_extremes(D, t):
    w = np.linalg.eigvalsh(deformed_matrix(D, t).dense())
    return w[0], w[-1]


def test_deformed_matrix_entries():
    D = laguerre_deformation(3, 0.0)
    M = deformed_matrix(D, 0.5)
    np.testing.assert_allclose(M.diag, [1, 3, 5, 7])
    np.testing.assert_allclose(M.offdiag, [1, 2, 3 * 0.5])
    assert D.n == 3 and D.corner == 7.0 and D.coupling == pytest.approx(3.0)
    assert deformed_matrix(D, 1.0) == laguerre_jacobi(4, 0.0)


def test_deformation_domain():
    D = laguerre_deformation(5, 0.0)
    with pytest.raises(DomainError):
        deformed_matrix(D, 1.5)
    with pytest.raises(DomainError):
        hadamard_derivative(D, 0.0)
    with pytest.raises(DomainError):
        hadamard_derivative(D, 0.5, which="middle")
    with pytest.raises(DomainError):
        DeformedJacobi(JacobiMatrix([1.0], []))


def test_transition_functions():
    assert set(TRANSITIONS) == {"t", "t2", "sqrt-t"}
    for f in (IDENTITY, SQUARE, SQRT):
        f.check()
        assert f(0.0) == 0.0 and f(1.0) == 1.0
    bad = TransitionFunction("bad", lambda t: t, lambda t: 2.0)
    with pytest.raises(DomainError):
        bad.check()
    wiggle = TransitionFunction(
        "wiggle", lambda t: t + 0.3 * math.sin(8 * t), lambda t: 1 + 2.4 * math.cos(8 * t)
    )
    with pytest.raises(DomainError):
        wiggle.check()


@pytest.mark.parametrize("n,alpha", [(5, 0.0), (12, -0.5), (20, 3.0)])
def test_decoupling_at_zero(n, alpha):
    D = laguerre_deformation(n, alpha)
    spec = eigenvalues(deformed_matrix(D, 0.0)).eigenvalues
    expected = np.sort(np.append(laguerre_zeros(n, alpha), 2 * n + alpha + 1))
    np.testing.assert_allclose(spec, expected, atol=1e-10)
    # the corner sits strictly inside the extremes for n >= 5
    assert spec[0] < D.corner < spec[-1]


def test_negated_transition_gives_same_spectrum():
    D = laguerre_deformation(10, 0.5, IDENTITY)
    Dn = laguerre_deformation(10, 0.5, IDENTITY.negated())
    for t in (0.2, 0.7):
        np.testing.assert_allclose(
            eigenvalues(deformed_matrix(D, t)).eigenvalues,
            eigenvalues(deformed_matrix(Dn, t)).eigenvalues,
            atol=1e-11,
        )
        assert hadamard_derivative(Dn, t, "max") == pytest.approx(
            hadamard_derivative(D, t, "max"), rel=1e-9
        )


def test_path_extremes_against_dense():
    D = laguerre_deformation(15, 1.0, SQRT)
    ts = np.linspace(0, 1, 7)
    lmin, lmax, emin, emax = path_extremes(D, ts)
    for i, t in enumerate(ts):
        a, b = dense_extremes(D, t)
        assert abs(lmin[i] - a) <= emin[i] + 1e-12
        assert abs(lmax[i] - b) <= emax[i] + 1e-12


@pytest.mark.parametrize("f", [IDENTITY, SQUARE, SQRT])
def test_hadamard_matches_finite_difference(f):
    D = laguerre_deformation(20, 0.5, f)
    h = 1e-6
    for t in (0.1, 0.45, 0.9):
        for which, k in (("min", 0), ("max", 1)):
            up = path_extremes(D, [t + h], precise=True)[k][0]
            dn = path_extremes(D, [t - h], precise=True)[k][0]
            fd = (up - dn) / (2 * h)
            # the difference quotient carries ~1e-10 absolute rounding noise
            assert hadamard_derivative(D, t, which) == pytest.approx(fd, rel=1e-6, abs=1e-9)


def test_sign_laws_for_identity():
    D = laguerre_deformation(10, 0.0)
    for t in np.linspace(0.05, 0.95, 10):
        assert hadamard_derivative(D, t, "min") < 0
        assert hadamard_derivative(D, t, "max") > 0


def test_degenerate_extreme_detected():
    # decoupled scalar -1 and the block [[0, t b], [t b, 0]] with t b = 1:
    # the smallest eigenvalue -1 is double at t = 0.5
    D = DeformedJacobi(JacobiMatrix([-1.0, 0.0, 0.0], [0.0, 2.0]), IDENTITY)
    with pytest.raises(DegenerateEigenvalueError):
        hadamard_derivative(D, 0.5, "min")


@pytest.mark.parametrize("f", [IDENTITY, SQUARE, SQRT])
def test_closed_form_matches_hadamard(f):
    D = laguerre_deformation(10, 0.3, f)
    for t in (0.2, 0.6, 0.95):
        for which in ("min", "max"):
            M = deformed_matrix(D, t)
            lam = extreme_eigenvalues(M, 1e-15)[0 if which == "min" else 1]
            ratio = lam / hadamard_derivative(D, t, which)
            assert closed_form_inverse_derivative(D, t, which) == pytest.approx(ratio, rel=1e-7)


def test_closed_form_finite_at_full_coupling():
    # f(1) = 1: the (f^2 - 1) P product stays finite
    D = laguerre_deformation(8, 0.0)
    t = 1.0 - 1e-7
    lam = extreme_eigenvalues(deformed_matrix(D, t), 1e-15)[0]
    ratio = lam / hadamard_derivative(D, t, "min")
    assert closed_form_inverse_derivative(D, t, "min") == pytest.approx(ratio, rel=1e-5)


def test_laguerre_specialisation_matches_generic():
    for n, alpha, t in ((6, 0.0, 0.3), (15, -0.5, 0.6), (25, 4.0, 0.8)):
        D = laguerre_deformation(n, alpha)
        M = deformed_matrix(D, t)
        for lam in extreme_eigenvalues(M, 1e-15):
            generic = scaled_log_derivative(D, lam)
            special = laguerre_scaled_log_derivative(n, alpha, lam, t)
            assert special == pytest.approx(generic, rel=1e-8)


def test_q_closed_form_matches_terms():
    for n, alpha, t in ((5, 0.0, 0.4), (12, 1.0, 0.3), (30, -0.5, 0.7)):
        D = laguerre_deformation(n, alpha)
        assert q_functional(D, t) == pytest.approx(q_functional_terms(D, t), rel=1e-7)


def slope_fd(D, t, h=1e-6):
    up = path_extremes(D, [t + h], precise=True)
    dn = path_extremes(D, [t - h], precise=True)
    return (up[0][0] * up[1][0] - dn[0][0] * dn[1][0]) / (2 * h)


@pytest.mark.parametrize(
    "n,alpha,t", [(5, 0.0, 0.3), (10, 0.5, 0.9), (20, -0.9, 0.5), (8, 10.0, 0.7)]
)
def test_product_slope_functional_decides_sign(n, alpha, t):
    D = laguerre_deformation(n, alpha)
    value = product_slope_functional(D, t)
    assert predicted_product_sign(D, t, value) == np.sign(slope_fd(D, t))


def test_product_slope_closed_form():
    D = laguerre_deformation(10, 0.5)
    t = 0.6
    l1, ln = extreme_eigenvalues(deformed_matrix(D, t), 1e-15)
    d1, dn = hadamard_derivative(D, t, "min"), hadamard_derivative(D, t, "max")
    S = product_slope_functional(D, t)
    closed = d1 * dn * (t * t - 1) / (2 * t) * S
    assert closed == pytest.approx(d1 * ln + l1 * dn, rel=1e-7)


def test_q_functional_can_disagree_with_product_slope():
    # a point where Q is positive while the product is decreasing
    D = laguerre_deformation(5, -0.9)
    t = 0.8
    assert q_functional(D, t) > 0
    assert slope_fd(D, t) < 0
    assert product_slope_functional(D, t) < 0


def test_identity_residuals_small():
    rep = verify_polynomial_identities(laguerre_deformation(10, 0.0), 0.3)
    assert set(rep.residuals) >= {
        "relation", "combination", "norm", "rel1", "rel2", "P1", "P2"
    }
    assert rep.ok(1e-8)
    assert rep.max_residual < 1e-12


def test_identities_need_laguerre_base():
    D = DeformedJacobi(JacobiMatrix([1.0, 2.0, 3.0], [1.0, 1.0]))
    with pytest.raises(DomainError):
        verify_polynomial_identities(D, 0.5)


def test_extreme_path_samples():
    D = laguerre_deformation(20, 0.5)
    samples = extreme_path(D, np.linspace(0, 1, 11))
    assert len(samples) == 11
    assert math.isnan(samples[0].dlambda_min_closed)
    assert math.isnan(samples[-1].dlambda_max_fd)
    for s in samples[1:-1]:
        assert s.reliable
        assert s.dlambda_min_closed == pytest.approx(s.dlambda_min_fd, rel=1e-5)
        assert s.dlambda_max_closed == pytest.approx(s.dlambda_max_fd, rel=1e-5)
        assert s.product == pytest.approx(s.lambda_min * s.lambda_max)
    with pytest.raises(DomainError):
        extreme_path(D, [0.5, 0.1])


def test_alpha_derivative_matrix_entries():
    M = alpha_derivative_matrix(3, 0.5, 0.4)
    np.testing.assert_allclose(M.diag, [1, 1, 1, 1])
    k = np.array([1.0, 2.0, 3.0])
    expected = k / (2 * np.sqrt(k * (k + 0.5)))
    expected[-1] *= 0.4
    np.testing.assert_allclose(M.offdiag, expected)


def test_alpha_derivative_matches_finite_difference():
    n, alpha, t, h = 8, 0.7, 0.6, 1e-6
    up = deformed_matrix(laguerre_deformation(n, alpha + h), t).dense()
    dn = deformed_matrix(laguerre_deformation(n, alpha - h), t).dense()
    np.testing.assert_allclose(
        (up - dn) / (2 * h), alpha_derivative_matrix(n, alpha, t).dense(), atol=1e-8
    )


def test_alpha_derivative_dominance_and_definiteness():
    # alpha > 0: strictly diagonally dominant, hence positive definite
    M = alpha_derivative_matrix(20, 0.5, 1.0)
    assert np.all(diagonal_dominance_margins(M) > 0)
    # alpha = 0: interior rows sum to exactly 1, so dominance is only weak
    M0 = alpha_derivative_matrix(20, 0.0, 1.0)
    assert np.min(diagonal_dominance_margins(M0)) == pytest.approx(0.0, abs=1e-15)
    assert extreme_eigenvalues(M0)[0] > 0
    # alpha < 0: not positive definite
    assert extreme_eigenvalues(alpha_derivative_matrix(10, -0.9, 1.0))[0] < -0.7


@settings(max_examples=30, deadline=None)
@given(st.integers(5, 40), st.floats(-0.95, 50), st.floats(0.05, 1.0))
def test_extremes_increase_with_alpha(n, alpha, t):
    a = extreme_eigenvalues(deformed_matrix(laguerre_deformation(n, alpha), t))
    b = extreme_eigenvalues(deformed_matrix(laguerre_deformation(n, alpha + 0.1), t))
    assert b[0] > a[0] and b[1] > a[1]


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 30), st.floats(-0.95, 20), st.floats(0.01, 1.0))
def test_interlacing_along_path(n, alpha, t):
    D = laguerre_deformation(n, alpha)
    full = eigenvalues(deformed_matrix(D, t), 1e-13 * (4 * n + 10)).eigenvalues
    sub = laguerre_zeros(n, alpha)
    assert np.all(full[:-1] < sub) and np.all(sub < full[1:])


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 30), st.floats(-0.95, 20), st.floats(0.05, 0.95), st.floats(0.01, 0.04))
def test_extremes_monotone_in_t(n, alpha, t, dt):
    D = laguerre_deformation(n, alpha)
    lmin, lmax, _, _ = path_extremes(D, [t, t + dt], precise=True)
    assert lmin[1] < lmin[0] and lmax[1] > lmax[0]
