"""Jacobi matrices whose last off-diagonal entry is scaled by ``f(t)``.

For a base matrix of size n+1 with last coupling ``b_n`` the deformed matrix
``J(t)`` has ``b_n f(t)`` in position (n, n+1). At ``f = 1`` it is the base
matrix, at ``f = 0`` it splits into the leading n-by-n block and the scalar
``a_{n+1}``. This module tracks the extreme eigenvalues along ``t``, their
derivatives, and the sign functionals that decide whether the product of the
extremes increases.

Closed forms below are written with the orthonormal polynomials ``p_k`` of
the *base* matrix and ``P(x) = x (log P_{n+1} - log P_{n-1})'(x)``, the
scaled log-derivative of the ratio of characteristic polynomials of the base
matrix and of its (n-1)-by-(n-1) leading block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DegenerateEigenvalueError, DomainError, SingularRatioError
from .orthopoly import (
    laguerre_jacobi,
    laguerre_orthonormal_factor,
    laguerre_values,
    orthonormal_sequence,
)
from .tridiag_eigen import (
    JacobiMatrix,
    batch_extremes,
    eigenvector_via_recurrence,
    extreme_eigenvalues,
    refine_eigenvalue,
    sturm_count,
)

F_FLOOR = 1e-8
DEGENERACY_FACTOR = 1e3
FD_STEP = 1e-6


@dataclass(frozen=True)
class TransitionFunction:
    """Monotone scalar ``f`` on ``[lo, hi]`` with its derivative."""

    name: str
    f: Callable[[float], float]
    df: Callable[[float], float]
    lo: float = 0.0
    hi: float = 1.0

    def __call__(self, t):
        return self.f(t)

    def deriv(self, t):
        return self.df(t)

    def contains(self, t) -> bool:
        return self.lo <= t <= self.hi

    def negated(self) -> "TransitionFunction":
        f, df = self.f, self.df
        return TransitionFunction(
            f"-{self.name}", lambda t: -f(t), lambda t: -df(t), self.lo, self.hi
        )

    def check(self, samples: int = 33, rel: float = 1e-6) -> None:
        """Sample the contract: derivative consistent with finite differences,
        ``f`` never 0 or 1 inside the interval, ``f'`` of constant sign."""
        ts = np.linspace(self.lo, self.hi, samples + 2)[1:-1]
        h = 1e-6 * (self.hi - self.lo)
        signs = set()
        for t in ts:
            ft = self.f(t)
            if ft == 0.0 or ft == 1.0:
                raise DomainError(f"{self.name}: f({t}) = {ft} inside the interval")
            d = self.df(t)
            fd = (self.f(t + h) - self.f(t - h)) / (2 * h)
            if abs(fd - d) > rel * max(abs(d), 1.0):
                raise DomainError(
                    f"{self.name}: derivative {d} disagrees with finite difference {fd}"
                )
            if d != 0:
                signs.add(d > 0)
        if len(signs) > 1:
            raise DomainError(f"{self.name} is not monotone on its interval")


IDENTITY = TransitionFunction("t", lambda t: t, lambda t: 1.0)
SQUARE = TransitionFunction("t2", lambda t: t * t, lambda t: 2.0 * t)
SQRT = TransitionFunction(
    "sqrt-t", lambda t: math.sqrt(t), lambda t: 0.5 / math.sqrt(t)
)
TRANSITIONS = {tf.name: tf for tf in (IDENTITY, SQUARE, SQRT)}


@dataclass(frozen=True)
class DeformedJacobi:
    base: JacobiMatrix
    f: TransitionFunction = IDENTITY

    def __post_init__(self):
        if self.base.size < 2:
            raise DomainError("deformation needs a base matrix of size >= 2")

    @property
    def n(self) -> int:
        """Index of the deformed coupling; the matrix has size n + 1."""
        return self.base.size - 1

    @property
    def coupling(self) -> float:
        """``b_n``, the undeformed last off-diagonal entry."""
        return float(self.base.offdiag[-1])

    @property
    def corner(self) -> float:
        """``a_{n+1}``, the last diagonal entry."""
        return float(self.base.diag[-1])


def laguerre_deformation(
    n: int, alpha: float, f: TransitionFunction = IDENTITY
) -> DeformedJacobi:
    """Deformation of the (n+1)-by-(n+1) Laguerre matrix."""
    return DeformedJacobi(laguerre_jacobi(n + 1, alpha), f)


@dataclass(frozen=True)
class SpectrumPathSample:
    t: float
    lambda_min: float
    lambda_max: float
    product: float
    dlambda_min_closed: float = math.nan
    dlambda_min_fd: float = math.nan
    dlambda_max_closed: float = math.nan
    dlambda_max_fd: float = math.nan
    product_err: float = 0.0
    reliable: bool = True


def _check_t(D, t):
    if not D.f.contains(t):
        raise DomainError(f"t={t} outside [{D.f.lo}, {D.f.hi}]")


def _check_interior(D, t):
    if not D.f.lo < t < D.f.hi:
        raise DomainError(
            f"derivatives need t strictly inside ({D.f.lo}, {D.f.hi}), got {t}"
        )
    if abs(D.f(t)) < F_FLOOR:
        raise DomainError(f"|f({t})| below {F_FLOOR}; the coupling vanishes")


def deformed_matrix(D: DeformedJacobi, t: float) -> JacobiMatrix:
    _check_t(D, t)
    off = np.array(D.base.offdiag)
    off[-1] = D.coupling * D.f(t)
    return JacobiMatrix(D.base.diag, off)


def _offdiags(D, ts):
    off = np.tile(D.base.offdiag, (len(ts), 1))
    off[:, -1] = D.coupling * np.array([D.f(t) for t in ts], dtype=float)
    return off


def path_extremes(D: DeformedJacobi, ts, tol=None, precise=False):
    """Extreme eigenvalues of ``J(t)`` for every t in ``ts`` (one batch).

    With ``precise=True`` the bisection runs to working precision, as needed
    for finite differences. Returns ``(lmin, lmax, err_min, err_max)``.
    """
    ts = np.asarray(ts, dtype=float).reshape(-1)
    for t in ts:
        _check_t(D, t)
    diags = np.tile(D.base.diag, (ts.size, 1))
    return batch_extremes(diags, _offdiags(D, ts), tol, precise=precise)


def _extreme(D, t, which, tol):
    if which not in ("min", "max"):
        raise DomainError(f"which must be 'min' or 'max', got {which!r}")
    M = deformed_matrix(D, t)
    tol = M.default_tol() if tol is None else tol
    lmin, lmax = extreme_eigenvalues(M, tol)
    return M, (lmin if which == "min" else lmax), tol


def _guard_simple(M, lam, which, tol):
    gap = DEGENERACY_FACTOR * tol
    if which == "min":
        clash = sturm_count(M, lam + gap) > 1
    else:
        clash = M.size - sturm_count(M, lam - gap) > 1
    if clash:
        raise DegenerateEigenvalueError(
            f"extreme eigenvalue {lam} has a neighbour within {gap:.3g}"
        )


def hadamard_derivative(
    D: DeformedJacobi, t: float, which: str = "min", tol: float | None = None
) -> float:
    """``d lambda / dt = v^T J'(t) v = 2 b_n f'(t) v_n v_{n+1}`` for the
    smallest (``which="min"``) or largest extreme eigenvalue."""
    _check_interior(D, t)
    M, lam, tol = _extreme(D, t, which, tol)
    _guard_simple(M, lam, which, tol)
    v = eigenvector_via_recurrence(M, lam, sign_last=np.sign(D.f(t)), tol=tol)
    return 2.0 * D.coupling * D.f.deriv(t) * v[-2] * v[-1]


def scaled_log_derivative(D: DeformedJacobi, x: float) -> float:
    """``P(x) = x P'_{n+1}(x)/P_{n+1}(x) - x P'_{n-1}(x)/P_{n-1}(x)`` for the
    base matrix."""
    seq = orthonormal_sequence(D.base, x, derivatives=True)
    n = D.n
    return x * seq.char_deriv / seq.char - x * seq.derivs[n - 1] / seq.values[n - 1]


def _ratio_terms(D, lam, tol):
    if abs(lam - D.corner) <= 10.0 * tol:
        raise SingularRatioError(
            f"eigenvalue {lam} coincides with the corner entry {D.corner}"
        )
    return orthonormal_sequence(D.base, lam, derivatives=True)


def closed_form_inverse_derivative(
    D: DeformedJacobi, t: float, which: str = "min", tol: float | None = None
) -> float:
    """``lambda / lambda'`` in closed form,

        (f^2 - 1) / (2 f f') * P(lambda),

    evaluated as ``[x q'(x) / (b_n p_{n-1}(x)) - (f^2 - 1) x p'_{n-1}/p_{n-1}]
    / (2 f f')`` with ``q = b_{n+1} p_{n+1}``. The identity
    ``q(lambda) = (f^2 - 1) b_n p_{n-1}(lambda)`` removes the pole of P at
    ``f^2 = 1``, so the value stays finite there.
    """
    _check_interior(D, t)
    M, lam, tol = _extreme(D, t, which, tol)
    _guard_simple(M, lam, which, tol)
    lam = refine_eigenvalue(M, lam, tol)
    seq = _ratio_terms(D, lam, tol)
    n = D.n
    ft, dft = D.f(t), D.f.deriv(t)
    pm1, dpm1 = seq.values[n - 1], seq.derivs[n - 1]
    bracket = lam * seq.char_deriv / (D.coupling * pm1) - (ft * ft - 1.0) * lam * dpm1 / pm1
    return bracket / (2.0 * ft * dft)


def laguerre_scaled_log_derivative(
    n: int, alpha: float, lam: float, f_value: float
) -> float:
    """Laguerre specialisation of ``P`` at an extreme eigenvalue of ``J(t)``:
    ``a - lam + (a + b_n^2 f^2) f^2 / ((f^2 - 1)(lam - a))`` with
    ``a = a_{n+1}``."""
    a = 2 * n + alpha + 1
    bn2 = n * (n + alpha)
    f2 = f_value * f_value
    return a - lam + (a + bn2 * f2) * f2 / ((f2 - 1.0) * (lam - a))


def _q_inputs(D, t, tol):
    _check_interior(D, t)
    M = deformed_matrix(D, t)
    tol = M.default_tol() if tol is None else tol
    l1, ln = extreme_eigenvalues(M, tol)
    a = D.corner
    for lam in (l1, ln):
        if abs(lam - a) <= 10.0 * tol:
            raise SingularRatioError(
                f"eigenvalue {lam} coincides with the corner entry {a}"
            )
    f2 = D.f(t) ** 2
    if abs(1.0 - f2) <= F_FLOOR:
        raise SingularRatioError("f(t)^2 = 1: the functional has a pole")
    return l1, ln, a, f2, tol


def q_functional(D: DeformedJacobi, t: float, tol: float | None = None) -> float:
    """Closed form of the sign functional for a Laguerre base,

        (2a - l1 - ln) (1 - f^4/(1 - f^2) (a + b_n^2) / ((a - l1)(ln - a))) + 2 f^2,

    with ``a = a_{n+1}``, ``l1``/``ln`` the extremes of ``J(t)``. Equals
    :func:`q_functional_terms` when the base is a Laguerre matrix.
    """
    l1, ln, a, f2, _ = _q_inputs(D, t, tol)
    bn2 = D.coupling**2
    ratio = f2 * f2 / (1.0 - f2) * (a + bn2) / ((a - l1) * (ln - a))
    return (2 * a - l1 - ln) * (1.0 - ratio) + 2.0 * f2


def q_functional_terms(D: DeformedJacobi, t: float, tol: float | None = None) -> float:
    """``P(l1) + P(ln) + f^2 (l1/(l1 - a) + ln/(ln - a))`` from the generic
    ``P`` of the base matrix."""
    l1, ln, a, f2, _ = _q_inputs(D, t, tol)
    return (
        scaled_log_derivative(D, l1)
        + scaled_log_derivative(D, ln)
        + f2 * (l1 / (l1 - a) + ln / (ln - a))
    )


def product_slope_functional(
    D: DeformedJacobi, t: float, tol: float | None = None
) -> float:
    """``P(l1) + P(ln)``; the derivative of ``l1 * ln`` in t equals
    ``l1' ln' (f^2 - 1) / (2 f f') * (P(l1) + P(ln))``, so this decides the
    sign of the slope of the product."""
    l1, ln, _, _, _ = _q_inputs(D, t, tol)
    return scaled_log_derivative(D, l1) + scaled_log_derivative(D, ln)


def predicted_product_sign(D: DeformedJacobi, t: float, value: float) -> int:
    """Sign of ``prod(b) - prod(a)`` implied by a functional value sampled at
    an interior point: ``-sgn(f f') sgn(f^2 - 1) sgn(value)``."""
    ft, dft = D.f(t), D.f.deriv(t)
    return int(-np.sign(ft * dft) * np.sign(ft * ft - 1.0) * np.sign(value))


def extreme_path(
    D: DeformedJacobi,
    t_grid,
    tol: float | None = None,
    h: float = FD_STEP,
    derivatives: bool = True,
    precise: bool = False,
) -> list[SpectrumPathSample]:
    """Extremes and their product along ``t_grid``; at interior points also
    the Hadamard derivative and a centred finite difference of step ``h``."""
    ts = np.asarray(t_grid, dtype=float).reshape(-1)
    if ts.size > 1 and np.any(np.diff(ts) < 0):
        raise DomainError("t_grid must be sorted")
    lmin, lmax, hmin, hmax = path_extremes(D, ts, tol, precise)
    prod = lmin * lmax
    err = np.abs(lmax) * hmin + np.abs(lmin) * hmax + hmin * hmax

    fd_min = np.full(ts.size, math.nan)
    fd_max = np.full(ts.size, math.nan)
    inner = (ts - h > D.f.lo) & (ts + h < D.f.hi)
    if derivatives and np.any(inner):
        ti = ts[inner]
        up = path_extremes(D, ti + h, precise=True)
        dn = path_extremes(D, ti - h, precise=True)
        fd_min[inner] = (up[0] - dn[0]) / (2 * h)
        fd_max[inner] = (up[1] - dn[1]) / (2 * h)

    out = []
    for i, t in enumerate(ts):
        cmin = cmax = math.nan
        reliable = True
        if derivatives and D.f.lo < t < D.f.hi and abs(D.f(t)) >= F_FLOOR:
            try:
                cmin = hadamard_derivative(D, t, "min", tol)
                cmax = hadamard_derivative(D, t, "max", tol)
            except DegenerateEigenvalueError:
                reliable = False
        out.append(
            SpectrumPathSample(
                t=float(t),
                lambda_min=float(lmin[i]),
                lambda_max=float(lmax[i]),
                product=float(prod[i]),
                dlambda_min_closed=float(cmin),
                dlambda_min_fd=float(fd_min[i]),
                dlambda_max_closed=float(cmax),
                dlambda_max_fd=float(fd_max[i]),
                product_err=float(err[i]),
                reliable=reliable,
            )
        )
    return out


@dataclass
class IdentityReport:
    """Relative residuals of the polynomial identities at one ``t``."""

    n: int
    alpha: float
    t: float
    residuals: dict[str, float] = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    def ok(self, threshold: float = 1e-8) -> bool:
        return self.max_residual <= threshold


def _rel(lhs, rhs, *scale):
    s = max([abs(lhs), abs(rhs), *map(abs, scale), np.finfo(float).tiny])
    return abs(lhs - rhs) / s


def _laguerre_alpha(base: JacobiMatrix) -> float:
    alpha = float(base.diag[0]) - 1.0
    ref = laguerre_jacobi(base.size, alpha)
    if not (
        np.allclose(ref.diag, base.diag, rtol=1e-14, atol=0)
        and np.allclose(ref.offdiag, np.abs(base.offdiag), rtol=1e-14, atol=0)
    ):
        raise DomainError("base matrix is not a Laguerre Jacobi matrix")
    return alpha


def verify_polynomial_identities(
    D: DeformedJacobi, t: float, tol: float | None = None, seed: int = 0
) -> IdentityReport:
    """Residuals of the deformation identities at both extreme eigenvalues of
    ``J(t)`` and of the Laguerre derivative identities at sample points.

    ``relation``: ``f^2 b_{n+1} p_{n+1}(x,t) = b_{n+1} p_{n+1}(x)
    + b_n (1 - f^2) p_{n-1}(x)`` with the left side taken from the recurrence
    of ``J(t)`` itself; ``combination``: ``b_{n+1} p_{n+1} = (f^2 - 1) b_n
    p_{n-1}``; ``norm``: ``sum_{j<=n} p_j^2 = b_{n+1} p'_{n+1}(x,t) p_n
    + (f^2 - 1)/f^2 p_n^2``; ``rel1``/``rel2``: the same relations in the
    classical Laguerre normalisation; ``P1``/``P2``: ``x L_k' = k L_k
    - (k + alpha) L_{k-1}`` and ``L_{k-1}' = L_k' + L_{k-1}``.
    """
    _check_interior(D, t)
    alpha = _laguerre_alpha(D.base)
    n = D.n
    M = deformed_matrix(D, t)
    tol = M.default_tol() if tol is None else tol
    ft = D.f(t)
    f2 = ft * ft
    bn = D.coupling
    res: dict[str, float] = {}

    def worst(key, value):
        res[key] = max(res.get(key, 0.0), value)

    for lam in extreme_eigenvalues(M, tol):
        lam = refine_eigenvalue(M, lam, tol)
        base = orthonormal_sequence(D.base, lam, derivatives=True)
        defo = orthonormal_sequence(M, lam, derivatives=True)
        p = base.values
        pn, pn1 = p[n], p[n - 1]
        q = base.char  # b_{n+1} p_{n+1}(x)

        # f^2 b_{n+1} p_{n+1}(x, t) from the deformed recurrence: |f| * char
        lhs = abs(ft) * defo.char
        worst("relation", _rel(lhs, q + bn * (1 - f2) * pn1, q, bn * pn1))
        worst("combination", _rel(q, (f2 - 1) * bn * pn1, bn * pn1))

        dq_t = abs(ft) * defo.char_deriv / f2  # b_{n+1} p'_{n+1}(x, t)
        norm_sq = float(np.sum(p * p))
        worst("norm", _rel(norm_sq, dq_t * pn + (f2 - 1) / f2 * pn * pn))

        L, _ = laguerre_values(n + 1, alpha, lam)
        rhs1 = (n + alpha) * (f2 - 1) / (n + 1) * L[n - 1]
        worst("rel1", _rel(L[n + 1], rhs1))
        rhs2 = -(n + alpha) * f2 / (lam - (2 * n + alpha + 1)) * L[n - 1]
        worst("rel2", _rel(L[n], rhs2))

        # classical normalisation agrees with the orthonormal one
        c = laguerre_orthonormal_factor(n, alpha)
        worst("normalisation", _rel(pn, c * L[n]))

    rng = np.random.default_rng(seed)
    lmax = extreme_eigenvalues(M, tol)[1]
    points = np.concatenate([[alpha + 1.0], rng.uniform(0.0, lmax, size=5)])
    for x in points:
        L, dL = laguerre_values(n + 1, alpha, x)
        for k in range(1, n + 2):
            lhs = x * dL[k]
            rhs = k * L[k] - (k + alpha) * L[k - 1]
            worst("P1", _rel(lhs, rhs, k * L[k], (k + alpha) * L[k - 1]))
            worst("P2", _rel(dL[k - 1], dL[k] + L[k - 1], dL[k], L[k - 1]))
    return IdentityReport(n=n, alpha=alpha, t=float(t), residuals=res)


def alpha_derivative_matrix(n: int, alpha: float, t: float) -> JacobiMatrix:
    """``d J_{n+1}(t, alpha) / d alpha`` for the Laguerre deformation with
    ``f(t) = t``: unit diagonal, off-diagonal ``k / (2 sqrt(k (k + alpha)))``
    and the last entry scaled by ``t``."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if not np.isfinite(alpha) or alpha <= -1:
        raise DomainError(f"alpha must exceed -1, got {alpha!r}")
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t must lie in [0, 1], got {t}")
    k = np.arange(1, n + 1, dtype=float)
    off = k / (2.0 * np.sqrt(k * (k + alpha)))
    off[-1] *= t
    return JacobiMatrix(np.ones(n + 1), off)


def diagonal_dominance_margins(M: JacobiMatrix) -> np.ndarray:
    """``|a_k| - |b_{k-1}| - |b_k|`` per row; all positive means strictly
    diagonally dominant."""
    off = np.abs(M.offdiag)
    radii = np.pad(off, (1, 0)) + np.pad(off, (0, 1))
    return np.abs(M.diag) - radii
