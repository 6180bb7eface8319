"""Laguerre and Hermite polynomials through their Jacobi matrices.

Zeros are eigenvalues of the recurrence matrix; Hermite zeros are always
obtained from the Laguerre case with alpha = -1/2 (even degree) or +1/2 (odd
degree) by taking square roots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError
from .tridiag_eigen import (
    JacobiMatrix,
    _RESCALE_LIMIT,
    eigenvalues,
    leading_extremes,
)

HERMITE_EVEN = "hermite-even"
HERMITE_ODD = "hermite-odd"
LAGUERRE = "laguerre"
FAMILIES = (LAGUERRE, HERMITE_EVEN, HERMITE_ODD)

# default alpha grid for the Laguerre product sequences
MONOTONE_ALPHAS = (-0.25, -0.5, 0.0, 0.5, 1.0)


@dataclass(frozen=True)
class LaguerreParams:
    n: int
    alpha: float

    def __post_init__(self):
        _check_laguerre(self.n, self.alpha)


@dataclass(frozen=True)
class ProductSequenceEntry:
    """Product ``y`` of the smallest and largest (positive) zero of one
    polynomial. ``err`` bounds its error, propagated from the eigenvalue
    errors (bracket half-width plus the bisection backward-error floor)."""

    n: int
    alpha: Union[float, str]
    y: float
    err: float


@dataclass(frozen=True)
class OrthonormalSequence:
    """Values ``p_0(x)..p_{m-1}(x)`` of the orthonormal recurrence of an
    ``m``-by-``m`` Jacobi matrix.

    ``char`` is ``b_m p_m(x) = (x - a_m) p_{m-1} - b_{m-1} p_{m-2}``, which is
    proportional to the characteristic polynomial of the matrix and needs no
    ``b_m``. If the recurrence had to be rescaled to avoid overflow, every
    stored value is the true one times ``exp(-log_scale)``.
    """

    point: float
    values: np.ndarray
    derivs: np.ndarray | None
    char: float
    char_deriv: float | None
    log_scale: float = 0.0

    def recurrence_residuals(self, M: JacobiMatrix) -> np.ndarray:
        """Relative residuals of ``x p_k = b_{k+1} p_{k+1} + a_{k+1} p_k
        + b_k p_{k-1}`` for k = 0..m-2."""
        p = self.values
        x = self.point
        a = M.diag
        b = np.abs(M.offdiag)
        m = p.size
        res = np.empty(m - 1)
        for k in range(m - 1):
            prev = b[k - 1] * p[k - 1] if k > 0 else 0.0
            lhs = x * p[k]
            res[k] = abs(lhs - b[k] * p[k + 1] - a[k] * p[k] - prev) / max(
                1.0, abs(lhs)
            )
        return res


def _check_laguerre(n, alpha):
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"degree must be a positive integer, got {n!r}")
    if not np.isfinite(alpha) or alpha <= -1:
        raise DomainError(f"alpha must exceed -1, got {alpha!r}")


def laguerre_recurrence(n: int, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal ``a_k = 2k - 1 + alpha`` (k=1..n) and off-diagonal
    ``b_k = sqrt(k (k + alpha))`` (k=1..n-1) of the n-by-n Laguerre matrix."""
    _check_laguerre(n, alpha)
    k = np.arange(1, n + 1, dtype=float)
    a = 2.0 * (k - 1.0) + alpha + 1.0
    kb = k[:-1]
    b = np.sqrt(kb * (kb + alpha))
    return a, b


def laguerre_jacobi(n: int, alpha: float) -> JacobiMatrix:
    return JacobiMatrix(*laguerre_recurrence(n, alpha))


def laguerre_zeros(n: int, alpha: float, tol: float | None = None) -> np.ndarray:
    """Zeros of ``L_n^(alpha)`` in ascending order."""
    return eigenvalues(laguerre_jacobi(n, alpha), tol).eigenvalues


def hermite_positive_zeros(n: int, tol: float | None = None) -> np.ndarray:
    """The floor(n/2) positive zeros of ``H_n`` in ascending order."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise DomainError(f"H_n has no positive zeros to pair for n={n!r}")
    alpha = -0.5 if n % 2 == 0 else 0.5
    return np.sqrt(laguerre_zeros(n // 2, alpha, tol))


def _laguerre_products(alpha, degrees, tol, precise):
    degrees = np.asarray(degrees, dtype=int)
    M = laguerre_jacobi(int(degrees.max()), alpha)
    lmin, lmax, hmin, hmax = leading_extremes(M, degrees, tol, precise)
    y = lmin * lmax
    err = np.abs(lmax) * hmin + np.abs(lmin) * hmax + hmin * hmax
    return y, err


def product_sequence(
    family: str,
    n_max: int,
    alpha: float | None = None,
    tol: float | None = None,
    n_min: int | None = None,
    precise: bool = False,
) -> list[ProductSequenceEntry]:
    """Products of the extreme zeros for every admissible degree up to n_max.

    ``family`` is ``"laguerre"`` (needs ``alpha``; degrees from 2) or
    ``"hermite-even"`` / ``"hermite-odd"`` (degrees from 4 with the given
    parity; the product is of the smallest and largest positive zero).
    ``precise=True`` bisects to working precision instead of ``tol``.
    """
    if family == LAGUERRE:
        if alpha is None:
            raise DomainError("the Laguerre family needs alpha")
        _check_laguerre(1, alpha)
        start = 2 if n_min is None else max(2, n_min)
        degrees = np.arange(start, n_max + 1)
        if degrees.size == 0:
            return []
        y, err = _laguerre_products(alpha, degrees, tol, precise)
        return [
            ProductSequenceEntry(int(n), float(alpha), float(v), float(e))
            for n, v, e in zip(degrees, y, err)
        ]
    if family in (HERMITE_EVEN, HERMITE_ODD):
        parity = 0 if family == HERMITE_EVEN else 1
        start = 4 if n_min is None else max(4, n_min)
        ns = np.array([n for n in range(start, n_max + 1) if n % 2 == parity])
        if ns.size == 0:
            return []
        y2, err2 = _laguerre_products(
            -0.5 if parity == 0 else 0.5, ns // 2, tol, precise
        )
        y = np.sqrt(y2)
        # d sqrt(u) = du / (2 sqrt u)
        err = err2 / (2.0 * y)
        return [
            ProductSequenceEntry(int(n), family, float(v), float(e))
            for n, v, e in zip(ns, y, err)
        ]
    raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")


def orthonormal_sequence(
    M: JacobiMatrix, x: float, derivatives: bool = False
) -> OrthonormalSequence:
    """Forward orthonormal recurrence of ``M`` at ``x``.

    Uses ``|b_k|`` so that the sequence is the orthonormal family with
    positive leading coefficients. The running values are rescaled whenever
    they exceed 1e150 in magnitude.
    """
    a = M.diag
    b = np.abs(M.offdiag)
    m = M.size
    if m > 1 and np.any(b == 0):
        raise DomainError("orthonormal recurrence needs an unreduced matrix")
    x = float(x)
    p = np.zeros(m + 1)
    dp = np.zeros(m + 1)
    p[0] = 1.0
    log_scale = 0.0
    for k in range(m):
        prev = b[k - 1] * p[k - 1] if k > 0 else 0.0
        dprev = b[k - 1] * dp[k - 1] if k > 0 else 0.0
        nxt = (x - a[k]) * p[k] - prev
        dnxt = p[k] + (x - a[k]) * dp[k] - dprev
        if k < m - 1:
            nxt /= b[k]
            dnxt /= b[k]
        p[k + 1] = nxt
        dp[k + 1] = dnxt
        big = max(abs(nxt), abs(dnxt))
        if big > _RESCALE_LIMIT:
            p[: k + 2] /= _RESCALE_LIMIT
            dp[: k + 2] /= _RESCALE_LIMIT
            log_scale += math.log(_RESCALE_LIMIT)
    return OrthonormalSequence(
        point=x,
        values=p[:m].copy(),
        derivs=dp[:m].copy() if derivatives else None,
        char=float(p[m]),
        char_deriv=float(dp[m]) if derivatives else None,
        log_scale=log_scale,
    )


def laguerre_values(n: int, alpha: float, x: float) -> tuple[np.ndarray, np.ndarray]:
    """Classical ``L_k^(alpha)(x)`` and derivatives for k = 0..n.

    Uses ``(k+1) L_{k+1} = (2k + alpha + 1 - x) L_k - (k + alpha) L_{k-1}``
    and the same relation differentiated in x.
    """
    if n < 0:
        raise DomainError("degree must be nonnegative")
    if alpha <= -1:
        raise DomainError(f"alpha must exceed -1, got {alpha!r}")
    L = np.zeros(n + 1)
    dL = np.zeros(n + 1)
    L[0] = 1.0
    if n >= 1:
        L[1] = 1.0 + alpha - x
        dL[1] = -1.0
    for k in range(1, n):
        c = 2 * k + alpha + 1 - x
        L[k + 1] = (c * L[k] - (k + alpha) * L[k - 1]) / (k + 1)
        dL[k + 1] = (c * dL[k] - L[k] - (k + alpha) * dL[k - 1]) / (k + 1)
    return L, dL


def laguerre_orthonormal_factor(k: int, alpha: float) -> float:
    """Factor ``c_k`` with ``p_k = c_k L_k^(alpha)`` for the orthonormal
    Laguerre polynomial: ``(-1)^k binom(k + alpha, k)^(-1/2)``."""
    log_binom = (
        math.lgamma(k + alpha + 1) - math.lgamma(k + 1) - math.lgamma(alpha + 1)
    )
    return (-1) ** k * math.exp(-0.5 * log_binom)
