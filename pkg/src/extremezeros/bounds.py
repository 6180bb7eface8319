"""Explicit bounds for extreme Laguerre zeros and the certificates built on them.

Notation: ``lambda_{1,n}`` and ``lambda_{n,n}`` are the smallest and largest
zero of ``L_n^(alpha)``; ``a_{n+1} = 2n + alpha + 1`` and
``b_n^2 = n (n + alpha)``. All formula functions accept numpy arrays for
``n`` so that certificate scans over many degrees stay vectorised.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .orthopoly import laguerre_jacobi
from .tridiag_eigen import leading_extremes

ALPHA_STAR_N_MAX = 10_000


def _pochhammer2(x):
    return x * (x + 1.0)


def _check_alpha(alpha):
    if np.any(~np.isfinite(alpha)) or np.any(np.asarray(alpha) <= -1):
        raise DomainError(f"alpha must exceed -1, got {alpha!r}")


def _check_n(n, least):
    if np.any(np.asarray(n) < least):
        raise DomainError(f"n must be at least {least}, got {n!r}")


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def dk_bound(n, alpha):
    """Upper bound for ``lambda_{n+1,n+1}``, the largest zero of
    ``L_{n+1}^(alpha)``."""
    _check_alpha(alpha)
    _check_n(n, 1)
    n = np.asarray(n, dtype=float)
    root = np.sqrt((n + 1) ** 2 + (alpha + 1) * (n + 3))
    num = 2 * (n + 1) ** 2 + 2 * (alpha + 1) + (alpha - 1) * (n + 1) + 2 * n * root
    return _scalar(num / (n + 3))


def _dj_radicand(n, alpha):
    p = _pochhammer2(alpha + 2)
    return p * (
        9 * p
        + 2 * (2 * alpha + 5) * (alpha**2 + 5 * alpha + 10) * (n - 1)
        + (5 * alpha**2 + 25 * alpha + 38) * (n - 1) ** 2
    )


def dj_lower_zero_bound(n, alpha):
    """Upper bound for ``lambda_{1,n}``, the smallest zero of
    ``L_n^(alpha)``; ``(x)_2 = x (x + 1)``."""
    _check_alpha(alpha)
    _check_n(n, 2)
    n = np.asarray(n, dtype=float)
    p = _pochhammer2(alpha + 2)
    q = _pochhammer2(n + alpha + 1)
    rad = _dj_radicand(n, alpha)
    if np.any(rad < 0):
        raise DomainError("negative radicand in the smallest-zero bound")
    return _scalar((p * (3 * n + 2 * alpha + 2) - np.sqrt(rad)) / (2 * q))


def m2_largest_zero_bound(n, alpha):
    """Lower bound ``2n + alpha - 2 + sqrt(n^2 - 2n + alpha n + 2)`` for
    ``lambda_{n,n}``."""
    _check_alpha(alpha)
    _check_n(n, 1)
    n = np.asarray(n, dtype=float)
    rad = n * n - 2 * n + alpha * n + 2
    if np.any(rad < 0):
        raise DomainError(f"negative radicand {rad} in the largest-zero bound")
    return _scalar(2 * n + alpha - 2 + np.sqrt(rad))


def prod1_margin(n, alpha):
    """``4n + 2 alpha + 2 - m0 - dk``: a positive value certifies
    ``2 a_{n+1} - lambda_1(c) - lambda_{n+1}(c) > 0`` along the path."""
    _check_n(n, 5)
    n_arr = np.asarray(n, dtype=float)
    return _scalar(
        4 * n_arr + 2 * alpha + 2
        - np.asarray(dj_lower_zero_bound(n, alpha))
        - np.asarray(dk_bound(n, alpha))
    )


def prod2_constant(n, alpha):
    """Largest ``K`` for which the bounds certify
    ``(a_{n+1} - lambda_1)(lambda_{n+1} - a_{n+1}) > K (a_{n+1} + b_n^2)``."""
    _check_n(n, 5)
    n_arr = np.asarray(n, dtype=float)
    a = 2 * n_arr + alpha + 1
    left = a - np.asarray(dj_lower_zero_bound(n, alpha))
    right = np.asarray(m2_largest_zero_bound(n, alpha)) - a
    return _scalar(left * right / (a + n_arr * (n_arr + alpha)))


def t_threshold(K: float) -> float:
    """Root ``t in (0, 1)`` of ``t^4 / (1 - t^2) = K``.

    Solved as the quadratic ``s^2 + K s - K = 0`` in ``s = t^2``, in the
    cancellation-free form ``s = 2K / (K + sqrt(K^2 + 4K))``; bisection is the
    fallback if the closed form misbehaves.
    """
    if not np.isfinite(K) or K <= 0:
        raise DomainError(f"K must be positive, got {K}")
    s = 2.0 * K / (K + np.sqrt(K * K + 4.0 * K))
    t = float(np.sqrt(s))
    # residual of the quadratic; well conditioned even when t is close to 1
    if 0.0 < t < 1.0 and abs(s * s + K * s - K) <= 1e-12 * max(K, 1.0):
        return t
    lo, hi = 0.0, 1.0
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if mid**4 < K * (1 - mid * mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def min_prod1_margin(alpha: float, n_max: int = ALPHA_STAR_N_MAX):
    """Smallest ``prod1_margin`` over n = 5..n_max and the degree attaining it."""
    ns = np.arange(5, n_max + 1)
    margins = prod1_margin(ns, alpha)
    i = int(np.argmin(margins))
    return float(margins[i]), int(ns[i])


def alpha_star(
    n_max: int = ALPHA_STAR_N_MAX,
    lo: float = 0.0,
    hi: float = 100.0,
    xtol: float = 1e-9,
) -> float:
    """Largest alpha for which ``prod1_margin`` stays positive for every
    n = 5..n_max, by bisection on alpha."""
    if min_prod1_margin(lo, n_max)[0] <= 0:
        raise DomainError(f"margin already non-positive at alpha={lo}")
    if min_prod1_margin(hi, n_max)[0] > 0:
        raise DomainError(f"margin still positive at alpha={hi}")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if min_prod1_margin(mid, n_max)[0] > 0:
            lo = mid
        else:
            hi = mid
    return lo


def certified_threshold(
    n_min: int = 5,
    n_max: int = ALPHA_STAR_N_MAX,
    alpha_lo: float = -1.0 + 1e-12,
    alpha_hi: float | None = None,
    alpha_samples: int = 401,
) -> tuple[float, float]:
    """Smallest ``prod2_constant`` over a degree range and an alpha grid, and
    the t-threshold it certifies."""
    ns = np.arange(n_min, n_max + 1)
    if alpha_hi is None:
        alphas = [alpha_lo]
    else:
        alphas = np.linspace(alpha_lo, alpha_hi, alpha_samples)
    K = min(float(np.min(prod2_constant(ns, a))) for a in alphas)
    return K, t_threshold(K)


@dataclass(frozen=True)
class BoundsReport:
    n: int
    alpha: float
    dk_upper: float
    m0_upper: float
    m2_lower: float
    prod1_margin: float
    prod2_K: float


def bounds_report(n: int, alpha: float) -> BoundsReport:
    return BoundsReport(
        n=int(n),
        alpha=float(alpha),
        dk_upper=dk_bound(n, alpha),
        m0_upper=dj_lower_zero_bound(n, alpha),
        m2_lower=m2_largest_zero_bound(n, alpha),
        prod1_margin=prod1_margin(n, alpha),
        prod2_K=prod2_constant(n, alpha),
    )


@dataclass(frozen=True)
class SandwichRow:
    """Gaps between each bound and the computed zero it controls (positive
    means the bound holds) together with the largest eigenvalue error."""

    n: int
    alpha: float
    dk_gap: float
    m0_gap: float
    m2_gap: float
    tol: float


def bounds_sandwich(
    n_values, alpha: float, tol: float | None = None, precise: bool = False
):
    """Compare the three bounds against eigenvalues of the Laguerre matrices
    ``J_n`` and ``J_{n+1}`` for every n in ``n_values``."""
    ns = np.asarray(list(n_values), dtype=int)
    _check_n(ns, 2)
    M = laguerre_jacobi(int(ns.max()) + 1, alpha)
    sizes = np.concatenate([ns, ns + 1])
    lmin, lmax, hmin, hmax = leading_extremes(M, sizes, tol, precise)
    k = ns.size
    rows = []
    for i, n in enumerate(ns):
        rows.append(
            SandwichRow(
                n=int(n),
                alpha=float(alpha),
                dk_gap=dk_bound(n, alpha) - lmax[k + i],
                m0_gap=dj_lower_zero_bound(n, alpha) - lmin[i],
                m2_gap=lmax[i] - m2_largest_zero_bound(n, alpha),
                tol=float(max(hmin[i], hmax[i], hmax[k + i])),
            )
        )
    return rows
