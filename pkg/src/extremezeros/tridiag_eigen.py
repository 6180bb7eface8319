"""Eigenvalues of symmetric tridiagonal (Jacobi) matrices by Sturm bisection.

Counting uses the LDL^T pivot recurrence of ``M - x I``; every routine here is
vectorised over a batch of shifts (and optionally a batch of matrices), so a
whole path of deformed matrices can be bisected in lock-step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BisectionError, DomainError, StaleEigenvalueError

EPS = np.finfo(float).eps
MAX_BISECTION_STEPS = 200
_RESCALE_LIMIT = 1e150


@dataclass(frozen=True, eq=False)
class JacobiMatrix:
    """Symmetric tridiagonal matrix stored as diagonal ``a_1..a_m`` and
    off-diagonal ``b_1..b_{m-1}``."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        diag = np.array(self.diag, dtype=float).reshape(-1)
        off = np.array(self.offdiag, dtype=float).reshape(-1)
        if diag.size == 0:
            raise DomainError("JacobiMatrix needs at least one diagonal entry")
        if off.size != diag.size - 1:
            raise DomainError(
                f"offdiag must have length {diag.size - 1}, got {off.size}"
            )
        if not (np.all(np.isfinite(diag)) and np.all(np.isfinite(off))):
            raise DomainError("JacobiMatrix entries must be finite")
        diag.flags.writeable = False
        off.flags.writeable = False
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", off)

    def __eq__(self, other):
        if not isinstance(other, JacobiMatrix):
            return NotImplemented
        return np.array_equal(self.diag, other.diag) and np.array_equal(
            self.offdiag, other.offdiag
        )

    def __repr__(self):
        return f"JacobiMatrix(size={self.size})"

    @property
    def size(self) -> int:
        return self.diag.size

    @property
    def unreduced(self) -> bool:
        return bool(np.all(self.offdiag != 0.0))

    def gershgorin(self) -> tuple[float, float]:
        """Interval containing the union of the Gershgorin discs."""
        r = _radii(self.offdiag)
        return float(np.min(self.diag - r)), float(np.max(self.diag + r))

    def default_tol(self) -> float:
        lo, hi = self.gershgorin()
        return 1e-13 * (hi - lo + 1.0)

    def norm(self) -> float:
        """Infinity norm (max absolute row sum)."""
        return float(np.max(np.abs(self.diag) + _radii(self.offdiag)))

    def dense(self) -> np.ndarray:
        return (
            np.diag(self.diag)
            + np.diag(self.offdiag, 1)
            + np.diag(self.offdiag, -1)
        )

    def leading(self, m: int) -> "JacobiMatrix":
        """Leading ``m``-by-``m`` principal submatrix."""
        if not 1 <= m <= self.size:
            raise DomainError(f"submatrix size {m} outside 1..{self.size}")
        return JacobiMatrix(self.diag[:m], self.offdiag[: m - 1])

    def shifted(self, s: float) -> "JacobiMatrix":
        return JacobiMatrix(self.diag + s, self.offdiag)

    def scaled(self, s: float) -> "JacobiMatrix":
        return JacobiMatrix(self.diag * s, self.offdiag * s)


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    tolerance: float

    def __len__(self):
        return self.eigenvalues.size

    def __getitem__(self, i):
        return self.eigenvalues[i]


def _radii(offdiag):
    off = np.abs(np.asarray(offdiag, dtype=float))
    pad = [(0, 0)] * (off.ndim - 1)
    return np.pad(off, pad + [(1, 0)]) + np.pad(off, pad + [(0, 1)])


def _pivot_floor(diag, offdiag):
    # replacement magnitude for an exactly-zero LDL^T pivot
    off = np.abs(offdiag)
    pad = [(0, 0)] * (off.ndim - 1)
    return EPS * (np.abs(diag) + np.pad(off, pad + [(1, 0)]) + 1.0)


def _count_below(diag, offsq, floor, x, length=None):
    """Number of negative LDL^T pivots of ``M - x I`` (eigenvalues below x).

    ``diag``/``offsq``/``floor`` carry the matrix along the last axis and may
    carry batch axes in front; ``x`` broadcasts against the batch shape.
    ``length`` restricts each count to a leading principal submatrix.
    """
    m = diag.shape[-1]
    d = diag[..., 0] - x
    d = np.where(d == 0.0, -floor[..., 0], d)
    count = (d < 0).astype(np.int64)
    for k in range(1, m):
        d = diag[..., k] - x - offsq[..., k - 1] / d
        d = np.where(d == 0.0, -floor[..., k], d)
        neg = d < 0
        if length is not None:
            neg = neg & (k < length)
        count = count + neg
    return count


def _bisect(diag, offsq, floor, index, lo, hi, tol, length=None, rtol=0.0):
    """Locate the ``index``-th eigenvalue (0-based) inside ``[lo, hi]``.

    Returns midpoints and final bracket half-widths. Brackets that can no
    longer shrink in floating point are treated as converged.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    index = np.asarray(index)
    for _ in range(MAX_BISECTION_STEPS):
        half = 0.5 * (hi - lo)
        mid = lo + half
        target = np.maximum(tol, rtol * np.maximum(np.abs(lo), np.abs(hi)))
        done = (half <= target) | (mid <= lo) | (mid >= hi)
        if np.all(done):
            return mid, half
        below = _count_below(diag, offsq, floor, mid, length) <= index
        lo = np.where(~done & below, mid, lo)
        hi = np.where(~done & ~below, mid, hi)
    raise BisectionError(
        f"bisection did not converge in {MAX_BISECTION_STEPS} steps"
    )


def _widen(lo, hi, m):
    pad = EPS * (np.maximum(np.abs(lo), np.abs(hi)) + 1.0) * (m + 2)
    return lo - pad, hi + pad


def _check_tol(tol):
    if tol is None:
        return None
    tol = np.asarray(tol, dtype=float)
    if np.any(~np.isfinite(tol)) or np.any(tol <= 0):
        raise DomainError(f"tolerance must be positive, got {tol}")
    return tol


def sturm_count(M: JacobiMatrix, x: float) -> int:
    """Number of eigenvalues of ``M`` strictly less than ``x``."""
    if not np.isfinite(x):
        raise DomainError("shift must be finite")
    off = M.offdiag
    return int(
        _count_below(M.diag, off * off, _pivot_floor(M.diag, off), float(x))
    )


def eigenvalues(M: JacobiMatrix, tol: float | None = None) -> SpectrumResult:
    """All eigenvalues, ascending, each bisected to half-width <= tol."""
    tol = _check_tol(tol)
    if tol is None:
        tol = M.default_tol()
    m = M.size
    lo, hi = _widen(*M.gershgorin(), m)
    off = M.offdiag
    idx = np.arange(m)
    vals, half = _bisect(
        M.diag,
        off * off,
        _pivot_floor(M.diag, off),
        idx,
        np.full(m, lo),
        np.full(m, hi),
        tol,
    )
    return SpectrumResult(np.sort(vals), float(np.max(half)))


def extreme_eigenvalues(
    M: JacobiMatrix, tol: float | None = None
) -> tuple[float, float]:
    """Smallest and largest eigenvalue, without the interior spectrum."""
    tol = _check_tol(tol)
    if tol is None:
        tol = M.default_tol()
    m = M.size
    lo, hi = _widen(*M.gershgorin(), m)
    off = M.offdiag
    vals, _ = _bisect(
        M.diag,
        off * off,
        _pivot_floor(M.diag, off),
        np.array([0, m - 1]),
        np.full(2, lo),
        np.full(2, hi),
        tol,
    )
    return float(vals[0]), float(vals[1])


def _error_floor(diags, offdiags):
    # backward error of a Sturm count is a few ulps of the matrix norm
    return 2.0 * EPS * np.max(np.abs(diags) + _radii(offdiags), axis=-1)


def batch_extremes(diags, offdiags, tol=None, precise=False):
    """Extreme eigenvalues of a stack of equally sized Jacobi matrices.

    ``diags`` has shape (B, m) and ``offdiags`` shape (B, m-1). Returns
    ``(lmin, lmax, err_min, err_max)``, each of shape (B,), where ``err`` is
    the bracket half-width plus the backward-error floor ``2 eps ||M||``.
    With ``precise=True`` the brackets are shrunk to working precision;
    otherwise each matrix uses ``tol`` or its own default tolerance.
    """
    diags = np.atleast_2d(np.asarray(diags, dtype=float))
    offdiags = np.asarray(offdiags, dtype=float).reshape(diags.shape[0], -1)
    B, m = diags.shape
    r = _radii(offdiags)
    lo, hi = _widen(np.min(diags - r, axis=1), np.max(diags + r, axis=1), m)
    tol, rtol = _resolve_tol(tol, lo, hi, precise)
    tol = np.broadcast_to(tol, (B,))
    offsq = offdiags * offdiags
    floor = _pivot_floor(diags, offdiags)
    # stack the min and max searches along the batch axis
    D = np.concatenate([diags, diags])
    O = np.concatenate([offsq, offsq])
    F = np.concatenate([floor, floor])
    index = np.concatenate([np.zeros(B, dtype=int), np.full(B, m - 1)])
    vals, half = _bisect(
        D,
        O,
        F,
        index,
        np.concatenate([lo, lo]),
        np.concatenate([hi, hi]),
        np.concatenate([tol, tol]),
        rtol=rtol,
    )
    err = half + np.tile(_error_floor(diags, offdiags), 2)
    return vals[:B], vals[B:], err[:B], err[B:]


def _resolve_tol(tol, lo, hi, precise):
    if precise:
        return EPS * EPS * (hi - lo + 1.0), EPS
    tol = _check_tol(tol)
    if tol is None:
        tol = 1e-13 * (hi - lo + 1.0)
    return tol, 0.0


def leading_extremes(M: JacobiMatrix, sizes, tol=None, precise=False):
    """Extreme eigenvalues of the leading principal submatrices of ``M``.

    Returns ``(lmin, lmax, err_min, err_max)`` aligned with ``sizes``, with
    errors as in :func:`batch_extremes`. Each submatrix is bracketed by its
    own Gershgorin interval and, unless ``tol`` is given or ``precise`` set,
    bisected to its own default tolerance.
    """
    sizes = np.asarray(sizes, dtype=int).reshape(-1)
    if sizes.size == 0:
        empty = np.empty(0)
        return empty, empty, empty, empty
    if np.any(sizes < 1) or np.any(sizes > M.size):
        raise DomainError(f"submatrix sizes must lie in 1..{M.size}")
    top = int(sizes.max())
    diag = M.diag[:top]
    off = M.offdiag[: top - 1]
    subs = [M.leading(int(s)) for s in sizes]
    bounds = np.array([S.gershgorin() for S in subs])
    norms = np.array([S.norm() for S in subs])
    lo, hi = _widen(bounds[:, 0], bounds[:, 1], sizes)
    tol, rtol = _resolve_tol(tol, lo, hi, precise)
    tol = np.broadcast_to(tol, sizes.shape)
    length = np.concatenate([sizes, sizes])
    index = np.concatenate([np.zeros_like(sizes), sizes - 1])
    vals, half = _bisect(
        diag,
        off * off,
        _pivot_floor(diag, off),
        index,
        np.concatenate([lo, lo]),
        np.concatenate([hi, hi]),
        np.concatenate([tol, tol]),
        length=length,
        rtol=rtol,
    )
    err = half + np.tile(2.0 * EPS * norms, 2)
    n = sizes.size
    return vals[:n], vals[n:], err[:n], err[n:]


def refine_eigenvalue(M: JacobiMatrix, lam: float, tol: float | None = None):
    """Re-bisect an approximate eigenvalue to full working precision.

    Raises :class:`StaleEigenvalueError` if no eigenvalue lies within
    ``10 * tol`` of ``lam``.
    """
    tol = M.default_tol() if tol is None else float(_check_tol(tol))
    lo, hi = lam - 10.0 * tol, lam + 10.0 * tol
    below = sturm_count(M, lo)
    if sturm_count(M, hi) == below:
        raise StaleEigenvalueError(
            f"no eigenvalue within {10 * tol:.3g} of {lam!r}"
        )
    off = M.offdiag
    val, _ = _bisect(
        M.diag,
        off * off,
        _pivot_floor(M.diag, off),
        below,
        lo,
        hi,
        np.finfo(float).tiny,
        rtol=EPS,
    )
    return float(val)


def _scaled_run(values, coeffs, start, step):
    """Three-term run ``v_next = (c0 * v_cur - c1 * v_prev) / c2`` with
    rescaling; used for both sweep directions."""
    n = len(values)
    for k in range(start, n) if step > 0 else range(start, -1, -1):
        c0, c1, c2 = coeffs(k)
        values[k] = (c0 * values[k - step] - c1 * values[k - 2 * step]) / c2
        if abs(values[k]) > _RESCALE_LIMIT:
            if step > 0:
                values[: k + 1] /= _RESCALE_LIMIT
            else:
                values[k:] /= _RESCALE_LIMIT


def eigenvector_via_recurrence(
    M: JacobiMatrix,
    lam: float,
    sign_last: int | None = None,
    tol: float | None = None,
) -> np.ndarray:
    """Unit eigenvector of ``M`` for the eigenvalue ``lam`` from the
    three-term recurrence.

    Components are proportional to ``p_0(lam), ..., p_{m-1}(lam)`` of the
    orthonormal recurrence with coefficients ``a_k`` and ``|b_k|``; the
    matrix off-diagonal signs are then applied, with ``sign_last`` (if given)
    overriding the sign attached to the final component. The recurrence is
    swept from both ends and joined at the best-conditioned row, which is
    exact-arithmetic equivalent to the plain forward sweep but does not lose
    accuracy when trailing components are tiny. The first component is
    positive.
    """
    m = M.size
    lam = refine_eigenvalue(M, lam, tol)
    if m == 1:
        return np.ones(1)
    if not M.unreduced:
        raise DomainError("eigenvector recurrence needs an unreduced matrix")
    a = M.diag
    b = np.abs(M.offdiag)

    fwd = np.zeros(m)
    fwd[0] = 1.0
    fwd[1] = (lam - a[0]) / b[0]
    if m > 2:
        _scaled_run(fwd, lambda k: (lam - a[k - 1], b[k - 2], b[k - 1]), 2, 1)
    bwd = np.zeros(m)
    bwd[m - 1] = 1.0
    bwd[m - 2] = (lam - a[m - 1]) / b[m - 2]
    if m > 2:
        _scaled_run(bwd, lambda k: (lam - a[k + 1], b[k + 1], b[k]), m - 3, -1)

    # twist index: row whose leftover residual is smallest
    with np.errstate(divide="ignore", invalid="ignore"):
        gamma = a - lam
        gamma[1:] += b * fwd[:-1] / fwd[1:]
        gamma[:-1] += b * bwd[1:] / bwd[:-1]
    gamma = np.where(np.isfinite(gamma), np.abs(gamma), np.inf)
    r = int(np.argmin(gamma))
    v = np.empty(m)
    v[: r + 1] = fwd[: r + 1] / fwd[r]
    v[r + 1 :] = bwd[r + 1 :] / bwd[r]
    v /= np.linalg.norm(v)

    signs = np.concatenate([[1.0], np.cumprod(np.sign(M.offdiag))])
    if sign_last is not None:
        signs[-1] = signs[-2] * (1.0 if sign_last >= 0 else -1.0)
    v *= signs
    if v[0] < 0:
        v = -v
    return v
