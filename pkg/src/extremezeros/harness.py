"""Numerical checks of the monotonicity statements for extreme zeros.

Every check produces a :class:`ConjectureReport` made of per-case verdicts.
A strict inequality ``lhs < rhs`` is recorded with ``margin = rhs - lhs`` and
``threshold = 10 * (uncertainty of lhs + uncertainty of rhs)``, where the
uncertainties come from bisection run to working precision: the bracket
half-width plus a backward-error floor of ``2 eps ||M||`` per eigenvalue.
A case ``holds`` when the margin exceeds the threshold, ``fails`` when it is
below minus the threshold, and is ``unresolved`` otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import bounds_sandwich
from .orthopoly import (
    MONOTONE_ALPHAS,
    HERMITE_EVEN,
    HERMITE_ODD,
    LAGUERRE,
    product_sequence,
)
from .parametric import (
    IDENTITY,
    SQRT,
    SQUARE,
    TransitionFunction,
    laguerre_deformation,
    path_extremes,
)

HOLDS = "holds"
FAILS = "fails"
UNRESOLVED = "unresolved"

STRICTNESS = 10.0

# the 15-digit products quoted for Hermite polynomials, keyed by degree
QUOTED_HERMITE_PRODUCTS = {
    17: 2.58976219107561,
    18: 1.30382961637360,
    19: 2.62851205461184,
    20: 1.32176837751291,
}
QUOTED_TOLERANCE = 1e-10

PROPOSITION_T_MAX = 0.568774
PROPOSITION_ALPHA_MAX = 47.9603
DEFAULT_ALPHAS = (-0.9, -0.5, -0.25, 0.0, 0.5, 1.0, 10.0, 47.9)
PROPOSITION_ALPHAS = (-0.9, -0.5, 0.0, 0.5, 1.0, 10.0, 47.9)
CONJECTURE_ALPHAS = (-0.9, 0.0, 1.0, 10.0, 100.0)


@dataclass(frozen=True)
class CaseVerdict:
    kind: str
    params: dict
    margin: float
    threshold: float

    @property
    def verdict(self) -> str:
        if self.margin > self.threshold:
            return HOLDS
        if self.margin < -self.threshold:
            return FAILS
        return UNRESOLVED


@dataclass
class ConjectureReport:
    name: str
    params: dict = field(default_factory=dict)
    cases: list[CaseVerdict] = field(default_factory=list)
    series: dict = field(default_factory=dict)

    def add(self, kind, margin, threshold, **params):
        self.cases.append(CaseVerdict(kind, params, float(margin), float(threshold)))

    def subset(self, *kinds) -> "ConjectureReport":
        return ConjectureReport(
            self.name,
            dict(self.params),
            [c for c in self.cases if c.kind in kinds],
            self.series,
        )

    @property
    def all_hold(self) -> bool:
        return bool(self.cases) and all(c.verdict == HOLDS for c in self.cases)

    def counts(self) -> dict[str, int]:
        out = {HOLDS: 0, FAILS: 0, UNRESOLVED: 0}
        for c in self.cases:
            out[c.verdict] += 1
        return out

    def worst(self) -> CaseVerdict | None:
        """Case with the smallest margin relative to its threshold."""
        if not self.cases:
            return None
        return min(self.cases, key=lambda c: c.margin - c.threshold)

    def summary(self) -> str:
        c = self.counts()
        w = self.worst()
        where = "" if w is None else f"; worst margin {w.margin:.3e} at {w.kind} {w.params}"
        return (
            f"{self.name}: {c[HOLDS]} hold, {c[FAILS]} fail, "
            f"{c[UNRESOLVED]} unresolved{where}"
        )


def _increasing(report, kind, values, errs, labels, **params):
    for i in range(len(values) - 1):
        report.add(
            kind,
            values[i + 1] - values[i],
            STRICTNESS * (errs[i] + errs[i + 1]),
            **params,
            **labels(i),
        )


def check_quoted_products() -> ConjectureReport:
    """Compare the computed Hermite products with the quoted 15-digit values."""
    report = ConjectureReport("quoted-products", {"tolerance": QUOTED_TOLERANCE})
    for family in (HERMITE_ODD, HERMITE_EVEN):
        for e in product_sequence(family, 20, n_min=17, precise=True):
            if e.n in QUOTED_HERMITE_PRODUCTS:
                quoted = QUOTED_HERMITE_PRODUCTS[e.n]
                report.add(
                    "quoted",
                    QUOTED_TOLERANCE - abs(e.y - quoted),
                    0.0,
                    n=e.n,
                    computed=e.y,
                    quoted=quoted,
                )
    report.cases.sort(key=lambda c: c.params["n"])
    return report


def check_gazeau_inequality(n_max: int = 400) -> ConjectureReport:
    """``y_n < y_{n+2}`` for Hermite products up to ``n_max`` (both parities),
    the ceilings ``y_even < pi/2`` and ``y_odd < pi``, and the quoted values."""
    if n_max < 6:
        raise ValueError("n_max must be at least 6")
    report = ConjectureReport("gazeau", {"n_max": n_max})
    for family, ceiling in ((HERMITE_EVEN, math.pi / 2), (HERMITE_ODD, math.pi)):
        seq = product_sequence(family, n_max, precise=True)
        ys = [e.y for e in seq]
        errs = [e.err for e in seq]
        ns = [e.n for e in seq]
        _increasing(
            report,
            "inequality",
            ys,
            errs,
            lambda i: {"n": ns[i], "n_plus_2": ns[i + 1]},
            family=family,
        )
        for e in seq:
            report.add(
                "ceiling", ceiling - e.y, STRICTNESS * e.err, family=family, n=e.n
            )
        report.series[family] = [(e.n, e.y) for e in seq]
    report.cases.extend(check_quoted_products().cases)
    return report


def check_laguerre_product_monotonicity(
    alpha_grid=MONOTONE_ALPHAS, n_max: int = 100
) -> ConjectureReport:
    """``y_n(alpha) < y_{n+1}(alpha)`` for n = 2..n_max-1."""
    report = ConjectureReport(
        "laguerre-monotone", {"alphas": list(alpha_grid), "n_max": n_max}
    )
    for alpha in alpha_grid:
        seq = product_sequence(LAGUERRE, n_max, alpha=alpha, precise=True)
        ns = [e.n for e in seq]
        _increasing(
            report,
            "monotone",
            [e.y for e in seq],
            [e.err for e in seq],
            lambda i: {"n": ns[i]},
            alpha=float(alpha),
        )
        report.series[float(alpha)] = [(e.n, e.y) for e in seq]
    return report


def _q_from_extremes(n, alpha, f2, l1, ln):
    a = 2 * n + alpha + 1
    bn2 = n * (n + alpha)
    ratio = f2 * f2 / (1.0 - f2) * (a + bn2) / ((a - l1) * (ln - a))
    return (2 * a - l1 - ln) * (1.0 - ratio) + 2.0 * f2


def _path(n, alpha, ts, f):
    D = laguerre_deformation(n, alpha, f)
    lmin, lmax, hmin, hmax = path_extremes(D, ts, precise=True)
    prod = lmin * lmax
    err = np.abs(lmax) * hmin + np.abs(lmin) * hmax + hmin * hmax
    return lmin, lmax, prod, err, np.maximum(hmin, hmax)


def check_proposition(
    alpha_grid=PROPOSITION_ALPHAS,
    n_range=range(5, 61),
    t_grid=None,
    q_below: float = 0.5,
) -> ConjectureReport:
    """Product of the extremes strictly increasing along ``t_grid`` for
    ``f(t) = t``; also ``Q(t) > 0`` at grid points in ``(0, q_below)``."""
    if t_grid is None:
        t_grid = np.linspace(0.0, PROPOSITION_T_MAX, 50)
    ts = np.asarray(t_grid, dtype=float)
    report = ConjectureReport(
        "proposition",
        {
            "alphas": list(alpha_grid),
            "n": [min(n_range), max(n_range)],
            "t": [float(ts[0]), float(ts[-1]), ts.size],
        },
    )
    for alpha in alpha_grid:
        for n in n_range:
            lmin, lmax, prod, err, half = _path(n, alpha, ts, IDENTITY)
            _increasing(
                report,
                "increasing",
                prod,
                err,
                lambda i: {"t": float(ts[i]), "t_next": float(ts[i + 1])},
                n=n,
                alpha=float(alpha),
            )
            inner = (ts > 0) & (ts < q_below)
            q = _q_from_extremes(n, alpha, ts[inner] ** 2, lmin[inner], lmax[inner])
            # Q is a sum of terms of size ~a_{n+1}; its rounding scale is tol-sized
            for t, qv, h in zip(ts[inner], q, half[inner]):
                report.add(
                    "q-positive",
                    qv,
                    STRICTNESS * h * (4 * n + 2 * abs(alpha) + 4),
                    n=n,
                    alpha=float(alpha),
                    t=float(t),
                )
    return report


def check_conjecture(
    alpha_grid=CONJECTURE_ALPHAS,
    n_range=range(5, 61),
    t_grid=None,
    f: TransitionFunction = IDENTITY,
) -> ConjectureReport:
    """``prod(t) > prod(0)`` for each t in the grid (not monotonicity)."""
    if t_grid is None:
        t_grid = np.round(np.arange(1, 21) * 0.05, 12)
    ts = np.asarray(t_grid, dtype=float)
    if np.any(ts <= 0) or np.any(ts > 1):
        raise ValueError("conjecture grid must lie in (0, 1]")
    report = ConjectureReport(
        "conjecture",
        {
            "alphas": list(alpha_grid),
            "n": [min(n_range), max(n_range)],
            "t": ts.tolist(),
            "f": f.name,
        },
    )
    full = np.concatenate([[0.0], ts])
    for alpha in alpha_grid:
        regime = "verified" if alpha <= PROPOSITION_ALPHA_MAX else "beyond-alpha-bound"
        for n in n_range:
            _, _, prod, err, _ = _path(n, alpha, full, f)
            for j, t in enumerate(ts, start=1):
                report.add(
                    "exceeds-start",
                    prod[j] - prod[0],
                    STRICTNESS * (err[j] + err[0]),
                    n=n,
                    alpha=float(alpha),
                    t=float(t),
                    regime=regime,
                )
    return report


def check_interior_maximum(
    n: int = 20, alpha: float = 0.5, samples: int = 101
) -> ConjectureReport:
    """For f in {t, sqrt t, t^2}: the product path on [0, 1] has a strict
    interior maximum above both endpoints, and ends above where it starts."""
    ts = np.linspace(0.0, 1.0, samples)
    report = ConjectureReport("interior-max", {"n": n, "alpha": alpha, "samples": samples})
    for f in (IDENTITY, SQRT, SQUARE):
        _, _, prod, err, _ = _path(n, alpha, ts, f)
        k = int(np.argmax(prod))
        report.add(
            "interior-max",
            prod[k] - prod[-1],
            STRICTNESS * (err[k] + err[-1]),
            f=f.name,
            t_max=float(ts[k]),
        )
        report.add(
            "end-above-start",
            prod[-1] - prod[0],
            STRICTNESS * (err[-1] + err[0]),
            f=f.name,
        )
        report.series[f.name] = list(zip(ts.tolist(), prod.tolist()))
    return report


def check_bounds(n_range=range(5, 201), alpha_grid=DEFAULT_ALPHAS) -> ConjectureReport:
    """Each bound strictly on the correct side of the computed zero."""
    report = ConjectureReport(
        "bounds", {"n": [min(n_range), max(n_range)], "alphas": list(alpha_grid)}
    )
    for alpha in alpha_grid:
        for row in bounds_sandwich(n_range, alpha, precise=True):
            thr = STRICTNESS * row.tol
            report.add("dk", row.dk_gap, thr, n=row.n, alpha=row.alpha)
            report.add("m0", row.m0_gap, thr, n=row.n, alpha=row.alpha)
            report.add("m2", row.m2_gap, thr, n=row.n, alpha=row.alpha)
    return report
