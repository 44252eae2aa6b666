"""Numerical checks: eigen-equation residuals, algebraic identities,
window-scale stationarity levels and a tail-shape classifier for measures."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .coin import UnitaryCoin
from .errors import NonPositive, PreconditionError, WindowTooSmall
from .lattice import TWO_STATE_OFFSETS, AmplitudeField, Measure, StateGenerator, measure_series_of
from .spectral import eigen_lambdas

EIGEN_TOL = 1e-12
IDENTITY_TOL = 1e-10
MEMBERSHIP_TOL = 1e-10
UNIFORM_REL_TOL = 1e-9
TAIL_START = 3
#: Highest degree tried by the exact-polynomial test on each tail.
MAX_POLY_DEGREE = 4
#: Relative residual below which a tail counts as an exact polynomial.
POLY_EXACT_TOL = 1e-9


@dataclass
class ResidualReport:
    max_eigen_residual: float | None = None
    per_site: dict[int, float] = field(default_factory=dict)
    identities: dict[str, float] = field(default_factory=dict)
    thresholds: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        if self.max_eigen_residual is not None and self.max_eigen_residual >= self.thresholds.get("eigen", EIGEN_TOL):
            return False
        return all(v < self.thresholds.get(k, IDENTITY_TOL) for k, v in self.identities.items())


@dataclass(frozen=True)
class DecayClass:
    kind: str
    estimate: float | None = None

    def __str__(self) -> str:
        if self.estimate is None:
            return self.kind
        return f"{self.kind}({self.estimate:.4g})"


def eigen_residual(coin: UnitaryCoin, lam: complex, field: AmplitudeField) -> ResidualReport:
    """Residual of both component eigen-equations at every interior site."""
    if field.hi - field.lo < 2:
        raise WindowTooSmall("eigen residual needs at least 3 sites")
    L, R = field.psiL, field.psiR
    left = np.abs(lam * L[1:-1] - coin.a * L[2:] - coin.b * R[2:])
    right = np.abs(lam * R[1:-1] - coin.c * L[:-2] - coin.d * R[:-2])
    res = np.maximum(left, right)
    sites = range(field.lo + 1, field.hi)
    return ResidualReport(
        max_eigen_residual=float(res.max()),
        per_site={int(x): float(r) for x, r in zip(sites, res)},
        thresholds={"eigen": EIGEN_TOL},
    )


def _discriminant(p: complex, q: complex) -> float:
    """``|p^2 - 4q|`` for the monic quadratic ``z^2 + p z + q``."""
    return abs(p * p - 4 * q)


def identity_residuals(coin: UnitaryCoin, lam: complex) -> dict[str, float]:
    """All double-root identities evaluated at an arbitrary ``lam``.

    At the four admissible eigenvalues every entry vanishes; elsewhere the
    discriminants in particular are O(1).
    """
    a, b, d, det = coin.a, coin.b, coin.d, coin.det
    s = lam + det / lam
    gamma = (lam + det * lam.conjugate()) / (2 * a)
    cos2 = (det * lam.conjugate() ** 2).real
    return {
        "unit-gamma": abs(abs(gamma) - 1.0),
        "gamma-squared": abs(gamma * gamma - d / a),
        "double-root-h": _discriminant(-s / d, a / d),
        "double-root-charpoly": _discriminant(-s / a, d / a),
        "right-amplitude-norm": abs(abs(lam - det * lam.conjugate()) ** 2 / (4 * abs(b) ** 2) - 1.0),
        "cos-two-phi": abs(cos2 - (2 * abs(a) ** 2 - 1.0)),
    }


def algebraic_checks(coin: UnitaryCoin) -> ResidualReport:
    """Worst-case identity residuals over the four eigenvalues."""
    worst: dict[str, float] = {}
    for lam in eigen_lambdas(coin):
        for k, v in identity_residuals(coin, lam).items():
            worst[k] = max(worst.get(k, 0.0), v)
    return ResidualReport(identities=worst, thresholds={k: IDENTITY_TOL for k in worst})


def membership_level(series: np.ndarray, tol: float = MEMBERSHIP_TOL) -> int:
    """Largest ``n`` with rows ``1..n`` of ``series`` within ``tol`` of row 0."""
    dev = np.abs(series[1:] - series[0]).max(axis=1) if series.shape[0] > 1 else np.array([])
    bad = np.nonzero(dev > tol)[0]
    return int(bad[0]) if bad.size else series.shape[0] - 1


def membership_check(
    coin: UnitaryCoin, gen: StateGenerator, n_max: int, lo: int, hi: int, tol: float = MEMBERSHIP_TOL
) -> int:
    """Largest ``n <= n_max`` such that ``mu_k == mu_0`` on ``[lo, hi]`` for all ``k <= n``."""
    if n_max < 1:
        raise PreconditionError("n_max must be at least 1")
    series = measure_series_of(coin.matrix, TWO_STATE_OFFSETS, gen, n_max, lo, hi)
    return membership_level(series, tol)


def _fit(t: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Least-squares slope and RMS residual of ``y ~ slope * t + c``."""
    A = np.vstack([t, np.ones_like(t)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    r = y - A @ coef
    return float(coef[0]), float(np.sqrt(np.mean(r * r)))


def _exact_degree(t: np.ndarray, mu: np.ndarray) -> int | None:
    """Lowest degree ``d <= MAX_POLY_DEGREE`` fitting ``mu`` to rounding level.

    At least three surplus points are required, so short tails never count.
    """
    scale = float(np.abs(mu).max())
    for d in range(1, MAX_POLY_DEGREE + 1):
        if t.shape[0] < d + 4:
            return None
        fit = np.polynomial.Polynomial.fit(t, mu, d)
        if float(np.abs(fit(t) - mu).max()) <= POLY_EXACT_TOL * scale:
            return d
    return None


def decay_classify(measure: Measure) -> DecayClass:
    """Classify a measure on a window symmetric about 0 by the shape of its tails.

    Each tail (``|x| >= 3``) is first tested for being an exact polynomial
    of degree at most 4; when both are, the class is polynomial with the
    mean degree.  Otherwise each tail is fitted twice: ``log mu`` against
    ``log |x|`` (power law, slope = degree) and against ``|x|``
    (exponential, slope = rate), and a fit wins when its residual is at
    most half the other's.  The site ``x = 0`` never enters.
    """
    lo, hi = measure.lo, measure.hi
    if lo != -hi or hi - lo + 1 < 9:
        raise PreconditionError(f"decay classification needs a symmetric window of >= 9 sites, got [{lo}, {hi}]")
    v = measure.values
    if v.max() - v.min() <= UNIFORM_REL_TOL * max(1.0, float(v.mean())):
        return DecayClass("uniform")
    x = measure.sites
    tails = [(np.abs(x[m]).astype(np.float64), v[m]) for m in (x >= TAIL_START, x <= -TAIL_START)]
    degrees = [_exact_degree(t, mu) for t, mu in tails]
    if all(d is not None for d in degrees):
        return DecayClass("polynomial", sum(degrees) / 2)
    pow_slopes, pow_res, exp_slopes, exp_res = [], [], [], []
    for t, mu in tails:
        if np.any(mu <= 0):
            raise NonPositive("tail contains non-positive values; cannot take logarithms")
        y = np.log(mu)
        s, r = _fit(np.log(t), y)
        pow_slopes.append(s)
        pow_res.append(r)
        s, r = _fit(t, y)
        exp_slopes.append(s)
        exp_res.append(r)
    r_pow = math.sqrt(sum(r * r for r in pow_res) / 2)
    r_exp = math.sqrt(sum(r * r for r in exp_res) / 2)
    degree = sum(pow_slopes) / 2
    rate = sum(exp_slopes) / 2
    if r_pow <= 0.5 * r_exp and degree >= 0.5:
        return DecayClass("polynomial", degree)
    if r_exp <= 0.5 * r_pow and rate > 0:
        return DecayClass("exponential", rate)
    return DecayClass("other")


def report_json(
    report: ResidualReport, membership: int | None = None, decay: DecayClass | None = None
) -> dict[str, Any]:
    return {
        "max_eigen_residual": report.max_eigen_residual,
        "identities": report.identities,
        "membership_level": membership,
        "decay": None if decay is None else decay.kind,
        "decay_estimate": None if decay is None else decay.estimate,
        "thresholds": report.thresholds,
        "passed": report.passed,
    }
