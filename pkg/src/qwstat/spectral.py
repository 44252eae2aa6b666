"""Non-uniform stationary states for coins with all entries nonzero.

For such a coin there are four eigenvalues of the walk operator,
``lambda_{1,2} = exp(i(+-phi + xi/2))`` and ``lambda_{3,4} = -lambda_{1,2}``,
at which the two-term recurrence obeyed by each chirality component has a
double characteristic root ``gamma``.  The eigenvector family is then

    psiL(x) = (A + xB) gamma^x
    psiR(x) = {(A + xB)(lambda - det conj(lambda))/2 - lambda B} gamma^(x-1) / b

and since ``|gamma| = 1`` its measure is a quadratic polynomial in ``x``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .coin import CoinCase, UnitaryCoin, classify, coin_angles
from .errors import NotEigenvalue, WrongCase, ZeroParameters
from .lattice import MeasureGenerator, StateGenerator

#: A supplied lambda must lie this close to one of the four eigenvalues.
EIGEN_MATCH_TOL = 1e-9
#: Unit-modulus check on gamma used as a second guard.
GAMMA_UNIT_TOL = 1e-8


@dataclass(frozen=True)
class EigenSolution:
    lam: complex
    gamma: complex
    A: complex
    B: complex
    coin: UnitaryCoin


def _require_full(coin: UnitaryCoin) -> None:
    if classify(coin) is not CoinCase.FULL_SUPPORT:
        raise WrongCase("operation requires a coin with abcd != 0")


def eigen_lambdas(coin: UnitaryCoin) -> tuple[complex, complex, complex, complex]:
    """The four double-root eigenvalues, in the order ``(l1, l2, -l1, -l2)``."""
    _require_full(coin)
    ang = coin_angles(coin)
    l1 = cmath.exp(1j * (ang.phi + ang.xi / 2))
    l2 = cmath.exp(1j * (-ang.phi + ang.xi / 2))
    return l1, l2, -l1, -l2


def eigen_index(coin: UnitaryCoin, lam: complex) -> int:
    """1-based index of ``lam`` among :func:`eigen_lambdas`, or NotEigenvalue."""
    lams = eigen_lambdas(coin)
    dists = [abs(lam - l) for l in lams]
    k = int(np.argmin(dists))
    if dists[k] > EIGEN_MATCH_TOL:
        raise NotEigenvalue(
            f"lambda={lam!r} is {dists[k]:.3e} away from the nearest double-root eigenvalue"
        )
    return k + 1


def lambda_k(coin: UnitaryCoin, k: int) -> complex:
    if k not in (1, 2, 3, 4):
        raise NotEigenvalue(f"eigenvalue index must be 1..4, got {k}")
    return eigen_lambdas(coin)[k - 1]


def gamma_of(coin: UnitaryCoin, lam: complex) -> complex:
    """Double root ``(lambda + det conj(lambda)) / (2a)``."""
    eigen_index(coin, lam)
    gamma = (lam + coin.det * lam.conjugate()) / (2 * coin.a)
    if abs(abs(gamma) - 1.0) > GAMMA_UNIT_TOL:
        raise NotEigenvalue(f"|gamma| = {abs(gamma):.12f} is not 1")
    return gamma


def eigen_solution(coin: UnitaryCoin, lam: complex, A: complex, B: complex) -> EigenSolution:
    A, B = complex(A), complex(B)
    if A == 0 and B == 0:
        raise ZeroParameters("A and B cannot both vanish")
    return EigenSolution(complex(lam), gamma_of(coin, lam), A, B, coin)


def full_amplitudes(sol: EigenSolution, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    coin, lam, g = sol.coin, sol.lam, sol.gamma
    lin = sol.A + x * sol.B
    w = (lam - coin.det * lam.conjugate()) / 2
    # |gamma| = 1, so the polar form avoids the modulus drift of repeated products
    theta = cmath.phase(g)
    xf = x.astype(np.float64)
    out = np.empty((x.shape[0], 2), dtype=np.complex128)
    out[:, 0] = lin * np.exp(1j * theta * xf)
    out[:, 1] = (lin * w - lam * sol.B) * np.exp(1j * theta * (xf - 1)) / coin.b
    return out


def build_stationary_full(coin: UnitaryCoin, lam: complex, A: complex, B: complex) -> StateGenerator:
    sol = eigen_solution(coin, lam, A, B)
    return StateGenerator(
        lambda x: full_amplitudes(sol, x),
        "full-support",
        {"lambda": sol.lam, "gamma": sol.gamma, "A": sol.A, "B": sol.B, "k": eigen_index(coin, lam)},
    )


def printed_measure(sol: EigenSolution, x: np.ndarray) -> np.ndarray:
    """``2|A+xB|^2 - 2x|B|^2 + (|B|^2 - Re(A conj(B)(1 - det conj(lambda)^2))) / |b|^2``."""
    x = np.asarray(x, dtype=np.float64)
    A, B, coin, lam = sol.A, sol.B, sol.coin, sol.lam
    absB2 = abs(B) ** 2
    const = (absB2 - (A * B.conjugate() * (1 - coin.det * lam.conjugate() ** 2)).real) / abs(coin.b) ** 2
    return 2 * np.abs(A + x * B) ** 2 - 2 * x * absB2 + const


def direct_measure(sol: EigenSolution, x: np.ndarray) -> np.ndarray:
    v = full_amplitudes(sol, x)
    return (v.real ** 2 + v.imag ** 2).sum(axis=1)


def closed_form_measure(coin: UnitaryCoin, lam: complex, A: complex, B: complex) -> MeasureGenerator:
    """Quadratic closed-form measure of the eigenvector family.

    The printed polynomial is evaluated as-is; :func:`closed_form_discrepancy`
    compares it with ``|psi|^2`` of the actual eigenvector.
    """
    sol = eigen_solution(coin, lam, A, B)
    return MeasureGenerator(
        lambda x: printed_measure(sol, x),
        "full-support-closed-form",
        {"lambda": sol.lam, "A": sol.A, "B": sol.B},
    )


def closed_form_discrepancy(coin: UnitaryCoin, lam: complex, A: complex, B: complex, lo: int, hi: int) -> float:
    """Max ``|printed - direct|`` over ``[lo, hi]``; the direct value is authoritative."""
    sol = eigen_solution(coin, lam, A, B)
    x = np.arange(lo, hi + 1)
    return float(np.max(np.abs(printed_measure(sol, x) - direct_measure(sol, x))))


def rescale_to_unit_origin(coin: UnitaryCoin, lam: complex, A: complex, B: complex) -> tuple[complex, complex]:
    """Scale ``(A, B)`` so that the measure at the origin equals 1."""
    sol = eigen_solution(coin, lam, A, B)
    mu0 = float(direct_measure(sol, np.array([0]))[0])
    if mu0 <= 0:
        raise ZeroParameters("measure vanishes at the origin; cannot rescale")
    s = mu0 ** -0.5
    return A * s, B * s
