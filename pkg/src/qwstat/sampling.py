"""Seeded random inputs: unitaries, coins, and diagonal-walk states."""

from __future__ import annotations

import numpy as np

from .bzero import DiagonalWalkState
from .coin import CoinCase, UnitaryCoin, classify, make_coin


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Orthonormalise a standard complex Gaussian matrix (QR with phase fix).

    Fixing the phases of ``R``'s diagonal makes the result Haar distributed.
    """
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_coin(rng: np.random.Generator) -> UnitaryCoin:
    u = random_unitary(2, rng)
    return make_coin(u[0, 0], u[0, 1], u[1, 0], u[1, 1])


def random_full_support_coin(rng: np.random.Generator, floor: float = 1e-3) -> UnitaryCoin:
    """Random coin whose entries all have modulus at least ``floor``."""
    while True:
        coin = random_coin(rng)
        if classify(coin) is CoinCase.FULL_SUPPORT and min(abs(coin.a), abs(coin.b)) >= floor:
            return coin


def random_complex(rng: np.random.Generator, scale: float = 1.0) -> complex:
    return complex(scale * rng.standard_normal(), scale * rng.standard_normal())


def random_uniform_diagonal_state(rng: np.random.Generator, lo: int, hi: int) -> DiagonalWalkState:
    """Stationary diagonal-walk state: 2-periodic ``a`` and ``b_x = a_{x+1} + C``."""
    a0, a1 = rng.uniform(0.0, 2.0, size=2)
    C = rng.uniform(0.0, 2.0)
    xs = np.arange(lo, hi + 1)
    a = np.where(xs % 2 == 0, a0, a1)
    b = np.where(xs % 2 == 0, a1 + C, a0 + C)
    return DiagonalWalkState(rng.uniform(0, 2 * np.pi), np.exp(1j * rng.uniform(0, 2 * np.pi)), lo, hi, a, b)


def random_level1_diagonal_state(rng: np.random.Generator, lo: int, hi: int) -> DiagonalWalkState:
    """Non-uniform state with ``mu_0 = mu_1`` exactly but ``mu_2 != mu_0``.

    Time-1 stationarity is equivalent to ``b_x = a_{x+1} + C``; integer data
    keeps that identity exact, and rejection ensures the increments of ``a``
    are not 2-periodic (which time-2 stationarity would require).
    """
    m = hi - lo + 1
    while True:
        a_ext = rng.integers(0, 20, size=m + 1).astype(np.float64)
        d = np.diff(a_ext)
        if np.any(d[2:] != d[:-2]):
            break
    C = float(rng.integers(0, 10))
    return DiagonalWalkState(0.0, 1.0 + 0j, lo, hi, a_ext[:m], a_ext[1:] + C)
