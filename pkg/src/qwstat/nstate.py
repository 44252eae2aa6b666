"""N-state walks: coin rows as jump components, and uniform stationarity.

Row ``k`` of an ``N x N`` unitary coin drives component ``k`` one jump of
``offsets[k]`` sites.  For ``N = 2M + 1`` the jumps are ``-M..M``; for
``N = 2M`` they are ``-M..-1, 1..M``.  A constant initial state ``phi``
evolves to the constant state ``U^n phi`` and so its measure never changes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import InputError, NotUnitary, PreconditionError, WindowTooSmall, ZeroState
from .lattice import AmplitudeField, _shift_step, measure_series_of, uniform_generator

UNITARY_TOL = 1e-9
UNIFORM_TOL = 1e-12


def jump_offsets(n: int) -> np.ndarray:
    if n < 2:
        raise InputError("N-state coins need N >= 2")
    m = n // 2
    if n % 2:
        offs = list(range(-m, m + 1))
    else:
        offs = list(range(-m, 0)) + list(range(1, m + 1))
    return np.array(offs, dtype=np.int_)


@dataclass(frozen=True)
class NStateCoin:
    matrix: np.ndarray
    offsets: np.ndarray

    @property
    def N(self) -> int:
        return self.matrix.shape[0]

    @property
    def reach(self) -> int:
        return int(np.abs(self.offsets).max())


def make_nstate_coin(matrix, *, tol: float = UNITARY_TOL) -> NStateCoin:
    u = np.array(matrix, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise InputError(f"coin must be square, got shape {u.shape}")
    if not np.all(np.isfinite(u)):
        raise NotUnitary("coin entries must be finite")
    offsets = jump_offsets(u.shape[0])
    res = float(np.abs(u @ u.conj().T - np.eye(u.shape[0])).max())
    if res > tol:
        raise NotUnitary(f"coin not unitary: max |U U^H - I| = {res:.3e} > {tol:.1e}")
    u.setflags(write=False)
    offsets.setflags(write=False)
    return NStateCoin(u, offsets)


def nstate_coin_from_json(obj: dict[str, Any]) -> NStateCoin:
    """Parse ``{"n": N, "entries": [[[re, im], ...], ...]}``."""
    try:
        n = int(obj["n"])
        rows = [[complex(float(e[0]), float(e[1])) for e in row] for row in obj["entries"]]
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise InputError(f"malformed N-state coin JSON: {exc}") from None
    if len(rows) != n or any(len(r) != n for r in rows):
        raise InputError(f"entries must be an {n}x{n} array")
    return make_nstate_coin(rows)


def split_nstate(coin: NStateCoin) -> list[np.ndarray]:
    """``U_k`` keeps row ``k`` of ``U`` and zeroes the rest."""
    parts = []
    for k in range(coin.N):
        uk = np.zeros_like(coin.matrix)
        uk[k] = coin.matrix[k]
        parts.append(uk)
    return parts


def nstate_step(coin: NStateCoin, field: AmplitudeField) -> AmplitudeField:
    """One step; the window shrinks by the maximal jump on each side."""
    r = coin.reach
    if field.hi - field.lo < 2 * r:
        raise WindowTooSmall(f"window [{field.lo}, {field.hi}] too small for jumps of {r}")
    return _shift_step(coin.matrix, coin.offsets, field)


def nstate_evolve(coin: NStateCoin, field: AmplitudeField, n: int) -> AmplitudeField:
    return _shift_step(coin.matrix, coin.offsets, field, n)


@dataclass(frozen=True)
class UniformReport:
    norm2: float
    max_deviation: float
    n_max: int
    window: tuple[int, int]
    tol: float = UNIFORM_TOL

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tol

    def to_json(self) -> dict[str, Any]:
        return {
            "norm2": self.norm2,
            "max_deviation": self.max_deviation,
            "n_max": self.n_max,
            "window": list(self.window),
            "tol": self.tol,
            "passed": self.passed,
        }


def uniform_stationary_check(
    coin: NStateCoin, phi, n_max: int, lo: int = -40, hi: int = 40
) -> UniformReport:
    """Evolve the constant state ``phi`` and report ``max |mu_n(x) - ||phi||^2|``."""
    vec = np.asarray(phi, dtype=np.complex128).ravel()
    if vec.shape[0] != coin.N:
        raise PreconditionError(f"phi has {vec.shape[0]} components, coin needs {coin.N}")
    norm2 = float((vec.real ** 2 + vec.imag ** 2).sum())
    if norm2 == 0.0:
        raise ZeroState("phi must be nonzero")
    series = measure_series_of(coin.matrix, coin.offsets, uniform_generator(vec), n_max, lo, hi)
    return UniformReport(norm2, float(np.abs(series - norm2).max()), n_max, (lo, hi))
