"""Diagonal coins: pure shifts, and why only uniform measures survive.

With ``U = diag(e^{i eta}, det e^{-i eta})`` the left component is shifted
left and the right component right, so with ``a_x = |psiL_0(x)|^2`` and
``b_x = |psiR_0(x)|^2`` the measure at time ``n`` is ``a_{x+n} + b_{x-n}``.
:func:`uniformity_certificate` replays, on a finite window, the argument
that stationarity at times 1 and 2 already forces a uniform measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

import numpy as np

from .coin import UnitaryCoin, bzero_coin
from .errors import InputError, PreconditionError, WindowTooSmall
from .lattice import AmplitudeField, Measure, StateGenerator

CHAIN_TOL = 1e-10


@dataclass(frozen=True)
class DiagonalWalkState:
    """Squared moduli ``a_x``, ``b_x`` of the initial chiralities on ``[lo, hi]``."""

    eta: float
    delta: complex
    lo: int
    hi: int
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        m = self.hi - self.lo + 1
        for name in ("a", "b"):
            v = np.array(getattr(self, name), dtype=np.float64)
            if v.shape != (m,):
                raise InputError(f"{name} must have {m} entries for window [{self.lo}, {self.hi}]")
            if not np.all(np.isfinite(v)) or np.any(v < 0):
                raise InputError(f"{name} must be finite and nonnegative")
            v.setflags(write=False)
            object.__setattr__(self, name, v)
        if abs(abs(self.delta) - 1.0) > 1e-9:
            raise InputError("|delta| must be 1")

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    @property
    def coin(self) -> UnitaryCoin:
        return bzero_coin(self.eta, self.delta)

    def mu0(self) -> Measure:
        return Measure(self.lo, self.hi, self.a + self.b)

    def A(self, x: int) -> float:
        return float(self.a[x - self.lo])

    def B(self, x: int) -> float:
        return float(self.b[x - self.lo])

    def lift(self, phases: tuple[np.ndarray, np.ndarray] | None = None) -> AmplitudeField:
        """Amplitudes ``sqrt(a) e^{i pL}``, ``sqrt(b) e^{i pR}`` on the window."""
        vals = np.empty((self.a.shape[0], 2), dtype=np.complex128)
        vals[:, 0] = np.sqrt(self.a)
        vals[:, 1] = np.sqrt(self.b)
        if phases is not None:
            vals[:, 0] *= np.exp(1j * np.asarray(phases[0]))
            vals[:, 1] *= np.exp(1j * np.asarray(phases[1]))
        return AmplitudeField(self.lo, self.hi, vals)

    @classmethod
    def from_maps(cls, eta: float, delta: complex, a: Mapping[int, float], b: Mapping[int, float]) -> DiagonalWalkState:
        a = {int(k): float(v) for k, v in a.items()}
        b = {int(k): float(v) for k, v in b.items()}
        if not a or set(a) != set(b):
            raise InputError("a and b must be given on the same nonempty set of sites")
        lo, hi = min(a), max(a)
        if len(a) != hi - lo + 1:
            raise InputError("sites must form a contiguous window")
        xs = range(lo, hi + 1)
        return cls(eta, complex(delta), lo, hi, np.array([a[x] for x in xs]), np.array([b[x] for x in xs]))

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> DiagonalWalkState:
        """Parse ``{"eta", "delta": [re, im], "a": {site: value}, "b": {...}}``."""
        d = obj.get("delta", [1.0, 0.0])
        delta = complex(float(d[0]), float(d[1])) if isinstance(d, (list, tuple)) else complex(d)
        try:
            return cls.from_maps(float(obj.get("eta", 0.0)), delta, obj["a"], obj["b"])
        except KeyError as exc:
            raise InputError(f"state JSON missing {exc}") from None

    def to_json(self) -> dict[str, Any]:
        return {
            "eta": self.eta,
            "delta": [self.delta.real, self.delta.imag],
            "a": {str(int(x)): float(v) for x, v in zip(self.sites, self.a)},
            "b": {str(int(x)): float(v) for x, v in zip(self.sites, self.b)},
        }


def diag_evolve_measure(state: DiagonalWalkState, n: int) -> Measure:
    """``mu_n(x) = a_{x+n} + b_{x-n}`` on ``[lo + n, hi - n]``."""
    if n < 0:
        raise PreconditionError("n must be nonnegative")
    m = state.hi - state.lo + 1
    if m - 2 * n < 1:
        raise WindowTooSmall(f"window [{state.lo}, {state.hi}] has no sites left after {n} shifts")
    return Measure(state.lo + n, state.hi - n, state.a[2 * n:] + state.b[:m - 2 * n])


@dataclass(frozen=True)
class Certificate:
    verdict: str
    level: int | None = None
    witness: int | None = None
    reason: str | None = None
    constants: dict[str, float] = field(default_factory=dict)
    identities: dict[str, float] = field(default_factory=dict)
    deviations: dict[int, float] = field(default_factory=dict)
    window: tuple[int, int] = (0, 0)
    max_n: int = 2

    @property
    def uniform(self) -> bool:
        return self.verdict == "uniform"

    @property
    def label(self) -> str:
        lo, hi = self.window
        if self.verdict == "uniform":
            return f"uniform on [{lo + 2 * self.max_n}, {hi - 2 * self.max_n}]"
        if self.verdict == "non-stationary":
            return f"non-stationary at level {self.level} (witness site {self.witness})"
        return f"inconclusive: {self.reason}"

    def to_json(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict,
            "label": self.label,
            "level": self.level,
            "witness": self.witness,
            "reason": self.reason,
            "constants": self.constants,
            "identities": self.identities,
            "max_deviation_by_level": {str(k): v for k, v in self.deviations.items()},
            "window": list(self.window),
            "max_n": self.max_n,
        }


def _witness(sites: np.ndarray, dev: np.ndarray) -> int:
    """Site of largest deviation; ties go to the site nearest the origin, then the leftmost."""
    worst = dev.max()
    cand = [int(x) for x, v in zip(sites, dev) if v == worst]
    return min(cand, key=lambda x: (abs(x), x))


def _anchor(lo: int, hi: int) -> int:
    if lo <= -1 and hi >= 2:
        return 0
    mid = (lo + hi) // 2
    return mid - (mid % 2)


def _chain(state: DiagonalWalkState, tol: float) -> tuple[dict[str, float], dict[str, float], str | None]:
    """Recompute the derivation constants and the residual of every chain identity."""
    lo, hi = state.lo, state.hi
    a = lambda x: state.A(x)  # noqa: E731
    b = lambda x: state.B(x)  # noqa: E731
    x0 = _anchor(lo, hi)
    c1 = a(x0) - b(x0 - 1)
    c2 = a(x0 + 1) - b(x0)
    A = a(x0 + 1) - a(x0)
    B = a(x0 + 2) - a(x0 + 1)
    consts = {"anchor": float(x0), "c1": c1, "c2": c2, "A": A, "B": B}
    ids: dict[str, float] = {}

    def record(name: str, values: list[float]) -> None:
        ids[name] = max((abs(v) for v in values), default=0.0)

    even = lambda y: (y - x0) % 2 == 0  # noqa: E731
    record("n1-balance", [a(x + 1) + b(x - 1) - a(x) - b(x) for x in range(lo + 1, hi)])
    record("second-difference", [a(x + 2) - a(x) - (b(x + 1) - b(x - 1)) for x in range(lo + 1, hi - 1)])
    record("offset-parity", [a(y) - b(y - 1) - (c1 if even(y) else c2) for y in range(lo + 1, hi + 1)])
    incr = [(y, a(y + 2) - a(y + 1) - (a(y) - a(y - 1))) for y in range(lo + 1, hi - 1)]
    record("alternating-increment-even", [v for y, v in incr if even(y)])
    record("alternating-increment-odd", [v for y, v in incr if not even(y)])
    a0, a1, b0, b1 = a(x0), a(x0 + 1), b(x0), b(x0 + 1)
    lin = []
    for y in range(lo, hi + 1):
        k = (y - x0) // 2
        lin.append(a(y) - ((A + B) * k + a0 + (0.0 if even(y) else A)))
    record("linear-form", lin)
    ids["zero-drift"] = abs(A + B)
    if ids["zero-drift"] > tol:
        failed = [n for n, v in ids.items() if v > tol and n != "zero-drift"]
        reason = (
            f"linear drift A+B={A + B:.6g}: the window is consistent but a_x must turn "
            "negative somewhere on the full line"
        )
        if failed:
            reason = f"chain identity {failed[0]} fails"
        return consts, ids, reason
    record("a-period-2", [a(y) - (a0 if even(y) else a1) for y in range(lo, hi + 1)])
    record("b-period-2", [b(y) - (b0 if even(y) else b1) for y in range(lo, hi + 1)])
    mu = lambda y: a(y) + b(y)  # noqa: E731
    record("mu-period-2", [mu(y) - (mu(x0) if even(y) else mu(x0 + 1)) for y in range(lo, hi + 1)])
    record(
        "mu-collapse",
        [a0 + b0 - (a1 + b(x0 - 1)), a1 + b(x0 - 1) - (a1 + b1), mu(x0) - mu(x0 + 1)],
    )
    failed = [n for n, v in ids.items() if v > tol]
    return consts, ids, (f"chain identity {failed[0]} fails" if failed else None)


def uniformity_certificate(state: DiagonalWalkState, max_n: int = 2, tol: float = CHAIN_TOL) -> Certificate:
    """Decide, at window scale, whether the state's measure is stationary.

    Checks ``mu_n == mu_0`` for ``n = 1..max_n``.  The smallest failing ``n``
    gives a ``non-stationary`` verdict with the site of largest deviation as
    witness.  Otherwise the derivation constants are recomputed and each
    identity of the uniformity argument is checked; the verdict is
    ``uniform`` when all of them hold, ``inconclusive`` when the window is
    consistent with a linearly drifting (hence eventually negative) state.
    """
    if max_n < 2:
        raise PreconditionError("max_n must be at least 2")
    m = state.hi - state.lo + 1
    if m < 2 * max_n + 5:
        raise WindowTooSmall(f"window of {m} sites needs at least {2 * max_n + 5} for max_n={max_n}")
    mu0 = state.a + state.b
    deviations: dict[int, float] = {}
    first_fail: tuple[int, int] | None = None
    for n in range(1, max_n + 1):
        mun = diag_evolve_measure(state, n)
        dev = np.abs(mun.values - mu0[n:m - n])
        deviations[n] = float(dev.max())
        if first_fail is None and deviations[n] > tol:
            first_fail = (n, _witness(mun.sites, dev))
    common = {"deviations": deviations, "window": (state.lo, state.hi), "max_n": max_n}
    if first_fail is not None:
        return Certificate("non-stationary", level=first_fail[0], witness=first_fail[1], **common)
    consts, ids, reason = _chain(state, tol)
    if reason is not None:
        return Certificate("inconclusive", reason=reason, constants=consts, identities=ids, **common)
    spread = float(mu0.max() - mu0.min())
    ids["window-spread"] = spread
    if spread > tol:
        return Certificate(
            "inconclusive", reason=f"mu_0 spread {spread:.3e} on the window", constants=consts, identities=ids, **common
        )
    return Certificate("uniform", constants=consts, identities=ids, **common)


def _unbounded_a(x: int) -> float:
    return 2.0 * x if x >= 1 else (1.0 if x == 0 else -2.0 * x + 1)


def _unbounded_b(x: int) -> float:
    return 2.0 * x + 3 if x >= 1 else (3.0 if x == 0 else -2.0 * x)


def _bounded_a(x: int) -> float:
    if x >= 0:
        return 1.0 - math.ldexp(1.0, -(x // 2 + 1))
    return math.ldexp(1.0, -((-x + 1) // 2 + 1))


def _bounded_b(x: int) -> float:
    if x >= -1:
        return 1.0 - math.ldexp(1.0, -((x - 1) // 2 + 2))
    return math.ldexp(1.0, -((-x) // 2 + 1))


COUNTEREXAMPLES: dict[str, tuple[Callable[[int], float], Callable[[int], float]]] = {
    "unbounded": (_unbounded_a, _unbounded_b),
    "bounded": (_bounded_a, _bounded_b),
}


def _counterexample(which: str, lo: int, hi: int) -> DiagonalWalkState:
    fa, fb = COUNTEREXAMPLES[which]
    xs = range(lo, hi + 1)
    return DiagonalWalkState(0.0, 1.0 + 0j, lo, hi, np.array([fa(x) for x in xs]), np.array([fb(x) for x in xs]))


def counterexample_unbounded(lo: int = -10, hi: int = 10) -> DiagonalWalkState:
    """Integer-valued state with ``mu_0 = mu_1`` but ``mu_2(0) = 8 != mu_0(0) = 4``."""
    return _counterexample("unbounded", lo, hi)


def counterexample_bounded(lo: int = -10, hi: int = 10) -> DiagonalWalkState:
    """Dyadic state with ``0 <= mu_0 <= 2`` strictly increasing, ``mu_0 = mu_1 != mu_2``."""
    if max(abs(lo), abs(hi)) > 100:
        raise PreconditionError("bounded counterexample is exact in double precision only for |x| <= 100")
    return _counterexample("bounded", lo, hi)


def counterexample_generator(which: str) -> StateGenerator:
    """The counterexample on all of Z, lifted to real amplitudes ``(sqrt a_x, sqrt b_x)``."""
    if which not in COUNTEREXAMPLES:
        raise InputError(f"unknown counterexample {which!r}")
    fa, fb = COUNTEREXAMPLES[which]

    def rule(x: np.ndarray) -> np.ndarray:
        out = np.empty((x.shape[0], 2), dtype=np.complex128)
        out[:, 0] = np.sqrt([fa(int(s)) for s in x])
        out[:, 1] = np.sqrt([fb(int(s)) for s in x])
        return out

    return StateGenerator(rule, "custom", {"counterexample": which})
