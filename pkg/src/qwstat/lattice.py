"""Amplitude fields on finite windows of the integer line.

The walk lives on all of Z.  Infinite-support states are represented by a
:class:`StateGenerator` (an analytic rule ``site -> amplitudes``) and evolved
on finite windows using the light cone: after ``n`` steps, values on
``[lo, hi]`` depend only on the initial state on ``[lo - n, hi + n]``.  Every
window that comes back from :func:`step` or :func:`evolve` is therefore exact,
and no boundary condition is ever imposed.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Any, Callable, TextIO

import numpy as np

from . import _backend
from .coin import UnitaryCoin
from .errors import PreconditionError, WindowTooSmall

#: Jumps of the (L, R) components: L at x is fed from x + 1, R from x - 1.
TWO_STATE_OFFSETS = np.array([-1, 1], dtype=np.int_)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class AmplitudeField:
    """Per-site amplitude vectors on the inclusive window ``[lo, hi]``.

    ``values`` has shape ``(hi - lo + 1, N)``; for the two-state walk column
    0 is the left chirality and column 1 the right one.
    """

    lo: int
    hi: int
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=np.complex128)
        if vals.ndim != 2:
            raise PreconditionError("field values must be a (sites, components) array")
        if self.hi < self.lo or vals.shape[0] != self.hi - self.lo + 1:
            raise PreconditionError(
                f"window [{self.lo}, {self.hi}] does not match {vals.shape[0]} stored sites"
            )
        if not np.all(np.isfinite(vals)):
            raise PreconditionError("field contains NaN or Inf")
        object.__setattr__(self, "values", _frozen(vals))

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    @property
    def components(self) -> int:
        return self.values.shape[1]

    @property
    def psiL(self) -> np.ndarray:
        return self.values[:, 0]

    @property
    def psiR(self) -> np.ndarray:
        return self.values[:, 1]

    def at(self, x: int) -> np.ndarray:
        if not self.lo <= x <= self.hi:
            raise IndexError(f"site {x} outside [{self.lo}, {self.hi}]")
        return self.values[x - self.lo]

    def restrict(self, lo: int, hi: int) -> AmplitudeField:
        if lo < self.lo or hi > self.hi or hi < lo:
            raise WindowTooSmall(f"[{lo}, {hi}] is not inside [{self.lo}, {self.hi}]")
        return AmplitudeField(lo, hi, self.values[lo - self.lo:hi - self.lo + 1])


@dataclass(frozen=True)
class Measure:
    """Nonnegative per-site weights on ``[lo, hi]`` (not normalised)."""

    lo: int
    hi: int
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=np.float64)
        if vals.ndim != 1 or vals.shape[0] != self.hi - self.lo + 1:
            raise PreconditionError("measure values do not match the window")
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise PreconditionError("measure values must be finite and nonnegative")
        object.__setattr__(self, "values", _frozen(vals))

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    def at(self, x: int) -> float:
        if not self.lo <= x <= self.hi:
            raise IndexError(f"site {x} outside [{self.lo}, {self.hi}]")
        return float(self.values[x - self.lo])

    def restrict(self, lo: int, hi: int) -> Measure:
        if lo < self.lo or hi > self.hi or hi < lo:
            raise WindowTooSmall(f"[{lo}, {hi}] is not inside [{self.lo}, {self.hi}]")
        return Measure(lo, hi, self.values[lo - self.lo:hi - self.lo + 1])


@dataclass(frozen=True)
class StateGenerator:
    """Analytic state on all of Z.

    ``rule`` maps an integer array of sites to a ``(len(sites), N)`` complex
    array; it must be pure.  ``family`` records which construction produced
    it (``full-support``, ``a-zero``, ``uniform``, ``custom``...).
    """

    rule: Callable[[np.ndarray], np.ndarray]
    family: str = "custom"
    params: dict[str, Any] = field(default_factory=dict)

    def __call__(self, sites: np.ndarray) -> np.ndarray:
        return np.asarray(self.rule(np.asarray(sites, dtype=np.int64)), dtype=np.complex128)


@dataclass(frozen=True)
class MeasureGenerator:
    """Analytic nonnegative measure on all of Z."""

    rule: Callable[[np.ndarray], np.ndarray]
    family: str = "custom"
    params: dict[str, Any] = field(default_factory=dict)

    def __call__(self, sites: np.ndarray) -> np.ndarray:
        return np.asarray(self.rule(np.asarray(sites, dtype=np.int64)), dtype=np.float64)

    def window(self, lo: int, hi: int) -> Measure:
        return Measure(lo, hi, self(np.arange(lo, hi + 1)))


def uniform_generator(phi) -> StateGenerator:
    """Constant state ``Psi(x) = phi`` for every site."""
    vec = np.asarray(phi, dtype=np.complex128).ravel()

    def rule(x: np.ndarray) -> np.ndarray:
        return np.broadcast_to(vec, (x.shape[0], vec.shape[0])).copy()

    return StateGenerator(rule, "uniform", {"phi": vec.tolist()})


def delta_generator(phi, site: int = 0) -> StateGenerator:
    """State equal to ``phi`` at ``site`` and zero elsewhere."""
    vec = np.asarray(phi, dtype=np.complex128).ravel()

    def rule(x: np.ndarray) -> np.ndarray:
        out = np.zeros((x.shape[0], vec.shape[0]), dtype=np.complex128)
        out[x == site] = vec
        return out

    return StateGenerator(rule, "delta", {"phi": vec.tolist(), "site": site})


def sample_window(gen: StateGenerator, lo: int, hi: int) -> AmplitudeField:
    if hi < lo:
        raise WindowTooSmall(f"empty window [{lo}, {hi}]")
    return AmplitudeField(lo, hi, gen(np.arange(lo, hi + 1)))


def _shift_step(U: np.ndarray, offsets: np.ndarray, field: AmplitudeField, steps: int = 1) -> AmplitudeField:
    left = max(int(offsets.max()), 0)
    right = max(-int(offsets.min()), 0)
    lo, hi = field.lo + steps * left, field.hi - steps * right
    if hi < lo:
        raise WindowTooSmall(
            f"window [{field.lo}, {field.hi}] too small for {steps} step(s) "
            f"(each step shrinks it by {left + right})"
        )
    if field.components != U.shape[0]:
        raise PreconditionError(f"field has {field.components} components, coin is {U.shape[0]}x{U.shape[0]}")
    if steps == 0:
        return field
    vals = _backend.evolve_window(field.values, U, offsets, steps)
    return AmplitudeField(lo, hi, vals)


def step(coin: UnitaryCoin, field: AmplitudeField) -> AmplitudeField:
    """Advance one time step; the returned window is ``[lo + 1, hi - 1]``.

    ``psiL'(x) = a psiL(x+1) + b psiR(x+1)`` and
    ``psiR'(x) = c psiL(x-1) + d psiR(x-1)``.
    """
    if field.hi - field.lo < 2:
        raise WindowTooSmall(f"step needs at least 3 sites, got [{field.lo}, {field.hi}]")
    return _shift_step(coin.matrix, TWO_STATE_OFFSETS, field)


def evolve(coin: UnitaryCoin, gen: StateGenerator, n: int, lo: int, hi: int) -> AmplitudeField:
    """Exact state after ``n`` steps, restricted to ``[lo, hi]``."""
    if n < 0:
        raise PreconditionError("n must be nonnegative")
    if hi < lo:
        raise WindowTooSmall(f"empty window [{lo}, {hi}]")
    return _shift_step(coin.matrix, TWO_STATE_OFFSETS, sample_window(gen, lo - n, hi + n), n)


def measure_series_of(
    U: np.ndarray, offsets: np.ndarray, gen: StateGenerator, n_max: int, lo: int, hi: int
) -> np.ndarray:
    """Measures at times ``0..n_max`` on ``[lo, hi]`` as an ``(n_max+1, m)`` array."""
    if n_max < 0:
        raise PreconditionError("n_max must be nonnegative")
    if hi < lo:
        raise WindowTooSmall(f"empty window [{lo}, {hi}]")
    left = max(int(offsets.max()), 0)
    right = max(-int(offsets.min()), 0)
    plo, phi_ = lo - n_max * left, hi + n_max * right
    vals = gen(np.arange(plo, phi_ + 1))
    return _backend.measure_series(vals, U, offsets, n_max, lo - plo, hi - lo + 1)


def evolve_measures(coin: UnitaryCoin, gen: StateGenerator, n_max: int, lo: int, hi: int) -> list[Measure]:
    """``to_measure(evolve(coin, gen, n, lo, hi))`` for ``n = 0..n_max`` in one pass."""
    series = measure_series_of(coin.matrix, TWO_STATE_OFFSETS, gen, n_max, lo, hi)
    return [Measure(lo, hi, row) for row in series]


def to_measure(field: AmplitudeField) -> Measure:
    v = field.values
    return Measure(field.lo, field.hi, (v.real ** 2 + v.imag ** 2).sum(axis=1))


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_measure_csv(measure: Measure, out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["x", "mu"])
    for x, mu in zip(measure.sites, measure.values):
        w.writerow([int(x), _fmt(mu)])


def write_field_csv(field: AmplitudeField, out: TextIO) -> None:
    if field.components != 2:
        raise PreconditionError("field CSV is defined for two-state fields")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["x", "psiL_re", "psiL_im", "psiR_re", "psiR_im"])
    for x, (l, r) in zip(field.sites, field.values):
        w.writerow([int(x), _fmt(l.real), _fmt(l.imag), _fmt(r.real), _fmt(r.imag)])


def read_measure_csv(src: TextIO) -> Measure:
    rows = list(csv.reader(src))
    if not rows or rows[0] != ["x", "mu"]:
        raise PreconditionError("measure CSV must start with header 'x,mu'")
    xs = [int(r[0]) for r in rows[1:]]
    mus = [float(r[1]) for r in rows[1:]]
    if xs != list(range(xs[0], xs[0] + len(xs))):
        raise PreconditionError("measure CSV sites must be consecutive and ascending")
    return Measure(xs[0], xs[-1], np.array(mus))


def measure_csv_text(measure: Measure) -> str:
    buf = io.StringIO()
    write_measure_csv(measure, buf)
    return buf.getvalue()
