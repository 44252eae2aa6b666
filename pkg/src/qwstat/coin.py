"""Two-state quantum coins.

A coin is a 2x2 unitary ``[[a, b], [c, d]]``.  The walk splits it into the
left-moving half ``P`` (top row) and the right-moving half ``Q`` (bottom
row).  For stationary-measure purposes a coin falls in exactly one of three
cases: all entries nonzero, ``a == 0`` (anti-diagonal), or ``b == 0``
(diagonal).
"""

from __future__ import annotations

import cmath
import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .errors import AmbiguousCase, InputError, NotUnitary, WrongCase

#: Default unitarity tolerance for user-supplied coins.
UNITARY_TOL = 1e-9
#: Tolerance used with ``strict=True``.
STRICT_TOL = 1e-12
#: Entries with modulus below this are treated as zero when classifying.
CASE_EPS = 1e-9
#: Upper edge of the band in which a split zero pattern is reported ambiguous.
AMBIGUOUS_BAND = 1e-6


class CoinCase(enum.Enum):
    FULL_SUPPORT = "full-support"
    A_ZERO = "a-zero"
    B_ZERO = "b-zero"


@dataclass(frozen=True)
class UnitaryCoin:
    """Validated 2x2 unitary coin; build with :func:`make_coin`."""

    a: complex
    b: complex
    c: complex
    d: complex
    det: complex

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=np.complex128)

    def to_json(self) -> dict[str, list[float]]:
        return {k: [getattr(self, k).real, getattr(self, k).imag] for k in "abcd"}


@dataclass(frozen=True)
class CoinAngles:
    phi: float
    xi: float


@dataclass(frozen=True)
class CoinHalves:
    P: np.ndarray
    Q: np.ndarray


def unitarity_residuals(a: complex, b: complex, c: complex, d: complex) -> tuple[float, float, float, float]:
    """Return ``(row1 norm, row2 norm, row orthogonality, |det|)`` residuals."""
    r1 = abs(abs(a) ** 2 + abs(b) ** 2 - 1.0)
    r2 = abs(abs(c) ** 2 + abs(d) ** 2 - 1.0)
    orth = abs(a * c.conjugate() + b * d.conjugate())
    rdet = abs(abs(a * d - b * c) - 1.0)
    return r1, r2, orth, rdet


def nearest_unitary(m: np.ndarray) -> np.ndarray:
    """Unitary polar factor of a nonsingular 2x2 matrix, in closed form.

    Uses ``W = (M + e^{i arg det M} adj(M)^H) / sqrt(||M||_F^2 + 2|det M|)``,
    which follows from Cayley-Hamilton applied to ``sqrt(M^H M)``.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.shape != (2, 2):
        raise InputError(f"expected a 2x2 matrix, got shape {m.shape}")
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    det = a * d - b * c
    if abs(det) < 1e-12:
        raise NotUnitary("cannot repair a singular matrix")
    adj_h = np.array([[d.conjugate(), -c.conjugate()], [-b.conjugate(), a.conjugate()]])
    phase = det / abs(det)
    scale = math.sqrt(float(np.sum(np.abs(m) ** 2)) + 2.0 * abs(det))
    return (m + phase * adj_h) / scale


def make_coin(
    a: complex,
    b: complex,
    c: complex,
    d: complex,
    *,
    tol: float = UNITARY_TOL,
    repair: bool = False,
) -> UnitaryCoin:
    """Validate entries and return a :class:`UnitaryCoin`.

    Parameters
    ----------
    a, b, c, d:
        Coin entries, row-major.
    tol:
        Maximum allowed unitarity residual.
    repair:
        Replace the input by its nearest unitary before validating.

    Raises
    ------
    NotUnitary
        If any residual exceeds ``tol`` or an entry is not finite.
    """
    a, b, c, d = (complex(v) for v in (a, b, c, d))
    if not all(cmath.isfinite(v) for v in (a, b, c, d)):
        raise NotUnitary("coin entries must be finite")
    if repair:
        w = nearest_unitary(np.array([[a, b], [c, d]]))
        a, b, c, d = (complex(v) for v in w.ravel())
    res = unitarity_residuals(a, b, c, d)
    worst = max(res)
    if worst > tol:
        names = ("row 1 norm", "row 2 norm", "row orthogonality", "|det|")
        which = names[res.index(worst)]
        raise NotUnitary(f"coin not unitary: {which} residual {worst:.3e} > {tol:.1e}")
    return UnitaryCoin(a, b, c, d, a * d - b * c)


def hadamard() -> UnitaryCoin:
    s = 1.0 / math.sqrt(2.0)
    return make_coin(s, s, s, -s)


def u_theta(theta: float) -> UnitaryCoin:
    """The real reflection family ``[[cos t, sin t], [sin t, -cos t]]``."""
    cs, sn = math.cos(theta), math.sin(theta)
    return make_coin(cs, sn, sn, -cs)


def h_sigma(sigma: float) -> UnitaryCoin:
    """Phase-twisted Hadamard ``(1/sqrt 2) [[1, e^{is}], [e^{-is}, -1]]``."""
    s = 1.0 / math.sqrt(2.0)
    return make_coin(s, s * cmath.exp(1j * sigma), s * cmath.exp(-1j * sigma), -s)


def azero_coin(eta: float, delta: complex) -> UnitaryCoin:
    """Anti-diagonal coin ``[[0, e^{i eta}], [-delta e^{-i eta}, 0]]``."""
    return make_coin(0.0, cmath.exp(1j * eta), -delta * cmath.exp(-1j * eta), 0.0)


def bzero_coin(eta: float, delta: complex) -> UnitaryCoin:
    """Diagonal coin ``diag(e^{i eta}, delta e^{-i eta})``."""
    return make_coin(cmath.exp(1j * eta), 0.0, 0.0, delta * cmath.exp(-1j * eta))


def classify(coin: UnitaryCoin) -> CoinCase:
    """Assign the coin to one of the three cases.

    Unitarity forces ``|a| == |d|`` and ``|b| == |c|``; a pair where one
    entry is below :data:`CASE_EPS` and its partner is not is reported as
    :class:`AmbiguousCase` rather than guessed.
    """
    ma, mb, mc, md = abs(coin.a), abs(coin.b), abs(coin.c), abs(coin.d)
    for x, y, label in ((ma, md, "a/d"), (mb, mc, "b/c")):
        if (x < CASE_EPS) != (y < CASE_EPS):
            raise AmbiguousCase(
                f"entries {label} disagree about vanishing (|{label[0]}|={x:.3e}, "
                f"|{label[2]}|={y:.3e}); perturb the coin away from the boundary"
            )
    if ma < CASE_EPS:
        return CoinCase.A_ZERO
    if mb < CASE_EPS:
        return CoinCase.B_ZERO
    return CoinCase.FULL_SUPPORT


def decompose(coin: UnitaryCoin) -> CoinHalves:
    P = np.array([[coin.a, coin.b], [0, 0]], dtype=np.complex128)
    Q = np.array([[0, 0], [coin.c, coin.d]], dtype=np.complex128)
    return CoinHalves(P, Q)


def coin_angles(coin: UnitaryCoin) -> CoinAngles:
    """Return ``phi = arccos|a|`` and ``xi = arg(det)`` in ``[0, 2 pi)``.

    ``phi`` is evaluated as ``atan2(|b|, |a|)``, equal for a unitary coin and
    well conditioned when ``|a|`` is close to 1.
    """
    if classify(coin) is not CoinCase.FULL_SUPPORT:
        raise WrongCase("coin angles are defined only for full-support coins")
    phi = math.atan2(abs(coin.b), abs(coin.a))
    return CoinAngles(phi, principal_arg(coin.det))


def principal_arg(z: complex) -> float:
    """Argument of ``z`` mapped into ``[0, 2 pi)``."""
    t = cmath.phase(z)
    if t < 0.0:
        t += 2.0 * math.pi
    if t >= 2.0 * math.pi:
        t = 0.0
    return t


def _parse_complex(v: Any) -> complex:
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)):
        return complex(v)
    raise InputError(f"expected [re, im], got {v!r}")


def coin_from_json(obj: dict[str, Any], *, tol: float = UNITARY_TOL, repair: bool = False) -> UnitaryCoin:
    """Build a coin from ``{"a": [re, im], "b": ..., "c": ..., "d": ...}``."""
    try:
        entries = [_parse_complex(obj[k]) for k in "abcd"]
    except KeyError as exc:
        raise InputError(f"coin JSON missing entry {exc}") from None
    return make_coin(*entries, tol=tol, repair=repair)


def coin_from_preset(name: str) -> UnitaryCoin:
    """Resolve a named preset.

    Recognised forms: ``hadamard``, ``identity``, ``u-theta:<t>``,
    ``h-sigma:<s>``, ``azero:<eta>:<xi>``, ``bzero:<eta>:<xi>`` (angles in
    radians, ``xi`` is the argument of the determinant).
    """
    head, *args = name.strip().split(":")
    try:
        vals = [float(x) for x in args]
    except ValueError:
        raise InputError(f"bad numeric argument in coin preset {name!r}") from None
    arity = {"hadamard": 0, "identity": 0, "u-theta": 1, "h-sigma": 1, "azero": 2, "bzero": 2}
    if head not in arity:
        raise InputError(f"unknown coin preset {head!r}")
    if len(vals) != arity[head]:
        raise InputError(f"preset {head!r} takes {arity[head]} argument(s), got {len(vals)}")
    if head == "hadamard":
        return hadamard()
    if head == "identity":
        return make_coin(1, 0, 0, 1)
    if head == "u-theta":
        return u_theta(vals[0])
    if head == "h-sigma":
        return h_sigma(vals[0])
    eta, xi = vals
    delta = cmath.exp(1j * xi)
    return azero_coin(eta, delta) if head == "azero" else bzero_coin(eta, delta)


def load_coin(source: str, *, tol: float = UNITARY_TOL, repair: bool = False) -> UnitaryCoin:
    """Resolve ``source`` as a JSON file path if one exists, else as a preset."""
    path = Path(source)
    if path.suffix == ".json" or path.is_file():
        try:
            obj = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read coin file {source!r}: {exc}") from None
        return coin_from_json(obj, tol=tol, repair=repair)
    coin = coin_from_preset(source)
    if tol < UNITARY_TOL:
        coin = make_coin(coin.a, coin.b, coin.c, coin.d, tol=tol)
    return coin
