"""Stationary states for the anti-diagonal coin ``[[0, e^{i eta}], [-det e^{-i eta}, 0]]``.

Eigenvalues satisfy ``lambda^2 = -det``.  An eigenvector is fixed by two
arbitrary sequences on the even sites, ``alpha`` and ``beta``; odd sites are
slaved to them:

    psi(2x)      = (alpha_2x, beta_2x)
    psiL(2x - 1) = e^{i eta} / lambda * beta_2x
    psiR(2x + 1) = lambda e^{-i eta} * alpha_2x
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .coin import UnitaryCoin, azero_coin, principal_arg
from .errors import InputError, MissingSequenceValue, ZeroProduct
from .lattice import MeasureGenerator, StateGenerator

PRODUCT_FLOOR = 1e-12
#: Sequence moduli above this lose precision once squared.
LARGE_AMPLITUDE = 1e6


@dataclass(frozen=True)
class AZeroSpec:
    """Parameters of an a = 0 eigenvector.

    ``alpha`` and ``beta`` map even sites to values; sites absent from a map
    take ``default`` (``None`` makes absence an error).
    """

    eta: float
    delta: complex
    sign: int = 1
    alpha: Mapping[int, complex] = field(default_factory=dict)
    beta: Mapping[int, complex] = field(default_factory=dict)
    default: complex | None = 1.0

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise InputError(f"sign must be +1 or -1, got {self.sign!r}")
        if abs(abs(self.delta) - 1.0) > 1e-9:
            raise InputError(f"|delta| must be 1, got {abs(self.delta):.12f}")
        for name in ("alpha", "beta"):
            m = {int(k): complex(v) for k, v in getattr(self, name).items()}
            odd = [k for k in m if k % 2]
            if odd:
                raise InputError(f"{name} has entries at odd sites {sorted(odd)}")
            object.__setattr__(self, name, m)
        if self.default is not None:
            object.__setattr__(self, "default", complex(self.default))
        for s in set(self.alpha) | set(self.beta):
            self._check_pair(s)

    def value(self, name: str, site: int) -> complex:
        m = self.alpha if name == "alpha" else self.beta
        if site in m:
            return m[site]
        if self.default is None:
            raise MissingSequenceValue(f"{name}_{site} is not specified and no default is set")
        return self.default

    def _check_pair(self, site: int) -> None:
        a, b = self.value("alpha", site), self.value("beta", site)
        if abs(a * b) < PRODUCT_FLOOR:
            raise ZeroProduct(f"alpha_{site} * beta_{site} = 0")

    def max_modulus(self) -> float:
        vals = [abs(v) for v in list(self.alpha.values()) + list(self.beta.values())]
        if self.default is not None:
            vals.append(abs(self.default))
        return max(vals, default=0.0)

    @property
    def coin(self) -> UnitaryCoin:
        return azero_coin(self.eta, self.delta)

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> AZeroSpec:
        """Parse ``{"eta", "delta": [re, im], "sign": "+"|"-", "alpha", "beta", "default"}``."""

        def cplx(v: Any) -> complex:
            if isinstance(v, (list, tuple)) and len(v) == 2:
                return complex(float(v[0]), float(v[1]))
            if isinstance(v, (int, float)):
                return complex(v)
            raise InputError(f"expected [re, im], got {v!r}")

        try:
            sign_raw = obj.get("sign", "+")
            sign = {"+": 1, "-": -1, "−": -1, 1: 1, -1: -1}[sign_raw]
        except KeyError:
            raise InputError(f"sign must be '+' or '-', got {obj.get('sign')!r}") from None
        default = obj.get("default", [1.0, 0.0])
        return cls(
            eta=float(obj.get("eta", 0.0)),
            delta=cplx(obj.get("delta", [1.0, 0.0])),
            sign=sign,
            alpha={int(k): cplx(v) for k, v in obj.get("alpha", {}).items()},
            beta={int(k): cplx(v) for k, v in obj.get("beta", {}).items()},
            default=None if default is None else cplx(default),
        )


def azero_lambda(spec: AZeroSpec) -> complex:
    """``sign * i * sqrt(det)`` on the principal branch ``arg(det) in [0, 2 pi)``."""
    return spec.sign * 1j * cmath.exp(0.5j * principal_arg(spec.delta))


def _seq(spec: AZeroSpec, name: str, sites: np.ndarray) -> np.ndarray:
    out = np.empty(sites.shape[0], dtype=np.complex128)
    for i, s in enumerate(sites.tolist()):
        out[i] = spec.value(name, s)
    return out


def _check_products(spec: AZeroSpec, even_sites: np.ndarray) -> None:
    for s in np.unique(even_sites).tolist():
        spec._check_pair(s)


def azero_amplitudes(spec: AZeroSpec, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    lam = azero_lambda(spec)
    e = cmath.exp(1j * spec.eta)
    even = x % 2 == 0
    odd = ~even
    # even site 2k: (alpha_2k, beta_2k); odd site 2k+1: L from beta_{2k+2}, R from alpha_2k
    base = x - (x % 2)
    _check_products(spec, np.concatenate([base, base[odd] + 2]))
    out = np.empty((x.shape[0], 2), dtype=np.complex128)
    out[even, 0] = _seq(spec, "alpha", x[even])
    out[even, 1] = _seq(spec, "beta", x[even])
    out[odd, 0] = (e / lam) * _seq(spec, "beta", base[odd] + 2)
    out[odd, 1] = lam * e.conjugate() * _seq(spec, "alpha", base[odd])
    return out


def build_stationary_azero(spec: AZeroSpec) -> StateGenerator:
    return StateGenerator(
        lambda x: azero_amplitudes(spec, x),
        "a-zero",
        {"lambda": azero_lambda(spec), "eta": spec.eta, "delta": spec.delta, "sign": spec.sign},
    )


def azero_measure_values(spec: AZeroSpec, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    base = x - (x % 2)
    _check_products(spec, np.concatenate([base, base[x % 2 == 1] + 2]))
    beta_site = np.where(x % 2 == 0, base, base + 2)
    al, be = _seq(spec, "alpha", base), _seq(spec, "beta", beta_site)
    return (al.real ** 2 + al.imag ** 2) + (be.real ** 2 + be.imag ** 2)


def azero_measure(spec: AZeroSpec) -> MeasureGenerator:
    """``mu(2x) = |alpha_2x|^2 + |beta_2x|^2``, ``mu(2x+1) = |alpha_2x|^2 + |beta_{2x+2}|^2``."""
    return MeasureGenerator(lambda x: azero_measure_values(spec, x), "a-zero", {"sign": spec.sign})


def precision_warning(spec: AZeroSpec) -> str | None:
    m = spec.max_modulus()
    if m > LARGE_AMPLITUDE:
        return f"sequence modulus {m:.3g} exceeds {LARGE_AMPLITUDE:.0e}; squared moduli lose precision"
    return None


def azero_lambda_squared_residual(spec: AZeroSpec) -> float:
    lam = azero_lambda(spec)
    return abs(lam * lam + spec.delta)

