import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwstat.azero import AZeroSpec, azero_lambda, build_stationary_azero
from qwstat.bzero import counterexample_generator
from qwstat.coin import bzero_coin
from qwstat.errors import NonPositive, PreconditionError
from qwstat.lattice import AmplitudeField, Measure, sample_window, uniform_generator
from qwstat.sampling import random_coin, random_full_support_coin
from qwstat.spectral import build_stationary_full, lambda_k
from qwstat.verify import (
    algebraic_checks,
    decay_classify,
    eigen_residual,
    identity_residuals,
    membership_check,
    membership_level,
    report_json,
)


def test_eigen_residual_full(H):
    lam = lambda_k(H, 2)
    f = sample_window(build_stationary_full(H, lam, 0.5, 1), -20, 20)
    rep = eigen_residual(H, lam, f)
    assert rep.max_eigen_residual < 1e-12
    assert set(rep.per_site) == set(range(-19, 20))


def test_eigen_residual_azero():
    spec = AZeroSpec(0.4, np.exp(0.9j), -1, alpha={0: 2, 2: 0.3j}, beta={-2: 5})
    f = sample_window(build_stationary_azero(spec), -20, 20)
    assert eigen_residual(spec.coin, azero_lambda(spec), f).max_eigen_residual < 1e-12


def test_eigen_residual_localises_perturbation(H):
    lam = lambda_k(H, 1)
    f = sample_window(build_stationary_full(H, lam, 1, 0), -20, 20)
    vals = f.values.copy()
    vals[20, 0] += 1e-3
    rep = eigen_residual(H, lam, AmplitudeField(-20, 20, vals))
    assert 1e-4 <= rep.max_eigen_residual <= 1e-2
    bad = {x for x, r in rep.per_site.items() if r > 1e-10}
    assert bad <= {-1, 0, 1} and bad


def test_eigen_residual_window(H):
    with pytest.raises(PreconditionError):
        eigen_residual(H, 1, AmplitudeField(0, 1, np.zeros((2, 2))))


def test_algebraic_checks_hadamard(H):
    rep = algebraic_checks(H)
    assert set(rep.identities) == {
        "unit-gamma", "gamma-squared", "double-root-h", "double-root-charpoly",
        "right-amplitude-norm", "cos-two-phi",
    }
    assert max(rep.identities.values()) < 1e-12 and rep.passed


def test_non_eigenvalue_rejected(H):
    r = identity_residuals(H, 1 + 0j)
    assert r["double-root-h"] >= 0.1 and r["double-root-charpoly"] >= 0.1


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_algebraic_sweep(seed):
    assert algebraic_checks(random_full_support_coin(np.random.default_rng(seed))).passed


def test_membership_full(H):
    gen = build_stationary_full(H, lambda_k(H, 4), 0.3, 0.2)
    assert membership_check(H, gen, 100, -10, 10, 1e-10) == 100


def test_membership_unbounded_lift():
    assert membership_check(bzero_coin(0, 1), counterexample_generator("unbounded"), 10, -6, 6) == 1


def test_membership_uniform(rng):
    c = random_coin(rng)
    assert membership_check(c, uniform_generator([0.6, 0.8j]), 100, -10, 10) == 100


def test_membership_n_max(H):
    with pytest.raises(PreconditionError):
        membership_check(H, uniform_generator([1, 0]), 0, 0, 1)


def test_membership_level_monotone_in_tol():
    series = np.array([[1.0, 1.0], [1.0, 1.0 + 1e-9], [1.0, 1.0 + 1e-6], [1.0, 2.0]])
    levels = [membership_level(series, t) for t in (1e-12, 1e-8, 1e-5, 10.0)]
    assert levels == [0, 1, 2, 3]


def test_decay_constant():
    assert decay_classify(Measure(-10, 10, np.full(21, 2.0))).kind == "uniform"


def test_decay_quadratic():
    x = np.arange(-50, 51)
    d = decay_classify(Measure(-50, 50, 2.0 * x * x - 2 * x + 2))
    assert d.kind == "polynomial" and abs(d.estimate - 2) <= 0.1


def test_decay_exponential():
    x = np.arange(-30, 31)
    d = decay_classify(Measure(-30, 30, 2.0 ** np.abs(x)))
    assert d.kind == "exponential" and abs(d.estimate - math.log(2)) <= 0.05


def test_decay_preconditions():
    with pytest.raises(PreconditionError):
        decay_classify(Measure(-3, 3, np.ones(7) + np.arange(7)))
    with pytest.raises(PreconditionError):
        decay_classify(Measure(-4, 5, np.arange(10.0) + 1))
    with pytest.raises(NonPositive):
        decay_classify(Measure(-5, 5, np.r_[np.zeros(2), np.arange(9.0) + 1]))


def test_report_json(H):
    rep = algebraic_checks(H)
    out = report_json(rep, 7, decay_classify(Measure(-5, 5, np.full(11, 1.0))))
    assert out["membership_level"] == 7 and out["decay"] == "uniform" and out["passed"]
