import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwstat import _backend, _pykernel
from qwstat.nstate import jump_offsets
from qwstat.sampling import random_unitary

from oracles import dense_step


def _field(rng, m, n):
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_evolve_matches_dense_oracle(kernel, rng, N):
    U = random_unitary(N, rng)
    offs = jump_offsets(N)
    vals = _field(rng, 60, N)
    ref = vals
    for _ in range(5):
        ref = dense_step(U, ref, list(offs))
    np.testing.assert_allclose(kernel.evolve_window(vals, U, offs, 5), ref, atol=1e-13)


def test_measure_series_rows_match_evolve(kernel, rng):
    U = random_unitary(2, rng)
    offs = jump_offsets(2)
    vals = _field(rng, 41, 2)
    series = kernel.measure_series(vals, U, offs, 10, 15, 11)
    for n in range(11):
        w = kernel.evolve_window(vals, U, offs, n)[15 - n:15 - n + 11]
        np.testing.assert_allclose(series[n], (np.abs(w) ** 2).sum(axis=1), rtol=1e-14)


def test_backends_agree(rng):
    # complex products round differently between numpy and C, so not bitwise
    pytest.importorskip("qwstat._ckernel")
    from qwstat import _ckernel

    for N in (2, 3, 4):
        U = random_unitary(N, rng)
        offs = jump_offsets(N)
        vals = _field(rng, 200, N)
        a = _pykernel.evolve_window(vals, U, offs, 20)
        b = _ckernel.evolve_window(vals, U, offs, 20)
        np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)
        sa = _pykernel.measure_series(vals, U, offs, 20, 60, 50)
        sb = _ckernel.measure_series(vals, U, offs, 20, 60, 50)
        np.testing.assert_allclose(sa, sb, rtol=1e-12)


def test_window_too_small_rejected(kernel):
    U = np.eye(2, dtype=complex)
    with pytest.raises(ValueError):
        kernel.evolve_window(np.zeros((3, 2), complex), U, jump_offsets(2), 2)
    with pytest.raises(ValueError):
        kernel.measure_series(np.zeros((5, 2), complex), U, jump_offsets(2), 2, 1, 3)


def test_zero_steps_is_copy(kernel, rng):
    vals = _field(rng, 7, 2)
    out = kernel.evolve_window(vals, np.eye(2, dtype=complex), jump_offsets(2), 0)
    assert np.array_equal(out, vals) and out is not vals


def test_backend_selection():
    assert _backend.BACKEND in ("cython", "python")


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 12))
def test_norm_conservation_on_light_cone(seed, n):
    # a compactly supported field stays inside the window and keeps its norm
    rng = np.random.default_rng(seed)
    U = random_unitary(2, rng)
    vals = np.zeros((2 * n + 2 * 5 + 1 + 2 * n, 2), complex)
    c = vals.shape[0] // 2
    vals[c - 2:c + 3] = _field(rng, 5, 2)
    out = _backend.evolve_window(vals, U, jump_offsets(2), n)
    assert abs((abs(out) ** 2).sum() - (abs(vals) ** 2).sum()) < 1e-12 * (abs(vals) ** 2).sum()
