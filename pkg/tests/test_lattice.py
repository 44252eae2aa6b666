import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwstat.coin import make_coin
from qwstat.errors import PreconditionError, WindowTooSmall
from qwstat.lattice import (
    AmplitudeField,
    Measure,
    StateGenerator,
    TWO_STATE_OFFSETS,
    delta_generator,
    evolve,
    evolve_measures,
    measure_csv_text,
    read_measure_csv,
    sample_window,
    step,
    to_measure,
    uniform_generator,
    write_field_csv,
)
from qwstat.sampling import random_coin

from oracles import dense_step

S = 1 / math.sqrt(2)


def test_step_zero_field(H):
    out = step(H, AmplitudeField(-3, 3, np.zeros((7, 2))))
    assert (out.lo, out.hi) == (-2, 2)
    assert not out.values.any()


def test_step_delta(H):
    f = sample_window(delta_generator([1, 0]), -2, 2)
    out = step(H, f)
    assert (out.lo, out.hi) == (-1, 1)
    np.testing.assert_allclose(out.at(-1), [S, 0], atol=1e-16)
    np.testing.assert_allclose(out.at(0), [0, 0], atol=1e-16)
    np.testing.assert_allclose(out.at(1), [0, S], atol=1e-16)


def test_step_constant_field(rng):
    U = random_coin(rng)
    phi = np.array([0.3 + 0.1j, -0.7j])
    out = step(U, sample_window(uniform_generator(phi), -4, 4))
    for row in out.values:
        np.testing.assert_allclose(row, U.matrix @ phi, atol=1e-15)


def test_step_window_too_small(H):
    with pytest.raises(WindowTooSmall):
        step(H, AmplitudeField(0, 1, np.zeros((2, 2))))


def test_evolve_zero_steps(H):
    gen = uniform_generator([1, 2j])
    out = evolve(H, gen, 0, -3, 3)
    np.testing.assert_array_equal(out.values, sample_window(gen, -3, 3).values)


def test_evolve_delta_two_steps(H):
    out = evolve(H, delta_generator([1, 0]), 2, -2, 2)
    expected = {-2: [0.5, 0], -1: [0, 0], 0: [0.5, 0.5], 1: [0, 0], 2: [0, -0.5]}
    for x, v in expected.items():
        np.testing.assert_allclose(out.at(x), v, atol=1e-15)


def test_evolve_negative_n(H):
    with pytest.raises(PreconditionError):
        evolve(H, uniform_generator([1, 0]), -1, 0, 0)


def test_evolve_matches_dense_oracle(rng):
    U = random_coin(rng)
    vals = rng.standard_normal((31, 2)) + 1j * rng.standard_normal((31, 2))
    gen = StateGenerator(lambda x: vals[x + 15])
    ref = vals
    for _ in range(6):
        ref = dense_step(U.matrix, ref, [-1, 1])
    np.testing.assert_allclose(evolve(U, gen, 6, -9, 9).values, ref, atol=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 10))
def test_light_cone_window_independence(seed, n):
    # the same sites computed from a wider initial window agree bit for bit
    rng = np.random.default_rng(seed)
    U = random_coin(rng)
    vals = rng.standard_normal((61, 2)) + 1j * rng.standard_normal((61, 2))
    gen = StateGenerator(lambda x: vals[x + 30])
    narrow = evolve(U, gen, n, -3, 3)
    wide = evolve(U, gen, n, -15, 15).restrict(-3, 3)
    assert np.array_equal(narrow.values, wide.values)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_linearity(seed):
    rng = np.random.default_rng(seed)
    U = random_coin(rng)
    f = rng.standard_normal((21, 2)) + 1j * rng.standard_normal((21, 2))
    g = rng.standard_normal((21, 2)) + 1j * rng.standard_normal((21, 2))
    z = complex(*rng.standard_normal(2))
    lhs = step(U, AmplitudeField(0, 20, f + z * g)).values
    rhs = step(U, AmplitudeField(0, 20, f)).values + z * step(U, AmplitudeField(0, 20, g)).values
    np.testing.assert_allclose(lhs, rhs, atol=1e-13)


def test_evolve_measures_consistent(rng):
    U = random_coin(rng)
    vals = rng.standard_normal((41, 2)) + 1j * rng.standard_normal((41, 2))
    gen = StateGenerator(lambda x: vals[x + 20])
    ms = evolve_measures(U, gen, 8, -5, 5)
    for n, m in enumerate(ms):
        np.testing.assert_allclose(m.values, to_measure(evolve(U, gen, n, -5, 5)).values, rtol=1e-14)


def test_to_measure_examples():
    m = to_measure(AmplitudeField(0, 1, [[0.6, 0.8j], [0, 0]]))
    assert m.at(0) == pytest.approx(1.0, abs=1e-15)
    assert m.at(1) == 0.0


def test_sample_window_uniform():
    f = sample_window(uniform_generator([1, 2]), 0, 2)
    assert f.values.shape == (3, 2)
    assert (f.values == [1, 2]).all()


def test_fields_are_read_only():
    f = AmplitudeField(0, 0, [[1, 2]])
    with pytest.raises(ValueError):
        f.values[0, 0] = 3


def test_field_validation():
    with pytest.raises(PreconditionError):
        AmplitudeField(0, 2, np.zeros((2, 2)))
    with pytest.raises(PreconditionError):
        AmplitudeField(0, 0, [[np.nan, 0]])
    with pytest.raises(PreconditionError):
        Measure(0, 0, [-1.0])


def test_restrict_and_at():
    f = AmplitudeField(-2, 2, np.arange(10).reshape(5, 2))
    assert f.restrict(0, 1).at(1)[0] == 6
    with pytest.raises(IndexError):
        f.at(3)
    with pytest.raises(WindowTooSmall):
        f.restrict(-3, 0)


def test_measure_csv_round_trip():
    m = Measure(-2, 2, [0.1, 1 / 3, 2.0, 1e-300, 7.0])
    text = measure_csv_text(m)
    assert text.splitlines()[0] == "x,mu"
    back = read_measure_csv(io.StringIO(text))
    assert back.lo == -2 and np.array_equal(back.values, m.values)


def test_read_measure_csv_rejects_bad_input():
    with pytest.raises(PreconditionError):
        read_measure_csv(io.StringIO("a,b\n0,1\n"))
    with pytest.raises(PreconditionError):
        read_measure_csv(io.StringIO("x,mu\n0,1\n2,1\n"))


def test_field_csv():
    buf = io.StringIO()
    write_field_csv(AmplitudeField(0, 0, [[1 + 2j, complex(0, -0.5)]]), buf)
    assert buf.getvalue().splitlines() == ["x,psiL_re,psiL_im,psiR_re,psiR_im", "0,1,2,0,-0.5"]


def test_two_state_offsets():
    assert list(TWO_STATE_OFFSETS) == [-1, 1]


def test_identity_coin_is_pure_shift():
    I = make_coin(1, 0, 0, 1)
    vals = np.arange(14, dtype=complex).reshape(7, 2)
    out = step(I, AmplitudeField(0, 6, vals)).values
    np.testing.assert_array_equal(out[:, 0], vals[2:, 0])
    np.testing.assert_array_equal(out[:, 1], vals[:-2, 1])
