"""Pure numpy evolution kernels (fallback for the compiled extension).

Both kernels take the window as a ``(m, N)`` complex array, the coin as an
``(N, N)`` matrix and per-component jump offsets.  Output component ``k`` at
site ``x`` is ``sum_j U[k, j] * psi_j(x - offsets[k])``; each step shrinks
the window by ``max(offsets)`` on the left and ``-min(offsets)`` on the right.
"""

from __future__ import annotations

import numpy as np


def _shrink(offsets: np.ndarray) -> tuple[int, int]:
    return max(int(offsets.max()), 0), max(-int(offsets.min()), 0)


def _step(cur: np.ndarray, U: np.ndarray, offsets: np.ndarray, left: int, right: int) -> np.ndarray:
    m, n = cur.shape
    out_len = m - left - right
    out = np.empty((out_len, n), dtype=np.complex128)
    for k in range(n):
        s = left - int(offsets[k])
        rows = cur[s:s + out_len]
        acc = U[k, 0] * rows[:, 0]
        for j in range(1, n):
            acc = acc + U[k, j] * rows[:, j]
        out[:, k] = acc
    return out


def evolve_window(values: np.ndarray, U: np.ndarray, offsets: np.ndarray, steps: int) -> np.ndarray:
    left, right = _shrink(offsets)
    if values.shape[0] - steps * (left + right) < 1:
        raise ValueError("window too small for requested steps")
    cur = values
    for _ in range(steps):
        cur = _step(cur, U, offsets, left, right)
    return np.array(cur, dtype=np.complex128, copy=True)


def measure_series(
    values: np.ndarray, U: np.ndarray, offsets: np.ndarray, steps: int, start: int, length: int
) -> np.ndarray:
    left, right = _shrink(offsets)
    m = values.shape[0]
    if start - steps * left < 0 or start + length + steps * right > m:
        raise ValueError("target window leaves the light cone")
    out = np.empty((steps + 1, length), dtype=np.float64)
    cur = values
    for k in range(steps + 1):
        if k:
            cur = _step(cur, U, offsets, left, right)
        s = start - k * left
        blk = cur[s:s + length]
        out[k] = (blk.real ** 2 + blk.imag ** 2).sum(axis=1)
    return out
