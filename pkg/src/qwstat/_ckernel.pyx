# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled evolution kernels; same contract as ``qwstat._pykernel``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef double complex cplx


cdef inline void _step(const cplx[:, ::1] cur, cplx[:, ::1] out, const cplx[:, ::1] U,
                       const long[::1] offsets, Py_ssize_t left, Py_ssize_t out_len) noexcept nogil:
    # real arithmetic: C99 complex products go through the slow NaN-safe path
    cdef Py_ssize_t n = U.shape[0]
    cdef Py_ssize_t i, j, k, s
    cdef double re, im, ur, ui, vr, vi
    for k in range(n):
        s = left - offsets[k]
        for i in range(out_len):
            re = 0.0
            im = 0.0
            for j in range(n):
                ur = U[k, j].real
                ui = U[k, j].imag
                vr = cur[s + i, j].real
                vi = cur[s + i, j].imag
                re = re + (ur * vr - ui * vi)
                im = im + (ur * vi + ui * vr)
            out[i, k].real = re
            out[i, k].imag = im


def _prepare(values, U, offsets):
    v = np.ascontiguousarray(values, dtype=np.complex128)
    u = np.ascontiguousarray(U, dtype=np.complex128)
    off = np.ascontiguousarray(offsets, dtype=np.int_)
    left = max(int(off.max()), 0)
    right = max(-int(off.min()), 0)
    return v, u, off, left, right


def evolve_window(values, U, offsets, int steps):
    cdef Py_ssize_t left, right
    v, u, off, left, right = _prepare(values, U, offsets)
    cdef Py_ssize_t m = v.shape[0]
    cdef Py_ssize_t n = v.shape[1]
    cdef Py_ssize_t shrink = left + right
    if m - steps * shrink < 1:
        raise ValueError("window too small for requested steps")
    a = v.copy()
    b = np.empty_like(a)
    cdef cplx[:, ::1] src = a
    cdef cplx[:, ::1] dst = b
    cdef cplx[:, ::1] tmp
    cdef const cplx[:, ::1] uu = u
    cdef const long[::1] oo = off
    cdef Py_ssize_t length = m
    cdef int t
    with nogil:
        for t in range(steps):
            _step(src[:length], dst, uu, oo, left, length - shrink)
            length -= shrink
            tmp = src
            src = dst
            dst = tmp
    return np.asarray(src)[:length].copy()


def measure_series(values, U, offsets, int steps, Py_ssize_t start, Py_ssize_t length):
    cdef Py_ssize_t left, right
    v, u, off, left, right = _prepare(values, U, offsets)
    cdef Py_ssize_t m = v.shape[0]
    cdef Py_ssize_t n = v.shape[1]
    cdef Py_ssize_t shrink = left + right
    if start - steps * left < 0 or start + length + steps * right > m:
        raise ValueError("target window leaves the light cone")
    out_arr = np.empty((steps + 1, length), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    a = v.copy()
    b = np.empty_like(a)
    cdef cplx[:, ::1] src = a
    cdef cplx[:, ::1] dst = b
    cdef cplx[:, ::1] tmp
    cdef const cplx[:, ::1] uu = u
    cdef const long[::1] oo = off
    cdef Py_ssize_t cur_len = m
    cdef Py_ssize_t i, j, s
    cdef int t
    cdef double acc
    with nogil:
        for t in range(steps + 1):
            if t:
                _step(src[:cur_len], dst, uu, oo, left, cur_len - shrink)
                cur_len -= shrink
                tmp = src
                src = dst
                dst = tmp
            s = start - t * left
            for i in range(length):
                acc = 0.0
                for j in range(n):
                    acc = acc + (src[s + i, j].real * src[s + i, j].real
                                 + src[s + i, j].imag * src[s + i, j].imag)
                out[t, i] = acc
    return out_arr
