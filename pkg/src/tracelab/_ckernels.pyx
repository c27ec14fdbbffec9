# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Mirrors ``tracelab._pykernels`` exactly."""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange

cnp.import_array()


def corr_batch(khat, inv, a, b, c, d, int nthreads=1):
    cdef const double complex[::1] kh = np.ascontiguousarray(khat, dtype=np.complex128)
    cdef const long long[::1] iv = np.ascontiguousarray(inv, dtype=np.int64)
    cdef const long long[::1] av = np.ascontiguousarray(a, dtype=np.int64)
    cdef const long long[::1] bv = np.ascontiguousarray(b, dtype=np.int64)
    cdef const long long[::1] cv = np.ascontiguousarray(c, dtype=np.int64)
    cdef const long long[::1] dv = np.ascontiguousarray(d, dtype=np.int64)
    cdef Py_ssize_t n = av.shape[0]
    cdef long long p = kh.shape[0]
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] ov = out
    cdef Py_ssize_t i
    cdef long long z, den, num, w
    cdef double re, im, kr, ki, wr, wi
    if nthreads < 1:
        nthreads = 1
    for i in prange(n, nogil=True, schedule="static", num_threads=nthreads):
        re = 0.0
        im = 0.0
        # den = (c z + d) mod p and num = (a z + b) mod p, advanced incrementally
        den = dv[i]
        num = bv[i]
        for z in range(p):
            if den != 0:
                w = (num * iv[den]) % p
                wr = kh[w].real
                wi = kh[w].imag
                kr = kh[z].real
                ki = kh[z].imag
                # khat[w] * conj(khat[z])
                re = re + (wr * kr + wi * ki)
                im = im + (wi * kr - wr * ki)
            den = den + cv[i]
            if den >= p:
                den = den - p
            num = num + av[i]
            if num >= p:
                num = num - p
        ov[i] = re + 1j * im
    return out
