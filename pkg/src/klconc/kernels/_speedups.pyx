# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels.

Mirrors ``_pyfallback`` exactly: same signatures, same enumeration
order, same conventions.  Only speed differs.
"""

from libc.math cimport lgamma, log, log1p, exp, INFINITY
from libc.stdlib cimport malloc, free

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


def enumerate_divergence(int n, double[::1] probs):
    """Enumerate all compositions of n into k parts in ascending
    lexicographic order, returning per-atom divergence values and
    multinomial probabilities.

    Returns ``(values, atom_probs, atom_logprobs)`` as float64 arrays of
    length C(n+k-1, k-1).  All entries of ``probs`` must be positive.
    """
    cdef Py_ssize_t k = probs.shape[0]
    import math
    cdef Py_ssize_t m = math.comb(n + k - 1, k - 1)

    values_arr = np.empty(m, dtype=np.float64)
    logprobs_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] values = values_arr
    cdef double[::1] logprobs = logprobs_arr

    cdef double *logp = <double *> malloc(k * sizeof(double))
    cdef double *lgam = <double *> malloc((n + 1) * sizeof(double))
    cdef double *logi = <double *> malloc((n + 1) * sizeof(double))
    cdef long *c = <long *> malloc(k * sizeof(long))
    if logp == NULL or lgam == NULL or logi == NULL or c == NULL:
        free(logp); free(lgam); free(logi); free(c)
        raise MemoryError()

    cdef Py_ssize_t i, j, t, idx
    cdef long cj, moved
    cdef double lp, v, logn, lg_n
    try:
        for j in range(k):
            logp[j] = log(probs[j])
        for i in range(n + 1):
            lgam[i] = lgamma(i + 1.0)
        logi[0] = 0.0
        for i in range(1, n + 1):
            logi[i] = log(<double> i)
        logn = log(<double> n)
        lg_n = lgam[n]

        for j in range(k):
            c[j] = 0
        c[k - 1] = n
        idx = 0
        while True:
            lp = lg_n
            v = 0.0
            for j in range(k):
                cj = c[j]
                if cj:
                    lp += cj * logp[j] - lgam[cj]
                    v += (<double> cj / n) * (logi[cj] - logn - logp[j])
            values[idx] = v if v > 0.0 else 0.0
            logprobs[idx] = lp
            idx += 1
            j = k - 2
            moved = c[k - 1]
            while j >= 0 and moved == 0:
                moved += c[j]
                j -= 1
            if j < 0:
                break
            moved = 0
            for t in range(j + 1, k):
                moved += c[t]
            c[j] += 1
            for t in range(j + 1, k - 1):
                c[t] = 0
            c[k - 1] = moved - 1

        assert idx == m, (idx, m)
    finally:
        free(logp); free(lgam); free(logi); free(c)

    return values_arr, np.exp(logprobs_arr), logprobs_arr


cdef void _fill_tables(int n, double *logc, double *log_peak) nogil:
    cdef int i
    cdef double lg_n = lgamma(n + 1.0)
    for i in range(n + 1):
        logc[i] = lg_n - lgamma(i + 1.0) - lgamma(n - i + 1.0)
    log_peak[0] = 0.0
    log_peak[n] = 0.0
    for i in range(1, n):
        log_peak[i] = (logc[i] + i * (log(<double> i) - log(<double> n))
                       + (n - i) * log1p(-(<double> i) / n))


cdef double _kl_mgf_one(int n, double p, double x,
                        double *logc, double *log_peak) nogil:
    cdef int i
    cdef double s, lq, l1q
    if p <= 0.0 or p >= 1.0:
        return 1.0
    lq = log(p)
    l1q = log1p(-p)
    s = 0.0
    for i in range(n + 1):
        s += exp((1.0 - x) * (logc[i] + i * lq + (n - i) * l1q) + x * log_peak[i])
    return s


cdef double _half_mgf_one(int n, double p, double x,
                          double *logc, double *log_peak) nogil:
    cdef int i
    cdef double s, lq, l1q, lpmf
    if p <= 0.0 or p >= 1.0:
        return 1.0
    lq = log(p)
    l1q = log1p(-p)
    s = 0.0
    for i in range(n + 1):
        lpmf = logc[i] + i * lq + (n - i) * l1q
        if (<double> i / n) > p:
            s += exp((1.0 - x) * lpmf + x * log_peak[i])
        else:
            s += exp(lpmf)
    return s


def binom_kl_mgf(int n, double p, double x):
    """Exact E[exp(n*x*KL(B/n || p))] for B ~ Binom(n, p)."""
    cdef double *logc = <double *> malloc((n + 1) * sizeof(double))
    cdef double *log_peak = <double *> malloc((n + 1) * sizeof(double))
    if logc == NULL or log_peak == NULL:
        free(logc); free(log_peak)
        raise MemoryError()
    cdef double out
    try:
        _fill_tables(n, logc, log_peak)
        out = _kl_mgf_one(n, p, x, logc, log_peak)
    finally:
        free(logc); free(log_peak)
    return out


def binom_half_mgf(int n, double p, double x):
    """Exact E[exp(n*x*D(B/n || p))] with D the upper-branch binary KL."""
    cdef double *logc = <double *> malloc((n + 1) * sizeof(double))
    cdef double *log_peak = <double *> malloc((n + 1) * sizeof(double))
    if logc == NULL or log_peak == NULL:
        free(logc); free(log_peak)
        raise MemoryError()
    cdef double out
    try:
        _fill_tables(n, logc, log_peak)
        out = _half_mgf_one(n, p, x, logc, log_peak)
    finally:
        free(logc); free(log_peak)
    return out


def binom_kl_mgf_grid(int n, double[::1] ps, double x):
    """``binom_kl_mgf`` over a grid of p values."""
    cdef Py_ssize_t np_ = ps.shape[0]
    out_arr = np.empty(np_, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double *logc = <double *> malloc((n + 1) * sizeof(double))
    cdef double *log_peak = <double *> malloc((n + 1) * sizeof(double))
    if logc == NULL or log_peak == NULL:
        free(logc); free(log_peak)
        raise MemoryError()
    cdef Py_ssize_t j
    try:
        with nogil:
            _fill_tables(n, logc, log_peak)
            for j in range(np_):
                out[j] = _kl_mgf_one(n, ps[j], x, logc, log_peak)
    finally:
        free(logc); free(log_peak)
    return out_arr


def binom_half_mgf_grid(int n, double[::1] ps, double x):
    """``binom_half_mgf`` over a grid of p values."""
    cdef Py_ssize_t np_ = ps.shape[0]
    out_arr = np.empty(np_, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double *logc = <double *> malloc((n + 1) * sizeof(double))
    cdef double *log_peak = <double *> malloc((n + 1) * sizeof(double))
    if logc == NULL or log_peak == NULL:
        free(logc); free(log_peak)
        raise MemoryError()
    cdef Py_ssize_t j
    try:
        with nogil:
            _fill_tables(n, logc, log_peak)
            for j in range(np_):
                out[j] = _half_mgf_one(n, ps[j], x, logc, log_peak)
    finally:
        free(logc); free(log_peak)
    return out_arr
