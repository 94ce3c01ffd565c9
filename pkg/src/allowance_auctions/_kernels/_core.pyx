# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Mirrors ``_fallback`` exactly."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, INFINITY
from libc.stdint cimport int64_t, uint8_t

cnp.import_array()

cdef double TOL = 1e-9


cdef inline bint _leq(double a, double b) nogil:
    cdef double s = fabs(b)
    if s < 1.0:
        s = 1.0
    return a <= b + TOL * s


cdef inline Py_ssize_t _best(double v, double g, const double[:] prices,
                             const double[:] ctrs, uint8_t[:] available) nogil:
    cdef Py_ssize_t j, best = -1
    cdef Py_ssize_t k = ctrs.shape[0]
    cdef double a, pay, obtained, excess, u, best_u = -INFINITY
    for j in range(k):
        if not available[j]:
            continue
        a = ctrs[j]
        pay = prices[j] * a
        obtained = v * a
        if not _leq(pay, obtained):
            continue
        excess = pay - g
        if excess < 0.0:
            excess = 0.0
        u = obtained - excess
        if u > best_u:
            best = j
            best_u = u
    if best >= 0 and best_u >= 0.0:
        return best
    return -1


def best_slot(double value, double allowance, unit_prices, ctrs, available):
    cdef uint8_t[:] av = np.asarray(available, dtype=np.uint8).copy()
    return int(_best(value, allowance,
                     np.asarray(unit_prices, dtype=np.float64),
                     np.asarray(ctrs, dtype=np.float64), av))


def sequential_purchase(order, values, allowances, unit_prices, ctrs):
    cdef const int64_t[:] o = np.ascontiguousarray(order, dtype=np.int64)
    cdef const double[:] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef const double[:] g = np.ascontiguousarray(allowances, dtype=np.float64)
    cdef const double[:] p = np.ascontiguousarray(unit_prices, dtype=np.float64)
    cdef const double[:] a = np.ascontiguousarray(ctrs, dtype=np.float64)
    cdef Py_ssize_t n = v.shape[0], k = a.shape[0]
    assignment_arr = np.full(n, -1, dtype=np.int64)
    payments_arr = np.zeros(n, dtype=np.float64)
    available_arr = np.ones(k, dtype=np.uint8)
    cdef int64_t[:] assignment = assignment_arr
    cdef double[:] payments = payments_arr
    cdef uint8_t[:] available = available_arr
    cdef Py_ssize_t idx, i, j, remaining = k
    with nogil:
        for idx in range(o.shape[0]):
            if remaining == 0:
                break
            i = o[idx]
            j = _best(v[i], g[i], p, a, available)
            if j >= 0:
                available[j] = 0
                remaining -= 1
                assignment[i] = j
                payments[i] = p[j] * a[j]
    return assignment_arr, payments_arr


def batch_rank_matching(w, masks):
    cdef const double[:] ww = np.ascontiguousarray(w, dtype=np.float64)
    cdef const uint8_t[:, :] m = np.ascontiguousarray(masks, dtype=np.uint8)
    cdef Py_ssize_t rows = m.shape[0], ell = m.shape[1]
    out_arr = np.empty(rows, dtype=np.float64)
    cdef double[:] out = out_arr
    cdef Py_ssize_t r, ia, ib
    cdef double total
    with nogil:
        for r in range(rows):
            total = 0.0
            ia = 0
            ib = 0
            while True:
                while ia < ell and not m[r, ia]:
                    ia += 1
                while ib < ell and m[r, ib]:
                    ib += 1
                if ia >= ell or ib >= ell:
                    break
                # w is descending: the later position holds the smaller number
                if ia > ib:
                    total += ww[ia]
                else:
                    total += ww[ib]
                ia += 1
                ib += 1
            out[r] = total
    return out_arr
