# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: left power iteration and the exchange ledger."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


def power_iterate(const double[:, ::1] A, double shift, double tol, long max_iter,
                  Py_ssize_t numeraire):
    cdef Py_ssize_t n = A.shape[0]
    cdef Py_ssize_t i, j
    cdef long it = 0
    cdef double s, scale, diff, d
    cdef bint converged = False
    x_arr = np.ones(n, dtype=np.float64)
    y_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] x = x_arr
    cdef double[::1] y = y_arr

    while it < max_iter:
        it += 1
        for j in range(n):
            s = shift * x[j]
            for i in range(n):
                s += x[i] * A[i, j]
            y[j] = s
        scale = y[numeraire]
        if not scale > 0.0:
            break
        diff = 0.0
        for j in range(n):
            d = y[j] / scale
            if fabs(d - x[j]) > diff:
                diff = fabs(d - x[j])
            x[j] = d
        # numeraire share collapsing towards zero: dominant class excludes it
        if diff > 1e150:
            break
        if diff <= tol:
            converged = True
            break
    return x_arr, it, converged


def run_ledger(const double[::1] p, const double[::1] Q, const double[::1] N, const double[::1] F,
               const cnp.uint8_t[:, ::1] B, bint closed, long periods,
               const double[::1] savings0, double eps,
               bint stop_when_steady=False):
    cdef Py_ssize_t n = p.shape[0]
    cdef Py_ssize_t i, j
    cdef long t
    cdef double own, sales, demand, cost, full, budget
    cdef long ran = 0
    cdef bint settled
    revenue_arr = np.zeros((periods, n), dtype=np.float64)
    cost_arr = np.zeros((periods, n), dtype=np.float64)
    sav_arr = np.zeros((periods, n), dtype=np.float64)
    status_arr = np.full((periods, n), 2, dtype=np.int8)
    collapse_arr = np.zeros(n, dtype=np.int64)
    alive_arr = np.ones(n, dtype=np.uint8)
    dying_arr = np.zeros(n, dtype=np.uint8)
    sav_now_arr = np.array(savings0, dtype=np.float64)
    cdef double[:, ::1] revenue = revenue_arr
    cdef double[:, ::1] costs = cost_arr
    cdef double[:, ::1] sav = sav_arr
    cdef cnp.int8_t[:, ::1] status = status_arr
    cdef cnp.int64_t[::1] collapse = collapse_arr
    cdef cnp.uint8_t[::1] alive = alive_arr
    cdef cnp.uint8_t[::1] dying = dying_arr
    cdef double[::1] sav_now = sav_now_arr

    for t in range(periods):
        ran = t + 1
        settled = True
        for i in range(n):
            dying[i] = 0
            if not alive[i]:
                continue
            own = N[i] * F[i] if B[i, i] else 0.0
            sales = Q[i] - own
            if closed:
                demand = 0.0
                for j in range(n):
                    if j != i and alive[j] and B[i, j]:
                        demand += N[j] * F[i]
                if demand < sales:
                    sales = demand
            cost = 0.0
            full = 0.0
            for j in range(n):
                if alive[j] and B[j, i]:
                    full += p[j] * F[j]
                    if j != i:
                        cost += p[j] * F[j]
            cost *= N[i]
            full *= N[i]
            revenue[t, i] = p[i] * sales
            costs[t, i] = cost
            budget = sav_now[i] + revenue[t, i]
            if revenue[t, i] - cost < -eps * full:
                settled = False
            if budget < cost - eps * full:
                dying[i] = 1
                status[t, i] = 1
                collapse[i] = t + 1
                sav_now[i] = budget
            else:
                status[t, i] = 0
                sav_now[i] = budget - cost if budget > cost else 0.0
            sav[t, i] = sav_now[i]
        for i in range(n):
            if dying[i]:
                alive[i] = 0
        # no sector ran a deficit, so every later period repeats this one
        if stop_when_steady and settled:
            break
    return revenue_arr, cost_arr, sav_arr, status_arr, collapse_arr, ran
