"""Pure-Python versions of the compiled kernels.

Same signatures and results as ``_ckernels``; used when the extension is not
built or when ``PURE_LABOUR_PURE_PYTHON`` is set.
"""

from __future__ import annotations

import numpy as np


def power_iterate(A, shift, tol, max_iter, numeraire):
    A = np.asarray(A, dtype=float)
    x = np.ones(A.shape[0])
    it = 0
    converged = False
    while it < max_iter:
        it += 1
        y = x @ A + shift * x
        scale = y[numeraire]
        if not scale > 0.0:
            break
        y /= scale
        diff = np.max(np.abs(y - x))
        x = y
        if diff > 1e150:
            break
        if diff <= tol:
            converged = True
            break
    return x, it, converged


def run_ledger(p, Q, N, F, B, closed, periods, savings0, eps, stop_when_steady=False):
    n = len(p)
    revenue = np.zeros((periods, n))
    costs = np.zeros((periods, n))
    sav = np.zeros((periods, n))
    status = np.full((periods, n), 2, dtype=np.int8)
    collapse = np.zeros(n, dtype=np.int64)
    alive = [True] * n
    sav_now = [float(s) for s in savings0]

    ran = 0
    for t in range(periods):
        ran = t + 1
        settled = True
        dying = []
        for i in range(n):
            if not alive[i]:
                continue
            sales = Q[i] - (N[i] * F[i] if B[i, i] else 0.0)
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
                dying.append(i)
                status[t, i] = 1
                collapse[i] = t + 1
                sav_now[i] = budget
            else:
                status[t, i] = 0
                sav_now[i] = budget - cost if budget > cost else 0.0
            sav[t, i] = sav_now[i]
        for i in dying:
            alive[i] = False
        if stop_when_steady and settled:
            break
    return revenue, costs, sav, status, collapse, ran
