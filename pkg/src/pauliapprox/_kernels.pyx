# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch kernels; same contracts as ``_fallback``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, floor, ceil, INFINITY

cnp.import_array()

cdef double SQRT3 = sqrt(3.0)


def solve_batch(points):
    cdef double[:, ::1] P = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n = P.shape[0], i
    dist_arr = np.zeros(n)
    w_arr = np.zeros((n, 6))
    code_arr = np.zeros(n, dtype=np.int8)
    cdef double[::1] dist = dist_arr
    cdef double[:, ::1] w = w_arr
    cdef signed char[::1] code = code_arr
    cdef double a, u, v, X, Y, Z, t
    cdef int c, j
    with nogil:
        for i in range(n):
            a = 0.5 * (1.0 - fabs(P[i, 2]))
            u = 0.5 * fabs(P[i, 0])
            v = 0.5 * fabs(P[i, 1])
            X = 2.0 * u
            Y = 2.0 * v
            Z = 1.0 - 2.0 * a
            if a - u - v >= 0.0:
                c = 0
                w[i, 0] = (1.0 + Z - X - Y) / 2
                w[i, 1] = (1.0 - Z - X - Y) / 2
                w[i, 2] = X
                w[i, 4] = Y
            elif u + v > (3.0 - 4.0 * a) / 2.0:
                c = 4
                dist[i] = sqrt(Z * Z + 0.5 * (X + Y - 1.0) * (X + Y - 1.0))
                w[i, 2] = (1.0 + X - Y) / 2
                w[i, 4] = (1.0 - X + Y) / 2
            elif a - v + 2.0 * u >= 0.0:
                if a - u + 2.0 * v >= 0.0:
                    c = 1
                    dist[i] = (X + Y + Z - 1.0) / SQRT3
                    w[i, 0] = (1.0 + 2 * Z - X - Y) / 3
                    w[i, 2] = (1.0 + 2 * X - Y - Z) / 3
                    w[i, 4] = (1.0 + 2 * Y - X - Z) / 3
                else:
                    c = 2
                    dist[i] = sqrt(Y * Y + 0.5 * (X + Z - 1.0) * (X + Z - 1.0))
                    w[i, 0] = (1.0 + Z - X) / 2
                    w[i, 2] = (1.0 - Z + X) / 2
            else:
                c = 3
                dist[i] = sqrt(X * X + 0.5 * (Y + Z - 1.0) * (Y + Z - 1.0))
                w[i, 0] = (1.0 + Z - Y) / 2
                w[i, 4] = (1.0 - Z + Y) / 2
            code[i] = c
            for j in range(6):
                if w[i, j] < 0.0 and w[i, j] > -1e-12:
                    w[i, j] = 0.0
            if P[i, 2] < 0.0:
                t = w[i, 0]; w[i, 0] = w[i, 1]; w[i, 1] = t
            if P[i, 0] < 0.0:
                t = w[i, 2]; w[i, 2] = w[i, 3]; w[i, 3] = t
            if P[i, 1] < 0.0:
                t = w[i, 4]; w[i, 4] = w[i, 5]; w[i, 5] = t
    return dist_arr, w_arr, code_arr


def project_batch(points):
    cdef double[:, ::1] P = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n = P.shape[0], i
    near_arr = np.empty((n, 3))
    dist_arr = np.empty(n)
    cdef double[:, ::1] q = near_arr
    cdef double[::1] dist = dist_arr
    cdef double m[3]
    cdef double s[3]
    cdef double tmp, cum, t, theta, d2, diff
    cdef int j, k
    with nogil:
        for i in range(n):
            for j in range(3):
                m[j] = fabs(P[i, j])
                s[j] = m[j]
            if m[0] + m[1] + m[2] <= 1.0:
                for j in range(3):
                    q[i, j] = P[i, j]
                dist[i] = 0.0
                continue
            # descending insertion sort of three values
            for j in range(1, 3):
                k = j
                while k > 0 and s[k] > s[k - 1]:
                    tmp = s[k]; s[k] = s[k - 1]; s[k - 1] = tmp
                    k -= 1
            theta = s[0] - 1.0
            cum = 0.0
            for j in range(3):
                cum += s[j]
                t = (cum - 1.0) / (j + 1)
                if s[j] - t > 0.0:
                    theta = t
            d2 = 0.0
            for j in range(3):
                tmp = m[j] - theta
                if tmp < 0.0:
                    tmp = 0.0
                if P[i, j] < 0.0:
                    tmp = -tmp
                q[i, j] = tmp
                diff = P[i, j] - tmp
                d2 += diff * diff
            dist[i] = sqrt(d2)
    return near_arr, dist_arr


def grid_search_lattice(vertices, r, long N):
    cdef double[:, ::1] V = np.ascontiguousarray(vertices, dtype=np.float64)
    cdef double[::1] rr = np.ascontiguousarray(r, dtype=np.float64)
    cdef int m = V.shape[0]
    counts_arr = np.zeros(m, dtype=np.int64)
    cdef long long[::1] counts = counts_arr
    cdef double d0, d1, d2
    if m == 1:
        counts[0] = N
        d0 = rr[0] - V[0, 0]; d1 = rr[1] - V[0, 1]; d2 = rr[2] - V[0, 2]
        return counts_arr, sqrt(d0 * d0 + d1 * d1 + d2 * d2)

    cdef int k = m - 2, j, idx
    cdef long c[8]
    cdef long best_c[8]
    cdef long s = 0, R, jj, best_j = 0, cand
    cdef double e[3]
    cdef double base[3]
    cdef double ee, jstar, best = INFINITY, dd, t
    cdef double invN = 1.0 / N
    for j in range(3):
        e[j] = (V[m - 2, j] - V[m - 1, j]) * invN
    ee = e[0] * e[0] + e[1] * e[1] + e[2] * e[2]
    for j in range(8):
        c[j] = 0
        best_c[j] = 0

    with nogil:
        while True:
            R = N - s
            for j in range(3):
                t = R * V[m - 1, j]
                for idx in range(k):
                    t = t + c[idx] * V[idx, j]
                base[j] = rr[j] - t * invN
            if ee > 0.0:
                jstar = (base[0] * e[0] + base[1] * e[1] + base[2] * e[2]) / ee
            else:
                jstar = 0.0
            for idx in range(2):
                if idx == 0:
                    t = floor(jstar)
                else:
                    t = ceil(jstar)
                if t < 0.0:
                    t = 0.0
                if t > R:
                    t = R
                cand = <long>t
                dd = 0.0
                for j in range(3):
                    t = base[j] - cand * e[j]
                    dd += t * t
                if dd < best:
                    best = dd
                    best_j = cand
                    for j in range(k):
                        best_c[j] = c[j]
            # odometer over prefixes with sum <= N, last digit fastest
            idx = k - 1
            while idx >= 0:
                if s < N:
                    c[idx] += 1
                    s += 1
                    break
                s -= c[idx]
                c[idx] = 0
                idx -= 1
            if idx < 0:
                break

    R = N
    for j in range(k):
        counts[j] = best_c[j]
        R -= best_c[j]
    counts[m - 2] = best_j
    counts[m - 1] = R - best_j
    return counts_arr, sqrt(best)
