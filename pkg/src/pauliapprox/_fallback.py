"""Pure-Python/numpy implementations of the batch kernels.

Used when the compiled ``_kernels`` extension is unavailable. Inputs are
assumed validated: ``points`` is a C-contiguous ``(n, 3)`` float64 array of
physical Bloch vectors.
"""

from functools import lru_cache
from itertools import combinations

import numpy as np

SQRT3 = np.sqrt(3.0)


def solve_batch(points):
    """Closed-form distance, B3 weights and region code for each row."""
    points = np.asarray(points, dtype=np.float64)
    x, y, z = np.abs(points).T
    a = 0.5 * (1.0 - z)
    u = 0.5 * x
    v = 0.5 * y
    # canonical Bloch vector recomputed from (a, u, v), as in the scalar path
    X, Y, Z = 2.0 * u, 2.0 * v, 1.0 - 2.0 * a

    exact = a - u - v >= 0.0
    case4 = ~exact & (u + v > (3.0 - 4.0 * a) / 2.0)
    rest = ~exact & ~case4
    c2cond = a - v + 2.0 * u >= 0.0
    c3cond = a - u + 2.0 * v >= 0.0
    case1 = rest & c2cond & c3cond
    case2 = rest & c2cond & ~c3cond
    case3 = rest & ~c2cond
    code = np.select([exact, case1, case2, case3], [0, 1, 2, 3], 4).astype(np.int8)

    n = len(points)
    dist = np.zeros(n)
    w = np.zeros((n, 6))

    m = exact
    w[m, 0] = (1.0 + Z[m] - X[m] - Y[m]) / 2
    w[m, 1] = (1.0 - Z[m] - X[m] - Y[m]) / 2
    w[m, 2] = X[m]
    w[m, 4] = Y[m]

    m = case1
    dist[m] = (X[m] + Y[m] + Z[m] - 1.0) / SQRT3
    w[m, 0] = (1.0 + 2 * Z[m] - X[m] - Y[m]) / 3
    w[m, 2] = (1.0 + 2 * X[m] - Y[m] - Z[m]) / 3
    w[m, 4] = (1.0 + 2 * Y[m] - X[m] - Z[m]) / 3

    m = case2
    dist[m] = np.sqrt(Y[m] * Y[m] + 0.5 * (X[m] + Z[m] - 1.0) ** 2)
    w[m, 0] = (1.0 + Z[m] - X[m]) / 2
    w[m, 2] = (1.0 - Z[m] + X[m]) / 2

    m = case3
    dist[m] = np.sqrt(X[m] * X[m] + 0.5 * (Y[m] + Z[m] - 1.0) ** 2)
    w[m, 0] = (1.0 + Z[m] - Y[m]) / 2
    w[m, 4] = (1.0 - Z[m] + Y[m]) / 2

    m = case4
    dist[m] = np.sqrt(Z[m] * Z[m] + 0.5 * (X[m] + Y[m] - 1.0) ** 2)
    w[m, 2] = (1.0 + X[m] - Y[m]) / 2
    w[m, 4] = (1.0 - X[m] + Y[m]) / 2

    w[(w < 0.0) & (w > -1e-12)] = 0.0
    for col, sign in ((0, points[:, 2]), (2, points[:, 0]), (4, points[:, 1])):
        flip = sign < 0.0
        w[flip, col], w[flip, col + 1] = w[flip, col + 1], w[flip, col].copy()
    return dist, w, code


def project_batch(points):
    """Euclidean projection of each row onto the unit l1 ball."""
    points = np.asarray(points, dtype=np.float64)
    mags = np.abs(points)
    s = -np.sort(-mags, axis=1)
    cum = np.cumsum(s, axis=1)
    thetas = (cum - 1.0) / np.arange(1, 4)
    ok = s - thetas > 0.0
    rho = 2 - np.argmax(ok[:, ::-1], axis=1)
    theta = thetas[np.arange(len(points)), rho]
    inside = mags.sum(axis=1) <= 1.0
    theta[inside] = 0.0
    nearest = np.copysign(np.maximum(mags - theta[:, None], 0.0), points)
    nearest[inside] = points[inside]
    dist = np.sqrt(((points - nearest) ** 2).sum(axis=1))
    return nearest, dist


@lru_cache(maxsize=8)
def _prefix_counts(k, N):
    """All ``k``-tuples of non-negative ints with sum <= N, in odometer order."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    # stars and bars over k + 1 parts; the last part is the remainder
    bars = np.array(list(combinations(range(N + k), k)), dtype=np.int64)
    parts = np.diff(np.concatenate([np.full((len(bars), 1), -1), bars], axis=1), axis=1) - 1
    order = np.lexsort(parts.T[::-1])
    return parts[order]


def grid_search_lattice(vertices, r, N):
    """Exact minimizer of ``|r - sum_i (c_i / N) v_i|`` over integer ``c`` with sum N.

    Returns ``(counts, distance)``. All but the last two counts are enumerated;
    for the last pair the objective is a 1D convex quadratic whose integer
    minimizer is the floor or ceiling of the continuous one.
    """
    V = np.asarray(vertices, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    m = len(V)
    if m == 1:
        return np.array([N], dtype=np.int64), float(np.linalg.norm(r - V[0]))
    k = m - 2
    C = _prefix_counts(k, N)
    R = N - C.sum(axis=1)
    base = r[None, :] - (C @ V[:k] + R[:, None] * V[m - 1]) / N
    e = (V[m - 2] - V[m - 1]) / N
    ee = float(e @ e)
    if ee > 0.0:
        jstar = (base @ e) / ee
    else:
        jstar = np.zeros(len(C))
    best_d2 = np.full(len(C), np.inf)
    best_j = np.zeros(len(C), dtype=np.int64)
    for j in (np.floor(jstar), np.ceil(jstar)):
        j = np.clip(j, 0, R).astype(np.int64)
        d = base - j[:, None] * e
        d2 = (d * d).sum(axis=1)
        better = d2 < best_d2
        best_d2[better] = d2[better]
        best_j[better] = j[better]
    i = int(np.argmin(best_d2))
    counts = np.concatenate([C[i], [best_j[i], R[i] - best_j[i]]]).astype(np.int64)
    return counts, float(np.sqrt(best_d2[i]))
