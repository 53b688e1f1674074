"""Independent numerical checks for the closed-form solver.

* :func:`project_cross_polytope` -- exact Euclidean projection onto the unit
  l1 ball (sort-based soft threshold).
* :func:`frank_wolfe_solve` -- away-step conditional gradient over the
  simplex of an arbitrary finite state set.
* :func:`grid_search` -- exhaustive search over a lattice of weights.
* :func:`kkt_check` -- first-order optimality certificate for B3 weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .analytic import Solution, UvParams
from .errors import NonConvergenceError, OutOfPolytopeError, SetTooLargeError
from .qubit import TOL, B3, BlochVector, StateSet, WeightVector


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-10
    max_iter: int = 100_000
    grid_resolution: int = 60

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1 or self.grid_resolution < 1:
            raise ValueError("max_iter and grid_resolution must be positive")


@dataclass(frozen=True)
class KktReport:
    lam: float
    lambda_i: tuple[float, ...]
    stationarity_residual: float
    feasibility_ok: bool
    complementarity_residual: float
    passed: bool


def project_cross_polytope(r: BlochVector) -> tuple[BlochVector, float]:
    """Nearest point of ``{|x| + |y| + |z| <= 1}`` to ``r`` and its distance."""
    mags = (abs(r.x), abs(r.y), abs(r.z))
    if sum(mags) <= 1.0:
        return r, 0.0
    s = sorted(mags, reverse=True)
    theta = s[0] - 1.0
    cum = 0.0
    for j, sj in enumerate(s, start=1):
        cum += sj
        t = (cum - 1.0) / j
        if sj - t > 0.0:
            theta = t
    proj = [math.copysign(max(m - theta, 0.0), c) for m, c in zip(mags, r)]
    nearest = BlochVector(*proj)
    return nearest, (r - nearest).norm


def weights_from_polytope_point(m: BlochVector) -> WeightVector:
    """B3 weights reproducing ``m``; the slack is split evenly over |0>, |1>."""
    l1 = m.l1_norm
    if l1 > 1.0 + TOL:
        raise OutOfPolytopeError(f"|m|_1 = {l1!r} > 1")
    half = 0.5 * max(1.0 - l1, 0.0)
    return WeightVector((
        max(m.z, 0.0) + half,
        max(-m.z, 0.0) + half,
        max(m.x, 0.0),
        max(-m.x, 0.0),
        max(m.y, 0.0),
        max(-m.y, 0.0),
    ))


def frank_wolfe_solve(states: StateSet, r: BlochVector, cfg: SolverConfig = SolverConfig()) -> Solution:
    """Minimize ``|r - sum_i p_i r_i|`` over the simplex with away steps.

    The objective is ``f = |r - x|^2 / 2``; iteration stops once the
    Frank-Wolfe gap, an upper bound on ``f - f*``, is at most ``cfg.tol``.

    Raises
    ------
    NonConvergenceError
        If ``cfg.max_iter`` iterations pass without reaching the tolerance.
    """
    if len(states) == 0:
        raise ValueError("empty state set")
    r = r.physical()
    V = np.array([tuple(s) for s in states.states], dtype=float)
    target = np.array(tuple(r), dtype=float)
    n = len(V)

    alpha = np.zeros(n)
    alpha[int(np.argmin(((V - target) ** 2).sum(axis=1)))] = 1.0
    x = alpha @ V
    gap = math.inf
    for _ in range(cfg.max_iter):
        grad = x - target
        scores = V @ grad
        s = int(np.argmin(scores))
        gap = float(grad @ x - scores[s])
        if gap <= cfg.tol:
            break
        active = np.flatnonzero(alpha > 0.0)
        aw = int(active[np.argmax(scores[active])])
        away_gap = float(scores[aw] - grad @ x)
        if gap >= away_gap:
            d = V[s] - x
            gmax = 1.0
        else:
            d = x - V[aw]
            gmax = alpha[aw] / (1.0 - alpha[aw])
        dd = float(d @ d)
        if dd == 0.0:
            break
        gamma = min(max(-float(grad @ d) / dd, 0.0), gmax)
        if gap >= away_gap:
            alpha *= 1.0 - gamma
            alpha[s] += gamma
            if gamma == 1.0:
                alpha[:] = 0.0
                alpha[s] = 1.0
        else:
            alpha *= 1.0 + gamma
            alpha[aw] -= gamma
            if gamma == gmax:
                alpha[aw] = 0.0  # drop step
        alpha /= alpha.sum()
        x = alpha @ V
    else:
        grad = x - target
        gap = float(grad @ x - (V @ grad).min())
        if gap > cfg.tol:
            raise NonConvergenceError(gap, cfg.max_iter)
    return Solution(distance=float(np.linalg.norm(target - x)),
                    weights=tuple(float(w) for w in alpha), gap=gap)


def grid_search(states: StateSet, r: BlochVector, cfg: SolverConfig = SolverConfig()) -> Solution:
    """Best weight vector whose entries are multiples of ``1/grid_resolution``."""
    if len(states) > 8:
        raise SetTooLargeError(f"grid search supports at most 8 states, got {len(states)}")
    if len(states) == 0:
        raise ValueError("empty state set")
    V = np.array([tuple(s) for s in states.states], dtype=float)
    counts, dist = _backend.kernels.grid_search_lattice(V, np.array(tuple(r), dtype=float),
                                                        cfg.grid_resolution)
    N = cfg.grid_resolution
    return Solution(distance=float(dist), weights=tuple(int(c) / N for c in counts))


# Rows of the stationarity system, g_i(p) = A[i] @ p + c_i, with
# the condition g_i + lambda_i + lambda = 0.
_KKT_A = np.array([
    [0.0, 1.0, 0.5, 0.5, 0.5, 0.5],
    [1.0, 0.0, 0.5, 0.5, 0.5, 0.5],
    [0.5, 0.5, 0.0, 1.0, 0.5, 0.5],
    [0.5, 0.5, 1.0, 0.0, 0.5, 0.5],
    [0.5, 0.5, 0.5, 0.5, 0.0, 1.0],
    [0.5, 0.5, 0.5, 0.5, 1.0, 0.0],
])


def kkt_check_batch(a, u, v, weights, tol: float = 1e-9) -> dict[str, np.ndarray]:
    """Vectorized :func:`kkt_check` over ``n`` states.

    ``a``, ``u``, ``v`` have shape ``(n,)`` and ``weights`` shape ``(n, 6)``.
    Returns a dict of arrays keyed like the :class:`KktReport` fields.
    """
    a, u, v = (np.atleast_1d(np.asarray(t, dtype=float)) for t in (a, u, v))
    P = np.atleast_2d(np.asarray(weights, dtype=float))
    c = np.stack([-a, a - 1.0, u - 0.5, -u - 0.5, v - 0.5, -v - 0.5], axis=1)
    g = P @ _KKT_A.T + c
    support = P > tol
    nsup = support.sum(axis=1)
    lam = -np.where(support, g, 0.0).sum(axis=1) / np.maximum(nsup, 1)
    resid = np.where(support, g + lam[:, None], 0.0)
    stationarity = np.abs(resid).max(axis=1)
    lam_i = np.where(support, 0.0, -(g + lam[:, None]))
    compl = np.abs(lam_i * P).max(axis=1)
    feasible = (P.min(axis=1) >= -tol) & (np.abs(P.sum(axis=1) - 1.0) <= tol)
    passed = (stationarity <= tol) & (compl <= tol) & (lam_i.min(axis=1) >= -tol) & feasible
    return {
        "lam": lam,
        "lambda_i": lam_i,
        "stationarity_residual": stationarity,
        "feasibility_ok": feasible,
        "complementarity_residual": compl,
        "passed": passed,
    }


def kkt_check(p: UvParams, w, tol: float = 1e-9) -> KktReport:
    """Check B3 weights against the first-order optimality system.

    Multipliers vanish on the support of ``w`` (entries above ``tol``); the
    shared multiplier ``lambda`` is the least-squares solution of the support
    rows and the remaining ``lambda_i`` follow from their own rows. Failures
    are reported, never raised.
    """
    w = tuple(w)
    if len(w) != 6:
        raise ValueError("kkt_check needs six B3 weights")
    out = kkt_check_batch(p.a, p.u, p.v, [w], tol)
    return KktReport(
        lam=float(out["lam"][0]),
        lambda_i=tuple(float(x) for x in out["lambda_i"][0]),
        stationarity_residual=float(out["stationarity_residual"][0]),
        feasibility_ok=bool(out["feasibility_ok"][0]),
        complementarity_residual=float(out["complementarity_residual"][0]),
        passed=bool(out["passed"][0]),
    )


def b3_solution_from_projection(r: BlochVector) -> Solution:
    nearest, dist = project_cross_polytope(r)
    return Solution(distance=dist, weights=tuple(weights_from_polytope_point(nearest)))


__all__ = [
    "B3",
    "KktReport",
    "SolverConfig",
    "b3_solution_from_projection",
    "frank_wolfe_solve",
    "grid_search",
    "kkt_check",
    "kkt_check_batch",
    "project_cross_polytope",
    "weights_from_polytope_point",
]
