"""Closed-form nearest B3 mixture for an arbitrary qubit state.

The six Pauli eigenstates span the octahedron ``|x| + |y| + |z| <= 1`` in
Bloch space, and the trace distance between qubit states is the Euclidean
distance between Bloch vectors, so the optimal approximation is a
nearest-point problem on that octahedron. The closed forms below are stated
for the canonical octant (``a <= 1/2``, ``u, v >= 0``); other states are
reduced to it by flipping axis signs, which permutes B3 within antipodal
pairs.

Weights are always in B3 order: |0>, |1>, |2>=|+>, |3>=|->, |4>=|+i>, |5>=|-i>.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _backend
from .errors import (
    DegenerateParameterError,
    InvalidParameterError,
    NonPhysicalStateError,
    RegionError,
    SacchiWindowError,
)
from .qubit import TOL, AkPhiParams, BlochVector, WeightVector, bloch_from_akphi

SQRT3 = math.sqrt(3.0)


class Region(str, enum.Enum):
    EXACT = "Exact"
    CASE_I = "CaseI"
    CASE_II = "CaseII"
    CASE_III = "CaseIII"
    CASE_IV = "CaseIV"

    def __str__(self) -> str:
        return self.value


# integer codes shared with the batch kernels
REGION_CODES = (Region.EXACT, Region.CASE_I, Region.CASE_II, Region.CASE_III, Region.CASE_IV)


@dataclass(frozen=True)
class UvParams:
    """Canonical population ``a`` and coherence components ``u``, ``v``."""

    a: float
    u: float
    v: float

    @property
    def bloch(self) -> BlochVector:
        return BlochVector(2.0 * self.u, 2.0 * self.v, 1.0 - 2.0 * self.a)


@dataclass(frozen=True)
class CanonicalMap:
    """Axis sign flips taking a state into the canonical octant.

    Each flip is an involution, so the same map also undoes itself.
    """

    sign_x: int = 1
    sign_y: int = 1
    sign_z: int = 1

    def apply(self, r: BlochVector) -> BlochVector:
        return BlochVector(self.sign_x * r.x, self.sign_y * r.y, self.sign_z * r.z)

    def apply_weights(self, p: Sequence[float]) -> tuple[float, ...]:
        p0, p1, p2, p3, p4, p5 = p
        if self.sign_z < 0:
            p0, p1 = p1, p0
        if self.sign_x < 0:
            p2, p3 = p3, p2
        if self.sign_y < 0:
            p4, p5 = p5, p4
        return (p0, p1, p2, p3, p4, p5)


@dataclass(frozen=True)
class ExactFamilyParams:
    t1: float = 0.0
    t2: float = 0.0

    def __post_init__(self):
        if not (self.t1 >= 0.0 and self.t2 >= 0.0):
            raise InvalidParameterError(f"t1, t2 must be non-negative, got {self.t1}, {self.t2}")


@dataclass(frozen=True)
class Solution:
    """Optimal (or reference) approximation of one state.

    ``weights`` is a plain tuple because the reference solution may carry
    negative entries; ``valid`` is False exactly in that case. ``gap`` holds
    the final duality gap for iterative solvers.
    """

    distance: float
    weights: tuple[float, ...]
    region: Optional[Region] = None
    valid: bool = True
    gap: Optional[float] = None

    @property
    def weight_vector(self) -> WeightVector:
        return WeightVector(self.weights)


def compute_uv(params: AkPhiParams) -> tuple[float, float]:
    c = params.coherence
    return c * math.cos(params.phi), c * math.sin(params.phi)


def canonicalize(r: BlochVector) -> tuple[UvParams, CanonicalMap]:
    r = r.physical()
    cmap = CanonicalMap(-1 if r.x < 0 else 1, -1 if r.y < 0 else 1, -1 if r.z < 0 else 1)
    return UvParams(0.5 * (1.0 - abs(r.z)), 0.5 * abs(r.x), 0.5 * abs(r.y)), cmap


def classify(p: UvParams) -> Region:
    a, u, v = p.a, p.u, p.v
    if a - u - v >= 0.0:
        return Region.EXACT
    if u + v > (3.0 - 4.0 * a) / 2.0:
        return Region.CASE_IV
    if a - v + 2.0 * u >= 0.0:
        if a - u + 2.0 * v >= 0.0:
            return Region.CASE_I
        return Region.CASE_II
    # a - v + 2u < 0 forces a - u + 2v > 0
    return Region.CASE_III


def solve_exact_family(p: UvParams, t: ExactFamilyParams = ExactFamilyParams()) -> WeightVector:
    """One member of the two-parameter family of exact decompositions.

    ``p`` must lie in the exact region (``a >= u + v``) and ``t1 + t2`` may
    not exceed ``a - u - v``. Weights are in canonical B3 order.
    """
    slack = p.a - p.u - p.v
    if slack < -TOL:
        raise RegionError(f"a - u - v = {slack:.3e} < 0; no exact decomposition")
    if t.t1 + t.t2 > slack + TOL:
        raise InvalidParameterError(f"t1 + t2 = {t.t1 + t.t2!r} exceeds a - u - v = {slack!r}")
    return WeightVector((
        1.0 - p.a - p.u - p.v - t.t1 - t.t2,
        slack - t.t1 - t.t2,
        2.0 * p.u + t.t1,
        t.t1,
        2.0 * p.v + t.t2,
        t.t2,
    ))


def _canonical_closed_form(region: Region, x: float, y: float, z: float):
    """Distance and canonical weights; (x, y, z) is the canonical Bloch vector."""
    if region is Region.EXACT:
        return 0.0, ((1.0 + z - x - y) / 2, (1.0 - z - x - y) / 2, x, 0.0, y, 0.0)
    if region is Region.CASE_I:
        d = (x + y + z - 1.0) / SQRT3
        return d, ((1.0 + 2 * z - x - y) / 3, 0.0, (1.0 + 2 * x - y - z) / 3, 0.0,
                   (1.0 + 2 * y - x - z) / 3, 0.0)
    if region is Region.CASE_II:
        d = math.sqrt(y * y + 0.5 * (x + z - 1.0) ** 2)
        return d, ((1.0 + z - x) / 2, 0.0, (1.0 - z + x) / 2, 0.0, 0.0, 0.0)
    if region is Region.CASE_III:
        d = math.sqrt(x * x + 0.5 * (y + z - 1.0) ** 2)
        return d, ((1.0 + z - y) / 2, 0.0, 0.0, 0.0, (1.0 - z + y) / 2, 0.0)
    d = math.sqrt(z * z + 0.5 * (x + y - 1.0) ** 2)
    return d, (0.0, 0.0, (1.0 + x - y) / 2, 0.0, (1.0 - x + y) / 2, 0.0)


def solve(r: BlochVector) -> Solution:
    """Optimal B3 approximation of the state with Bloch vector ``r``.

    Raises
    ------
    NonPhysicalStateError
        If ``|r| > 1 + 1e-12``.
    """
    canon, cmap = canonicalize(r)
    region = classify(canon)
    cr = canon.bloch
    d, w = _canonical_closed_form(region, cr.x, cr.y, cr.z)
    w = tuple(max(wi, 0.0) if wi > -TOL else wi for wi in w)
    return Solution(distance=d, weights=cmap.apply_weights(w), region=region)


def solve_akphi(params: AkPhiParams) -> Solution:
    return solve(bloch_from_akphi(params))


def sacchi_threshold(a: float, phi: float) -> float:
    """Coherence ``k`` at which ``u + v`` reaches ``a``."""
    if a * (1.0 - a) <= 0.0:
        raise DegenerateParameterError(f"a(1-a) = 0 for a={a!r}")
    cs = math.cos(phi) + math.sin(phi)
    if cs <= 0.0:
        raise DegenerateParameterError(f"cos(phi) + sin(phi) <= 0 for phi={phi!r}")
    return a / (math.sqrt(a * (1.0 - a)) * cs)


def in_sacchi_window(params: AkPhiParams) -> bool:
    a, k = params.a, params.k
    if a * (1.0 - a) <= 0.0 or math.cos(params.phi) + math.sin(params.phi) <= 0.0:
        return False
    return sacchi_threshold(a, params.phi) < k <= a / math.sqrt(a * (1.0 - a)) + TOL


def sacchi_reference(params: AkPhiParams) -> Solution:
    """Earlier published case-(i) solution, evaluated without a region check.

    Only defined in the canonical octant and for
    ``k_th < k <= a / sqrt(a(1-a))``. Negative weights are returned as-is and
    flagged with ``valid=False``.
    """
    if params.a > 0.5 + TOL or params.phi > 0.5 * math.pi + TOL:
        raise SacchiWindowError("reference solution is defined for a <= 1/2, phi <= pi/2 only")
    if not in_sacchi_window(params):
        raise SacchiWindowError(f"k={params.k!r} outside the case-(i) window at a={params.a!r}")
    a = params.a
    u, v = compute_uv(params)
    w = (
        1.0 - 4 * a / 3 - 2 * u / 3 - 2 * v / 3,
        0.0,
        2 * a / 3 - 2 * v / 3 + 4 * u / 3,
        0.0,
        2 * a / 3 - 2 * u / 3 + 4 * v / 3,
        0.0,
    )
    return Solution(distance=2.0 * (u + v - a) / SQRT3, weights=w, region=Region.CASE_I,
                    valid=min(w) >= -TOL)


def canonical_akphi(params: AkPhiParams) -> AkPhiParams:
    """Reflect ``(a, phi)`` into ``a <= 1/2``, ``phi in [0, pi/2]``; ``k`` is unchanged."""
    phi = math.atan2(abs(math.sin(params.phi)), abs(math.cos(params.phi)))
    return AkPhiParams(min(params.a, 1.0 - params.a), params.k, phi)


def solve_batch(points):
    """Vectorized :func:`solve` over an ``(n, 3)`` array of Bloch vectors.

    Returns ``(distance, weights, region_code)`` arrays; ``REGION_CODES``
    maps codes back to :class:`Region`.
    """
    pts = np.array(points, dtype=np.float64, ndmin=2)
    if pts.shape[1:] != (3,) or not np.isfinite(pts).all():
        raise InvalidParameterError("points must be a finite (n, 3) array")
    norms = np.sqrt((pts * pts).sum(axis=1))
    if (norms > 1.0 + TOL).any():
        raise NonPhysicalStateError(f"Bloch radius {norms.max()!r} exceeds 1")
    over = norms > 1.0
    pts[over] /= norms[over, None]
    return _backend.kernels.solve_batch(pts)
