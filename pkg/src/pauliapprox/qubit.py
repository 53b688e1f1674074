"""Single-qubit state arithmetic in matrix and Bloch form.

States are parameterized either by a Bloch vector ``(x, y, z)`` or by the
population/coherence/phase triple ``(a, k, phi)``::

    rho = [[1 - a,                  k sqrt(a(1-a)) e^{-i phi}],
           [k sqrt(a(1-a)) e^{i phi}, a                      ]]

All values are immutable; every function here is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    InvalidParameterError,
    LengthMismatchError,
    NonPhysicalStateError,
    NonUnitTraceError,
)

TOL = 1e-12
TWO_PI = 2.0 * math.pi


def _check_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise InvalidParameterError(f"non-finite value {v!r}")


def _clamp_range(name: str, value: float, lo: float, hi: float) -> float:
    if value < lo - TOL or value > hi + TOL:
        raise InvalidParameterError(f"{name}={value!r} outside [{lo}, {hi}]")
    return min(max(value, lo), hi)


@dataclass(frozen=True)
class HermitianMatrix2:
    """2x2 Hermitian matrix; only the upper off-diagonal entry is stored."""

    d0: float
    d1: float
    off: complex = 0j

    def __post_init__(self):
        _check_finite(self.d0, self.d1, self.off.real, self.off.imag)

    @property
    def trace(self) -> float:
        return self.d0 + self.d1

    @property
    def det(self) -> float:
        return self.d0 * self.d1 - abs(self.off) ** 2

    def __sub__(self, other: "HermitianMatrix2") -> "HermitianMatrix2":
        return HermitianMatrix2(self.d0 - other.d0, self.d1 - other.d1,
                                self.off - other.off)

    def to_list(self) -> list[list[complex]]:
        return [[complex(self.d0), self.off], [self.off.conjugate(), complex(self.d1)]]


@dataclass(frozen=True)
class AkPhiParams:
    """Population ``a`` of |1>, coherence factor ``k`` and phase ``phi``."""

    a: float
    k: float
    phi: float

    def __post_init__(self):
        _check_finite(self.a, self.k, self.phi)
        object.__setattr__(self, "a", _clamp_range("a", self.a, 0.0, 1.0))
        object.__setattr__(self, "k", _clamp_range("k", self.k, 0.0, 1.0))
        phi = self.phi
        if phi < -TOL or phi > TWO_PI + TOL:
            raise InvalidParameterError(f"phi={phi!r} outside [0, 2pi)")
        if phi < 0.0 or phi >= TWO_PI:
            phi = 0.0
        object.__setattr__(self, "phi", phi)

    @property
    def coherence(self) -> float:
        """Modulus of the off-diagonal entry, k sqrt(a(1-a))."""
        return self.k * math.sqrt(self.a * (1.0 - self.a))


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def __post_init__(self):
        _check_finite(self.x, self.y, self.z)

    @property
    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    @property
    def l1_norm(self) -> float:
        return abs(self.x) + abs(self.y) + abs(self.z)

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def __sub__(self, other: "BlochVector") -> "BlochVector":
        return BlochVector(self.x - other.x, self.y - other.y, self.z - other.z)

    def dot(self, other: "BlochVector") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def physical(self) -> "BlochVector":
        """Return ``self`` if inside the unit ball, rescaled if over by < 1e-12.

        Raises
        ------
        NonPhysicalStateError
            If the norm exceeds ``1 + 1e-12``.
        """
        n = self.norm
        if n <= 1.0:
            return self
        if n > 1.0 + TOL:
            raise NonPhysicalStateError(f"Bloch radius {n!r} exceeds 1")
        return BlochVector(self.x / n, self.y / n, self.z / n)


@dataclass(frozen=True)
class StateSet:
    """Ordered pure states given by unit Bloch vectors."""

    states: tuple[BlochVector, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.states) != len(self.labels):
            raise LengthMismatchError("states and labels differ in length")
        for s in self.states:
            if abs(s.norm - 1.0) > TOL:
                raise NonPhysicalStateError(f"{s} is not a pure state")

    def __len__(self) -> int:
        return len(self.states)

    def subset(self, indices: Sequence[int]) -> "StateSet":
        return StateSet(tuple(self.states[i] for i in indices),
                        tuple(self.labels[i] for i in indices))


B3 = StateSet(
    states=(
        BlochVector(0.0, 0.0, 1.0),
        BlochVector(0.0, 0.0, -1.0),
        BlochVector(1.0, 0.0, 0.0),
        BlochVector(-1.0, 0.0, 0.0),
        BlochVector(0.0, 1.0, 0.0),
        BlochVector(0.0, -1.0, 0.0),
    ),
    labels=("0", "1", "2", "3", "4", "5"),
)


@dataclass(frozen=True)
class WeightVector:
    """Probability weights, one per member of a :class:`StateSet`.

    Entries down to ``-1e-12`` are accepted and clamped to zero.
    """

    p: tuple[float, ...]

    def __post_init__(self):
        p = tuple(float(w) for w in self.p)
        _check_finite(*p)
        if any(w < -TOL for w in p):
            raise InvalidParameterError(f"negative weight in {p}")
        if abs(math.fsum(p) - 1.0) > TOL:
            raise InvalidParameterError(f"weights sum to {math.fsum(p)!r}, not 1")
        object.__setattr__(self, "p", tuple(max(w, 0.0) for w in p))

    def __len__(self) -> int:
        return len(self.p)

    def __getitem__(self, i):
        return self.p[i]

    def __iter__(self):
        return iter(self.p)


def density_from_akphi(params: AkPhiParams) -> HermitianMatrix2:
    c = params.coherence
    return HermitianMatrix2(1.0 - params.a, params.a,
                            complex(c * math.cos(params.phi), -c * math.sin(params.phi)))


def bloch_from_akphi(params: AkPhiParams) -> BlochVector:
    c = params.coherence
    return BlochVector(2.0 * c * math.cos(params.phi),
                       2.0 * c * math.sin(params.phi),
                       1.0 - 2.0 * params.a)


def bloch_to_matrix(r: BlochVector) -> HermitianMatrix2:
    r = r.physical()
    return HermitianMatrix2(0.5 * (1.0 + r.z), 0.5 * (1.0 - r.z), complex(0.5 * r.x, -0.5 * r.y))


def matrix_to_bloch(m: HermitianMatrix2) -> BlochVector:
    if abs(m.trace - 1.0) > TOL:
        raise NonUnitTraceError(f"trace {m.trace!r} != 1")
    return BlochVector(2.0 * m.off.real, -2.0 * m.off.imag, m.d0 - m.d1)


def trace_norm(m: HermitianMatrix2) -> float:
    """Sum of absolute eigenvalues, from the closed-form 2x2 spectrum."""
    mean = 0.5 * (m.d0 + m.d1)
    radius = math.hypot(0.5 * (m.d0 - m.d1), m.off.real, m.off.imag)
    # eigenvalues are mean +- radius
    return 2.0 * max(abs(mean), radius)


def mixture(states: StateSet, w: WeightVector | Sequence[float]) -> BlochVector:
    """Bloch vector of ``sum_i p_i rho_i``."""
    p = tuple(w)
    if len(p) != len(states):
        raise LengthMismatchError(f"{len(p)} weights for {len(states)} states")
    return BlochVector(
        math.fsum(pi * s.x for pi, s in zip(p, states.states)),
        math.fsum(pi * s.y for pi, s in zip(p, states.states)),
        math.fsum(pi * s.z for pi, s in zip(p, states.states)),
    )
