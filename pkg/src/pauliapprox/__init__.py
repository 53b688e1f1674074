"""Optimal convex approximation of qubit states by Pauli eigenstate mixtures."""

from ._backend import BACKEND
from .analytic import (
    CanonicalMap,
    ExactFamilyParams,
    Region,
    Solution,
    UvParams,
    canonicalize,
    classify,
    compute_uv,
    sacchi_reference,
    sacchi_threshold,
    solve,
    solve_akphi,
    solve_batch,
    solve_exact_family,
)
from .oracle import (
    KktReport,
    SolverConfig,
    frank_wolfe_solve,
    grid_search,
    kkt_check,
    project_cross_polytope,
    weights_from_polytope_point,
)
from .qubit import (
    B3,
    AkPhiParams,
    BlochVector,
    HermitianMatrix2,
    StateSet,
    WeightVector,
    bloch_from_akphi,
    bloch_to_matrix,
    density_from_akphi,
    matrix_to_bloch,
    mixture,
    trace_norm,
)

__version__ = "0.1.0"
