"""Command-line front end.

Subcommands::

    pauliapprox solve --a 0.5 --k 1 --phi 1.0471975512
    pauliapprox solve --bloch=0,0,1
    pauliapprox sweep --phi 1.0471975512 --grid 201 --mode diff --out fig2.csv
    pauliapprox verify --samples 100000 --seed 0 --tol 1e-9
    pauliapprox counterexample

Exit codes: 0 success, 1 invalid input or I/O error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import math
import sys
from dataclasses import dataclass

import numpy as np

from .analytic import (
    REGION_CODES,
    canonical_akphi,
    canonicalize,
    compute_uv,
    in_sacchi_window,
    sacchi_reference,
    solve,
    solve_batch,
)
from .errors import PauliApproxError
from .oracle import kkt_check, kkt_check_batch
from .qubit import B3, AkPhiParams, BlochVector, bloch_from_akphi, bloch_to_matrix, mixture, trace_norm

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2

COMMENT_HEADER = ["a", "k", "phi", "u", "v", "region", "D", "p0", "p1", "p2", "p3", "p4", "p5"]
SACCHI_HEADER = COMMENT_HEADER + ["valid"]
DIFF_HEADER = ["a", "k", "phi", "D_comment", "D_sacchi", "diff"]


class VerificationError(RuntimeError):
    pass


def fmt(x: float) -> str:
    """Shortest decimal with at least 12 significant digits that round-trips."""
    x = float(x)
    if x == 0.0:
        return "0"
    for prec in range(12, 18):
        s = f"{x:.{prec}g}"
        if float(s) == x:
            return s
    return repr(x)


@dataclass(frozen=True)
class SweepSpec:
    phi: float = math.pi / 3
    grid: int = 201
    mode: str = "comment"

    def __post_init__(self):
        if self.grid < 2:
            raise PauliApproxError("grid must be at least 2")
        if self.mode not in ("comment", "sacchi", "diff"):
            raise PauliApproxError(f"unknown sweep mode {self.mode!r}")
        AkPhiParams(0.0, 0.0, self.phi)  # validates phi


@dataclass(frozen=True)
class VerifySpec:
    samples: int = 100_000
    seed: int = 0
    tol: float = 1e-9

    def __post_init__(self):
        if self.samples < 1:
            raise PauliApproxError("samples must be positive")
        if not 0 <= self.seed < 2**64:
            raise PauliApproxError("seed must be a 64-bit unsigned integer")


# ---------------------------------------------------------------- solve


def format_solution(r: BlochVector) -> str:
    sol = solve(r)
    canon, cmap = canonicalize(r)
    report = kkt_check(canon, cmap.apply_weights(sol.weights))
    return "\n".join([
        f"region={sol.region}",
        f"D={fmt(sol.distance)}",
        "p=" + ",".join(fmt(w) for w in sol.weights),
        f"kkt={'pass' if report.passed else 'FAIL'}",
    ])


def run_solve(args) -> int:
    if args.bloch is not None:
        if args.a is not None or args.k is not None:
            raise PauliApproxError("give either --bloch or --a/--k/--phi, not both")
        try:
            parts = [float(t) for t in args.bloch.split(",")]
        except ValueError as exc:
            raise PauliApproxError(f"cannot parse --bloch {args.bloch!r}") from exc
        if len(parts) != 3:
            raise PauliApproxError("--bloch needs three comma-separated numbers")
        r = BlochVector(*parts)
    else:
        if args.a is None or args.k is None:
            raise PauliApproxError("--a and --k are required without --bloch")
        r = bloch_from_akphi(AkPhiParams(args.a, args.k, args.phi))
    print(format_solution(r))
    return EXIT_OK


# ---------------------------------------------------------------- sweep


def _grid_points(spec: SweepSpec):
    axis = np.linspace(0.0, 1.0, spec.grid)
    A, K = np.meshgrid(axis, axis, indexing="ij")
    A, K = A.ravel(), K.ravel()
    cos_phi, sin_phi = math.cos(spec.phi), math.sin(spec.phi)
    # same operation order as AkPhiParams.coherence / bloch_from_akphi
    c = K * np.sqrt(A * (1.0 - A))
    pts = np.stack([2.0 * c * cos_phi, 2.0 * c * sin_phi, 1.0 - 2.0 * A], axis=1)
    return A, K, c * cos_phi, c * sin_phi, pts


def _sacchi_at(a: float, k: float, phi: float):
    """Reference solution at the canonical image of (a, k, phi), or None outside its window."""
    params = canonical_akphi(AkPhiParams(a, k, phi))
    if not in_sacchi_window(params):
        return None
    return sacchi_reference(params)


def _spot_check(pt, dist, weights) -> None:
    m = mixture(B3, weights)
    tn = trace_norm(bloch_to_matrix(BlochVector(*pt)) - bloch_to_matrix(m))
    if abs(tn - dist) > 1e-12 or abs(math.fsum(weights) - 1.0) > 1e-12 or min(weights) < 0.0:
        raise VerificationError(f"reconstruction failed at {tuple(pt)}: {tn} vs {dist}")


def sweep_rows(spec: SweepSpec):
    """Yield CSV rows (lists of strings), header first."""
    A, K, U, V, pts = _grid_points(spec)
    dist, weights, codes = solve_batch(pts)
    phi_s = fmt(spec.phi)
    if spec.mode == "comment":
        yield COMMENT_HEADER
        for i in range(len(A)):
            if i % 100 == 0:
                _spot_check(pts[i], dist[i], tuple(weights[i]))
            yield [fmt(A[i]), fmt(K[i]), phi_s, fmt(U[i]), fmt(V[i]),
                   REGION_CODES[codes[i]].value, fmt(dist[i])] + [fmt(w) for w in weights[i]]
    elif spec.mode == "sacchi":
        yield SACCHI_HEADER
        for i in range(len(A)):
            ref = _sacchi_at(A[i], K[i], spec.phi)
            head = [fmt(A[i]), fmt(K[i]), phi_s, fmt(U[i]), fmt(V[i]), ""]
            if ref is None:
                yield head + [""] * 8
            else:
                yield head + [fmt(ref.distance)] + [fmt(w) for w in ref.weights] + [
                    "true" if ref.valid else "false"]
    else:
        yield DIFF_HEADER
        for i in range(len(A)):
            ref = _sacchi_at(A[i], K[i], spec.phi)
            if ref is None:
                yield [fmt(A[i]), fmt(K[i]), phi_s, fmt(dist[i]), "", ""]
            else:
                yield [fmt(A[i]), fmt(K[i]), phi_s, fmt(dist[i]), fmt(ref.distance),
                       fmt(dist[i] - ref.distance)]


def write_sweep(spec: SweepSpec, out) -> int:
    """Write the sweep CSV to ``out`` (a path); returns the number of data rows."""
    rows = sweep_rows(spec)
    with open(out, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        n = -1
        for row in rows:
            writer.writerow(row)
            n += 1
    return n


def run_sweep(args) -> int:
    spec = SweepSpec(phi=args.phi, grid=args.grid, mode=args.mode)
    n = write_sweep(spec, args.out)
    print(f"wrote {n} rows to {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------- verify


def sample_ball(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` points uniform in the unit ball."""
    d = rng.standard_normal((n, 3))
    d /= np.linalg.norm(d, axis=1)[:, None]
    return d * np.cbrt(rng.random(n))[:, None]


# Region boundaries in canonical Bloch coordinates, as (normal, offset).
BOUNDARIES = (
    ((1.0, 1.0, 1.0), 1.0),    # exact region: a = u + v
    ((1.0, 1.0, -2.0), 1.0),   # case iv: u + v = (3 - 4a)/2
    ((-2.0, 1.0, 1.0), 1.0),   # a - v + 2u = 0
    ((1.0, -2.0, 1.0), 1.0),   # a - u + 2v = 0
)


def sample_near_boundary(rng: np.random.Generator, n: int, normal, offset, jitter=1e-9):
    """``n`` physical points within ``jitter`` of a boundary plane, random octant."""
    nv = np.asarray(normal, dtype=float)
    out = np.empty((0, 3))
    while len(out) < n:
        p = np.abs(sample_ball(rng, 2 * n))
        p -= ((p @ nv - offset) / (nv @ nv))[:, None] * nv
        p += rng.uniform(-jitter, jitter, size=(len(p), 1)) * nv / np.linalg.norm(nv)
        keep = (p.min(axis=1) >= 0.0) & ((p * p).sum(axis=1) <= 1.0)
        out = np.concatenate([out, p[keep]])
    out = out[:n]
    return out * rng.choice([-1.0, 1.0], size=out.shape)


def signed_permutations():
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1.0, -1.0), repeat=3):
            yield perm, np.array(signs)


def verify(spec: VerifySpec) -> dict:
    """Run the randomized consistency suite and return its maxima."""
    from . import _backend

    rng = np.random.default_rng(spec.seed)
    pts = [sample_ball(rng, spec.samples)]
    boost = min(10_000, spec.samples)
    for normal, offset in BOUNDARIES:
        pts.append(sample_near_boundary(rng, boost, normal, offset))
    pts = np.concatenate(pts)

    dist, w, _ = solve_batch(pts)
    _, pdist = _backend.kernels.project_batch(pts)
    oracle_dev = float(np.abs(dist - pdist).max())

    # trace norm of rho - sigma from the closed-form 2x2 spectrum
    m = np.stack([w[:, 2] - w[:, 3], w[:, 4] - w[:, 5], w[:, 0] - w[:, 1]], axis=1)
    dz = 0.5 * (pts[:, 2] - m[:, 2])
    off = 0.5 * (pts[:, :2] - m[:, :2])
    tn = 2.0 * np.sqrt(dz * dz + (off * off).sum(axis=1))
    recon_dev = float(np.abs(tn - dist).max())
    simplex_dev = float(max(np.abs(w.sum(axis=1) - 1.0).max(), -w.min()))

    sym_dev = 0.0
    for perm, signs in signed_permutations():
        d2, _, _ = solve_batch(pts[:, list(perm)] * signs)
        sym_dev = max(sym_dev, float(np.abs(d2 - dist).max()))

    # multipliers are checked in the canonical octant
    cw = w.copy()
    for col, axis in ((0, 2), (2, 0), (4, 1)):
        flip = pts[:, axis] < 0.0
        cw[flip, col], cw[flip, col + 1] = w[flip, col + 1], w[flip, col]
    a = 0.5 * (1.0 - np.abs(pts[:, 2]))
    kkt = kkt_check_batch(a, 0.5 * np.abs(pts[:, 0]), 0.5 * np.abs(pts[:, 1]), cw, spec.tol)
    kkt_rate = float(kkt["passed"].mean())

    ok = max(oracle_dev, recon_dev, simplex_dev, sym_dev) <= spec.tol and kkt_rate == 1.0
    return {
        "points": len(pts),
        "max_oracle_dev": oracle_dev,
        "max_reconstruction_dev": recon_dev,
        "max_simplex_dev": simplex_dev,
        "max_symmetry_dev": sym_dev,
        "kkt_pass_rate": kkt_rate,
        "ok": ok,
    }


def format_verify(spec: VerifySpec, res: dict) -> str:
    return (
        f"samples={spec.samples} seed={spec.seed} points={res['points']} tol={spec.tol:.1e} "
        f"max_oracle_dev={res['max_oracle_dev']:.3e} "
        f"max_reconstruction_dev={res['max_reconstruction_dev']:.3e} "
        f"max_simplex_dev={res['max_simplex_dev']:.3e} "
        f"max_symmetry_dev={res['max_symmetry_dev']:.3e} "
        f"kkt_pass_rate={res['kkt_pass_rate']:.6f} "
        f"status={'PASS' if res['ok'] else 'FAIL'}"
    )


def run_verify(args) -> int:
    spec = VerifySpec(samples=args.samples, seed=args.seed, tol=args.tol)
    res = verify(spec)
    print(format_verify(spec, res))
    return EXIT_OK if res["ok"] else EXIT_VERIFY


# ---------------------------------------------------------------- counterexample


def counterexample_report() -> str:
    lines = []
    for label, phi in (("pi/4", math.pi / 4), ("pi/3", math.pi / 3)):
        params = AkPhiParams(0.5, 1.0, phi)
        ref = sacchi_reference(params)
        sol = solve(bloch_from_akphi(params))
        flag = "" if ref.valid else " (INVALID)"
        lines.append(f"a=0.5 k=1 phi={label}")
        lines.append(f"  reference case (i): D = {ref.distance:.6f}{flag}, "
                     f"p0 = {ref.weights[0]:.6f}{flag}")
        lines.append(f"  corrected: region={sol.region} D = {sol.distance:.6f} "
                     + " ".join(f"p{i} = {w:.6f}" for i, w in enumerate(sol.weights) if w > 0.0))
    return "\n".join(lines)


def run_counterexamples(args=None) -> int:
    print(counterexample_report())
    return EXIT_OK


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pauliapprox", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="optimal approximation of one state")
    p.add_argument("--a", type=float)
    p.add_argument("--k", type=float)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--bloch", help="x,y,z (use --bloch=-0.1,0,0 for a leading minus)")
    p.set_defaults(func=run_solve)

    p = sub.add_parser("sweep", help="CSV over the (a, k) grid at fixed phi")
    p.add_argument("--phi", type=float, default=math.pi / 3)
    p.add_argument("--grid", type=int, default=201)
    p.add_argument("--mode", choices=("comment", "sacchi", "diff"), default="comment")
    p.add_argument("--out", required=True)
    p.set_defaults(func=run_sweep)

    p = sub.add_parser("verify", help="randomized oracle/KKT/symmetry checks")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=run_verify)

    p = sub.add_parser("counterexample", help="report the invalid reference solutions")
    p.set_defaults(func=run_counterexamples)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PauliApproxError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
