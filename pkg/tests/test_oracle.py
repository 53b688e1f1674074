import itertools
import math

import numpy as np
import pytest

from pauliapprox import (
    B3,
    AkPhiParams,
    BlochVector,
    Region,
    SolverConfig,
    StateSet,
    UvParams,
    canonicalize,
    frank_wolfe_solve,
    grid_search,
    kkt_check,
    mixture,
    project_cross_polytope,
    solve,
    solve_akphi,
    weights_from_polytope_point,
)
from pauliapprox.errors import NonConvergenceError, OutOfPolytopeError, SetTooLargeError

from conftest import as_bloch, sample_ball

VERTICES = [tuple(s) for s in B3.states]
PAPER_POINT = BlochVector(0.5, math.sqrt(3) / 2, 0.0)  # a=1/2, k=1, phi=pi/3


class TestProjection:
    def test_interior(self):
        r = BlochVector(0.2, -0.1, 0.3)
        assert project_cross_polytope(r) == (r, 0.0)

    def test_corner_direction(self):
        nearest, d = project_cross_polytope(BlochVector(1.0, 1.0, 1.0))
        assert tuple(nearest) == pytest.approx((1 / 3,) * 3, abs=1e-15)
        assert d == pytest.approx(2 / math.sqrt(3), abs=1e-15)
        # brute force over the weight lattice; (20, 20, 20)/60 is a lattice point
        vertices = np.array(VERTICES)
        from pauliapprox._backend import kernels
        counts, brute = kernels.grid_search_lattice(vertices, np.ones(3), 60)
        assert brute == pytest.approx(d, abs=1e-12)
        assert tuple(counts) == (20, 0, 20, 0, 20, 0)

    def test_paper_point(self):
        nearest, d = project_cross_polytope(PAPER_POINT)
        assert tuple(nearest) == pytest.approx((0.316987, 0.683013, 0.0), abs=1e-6)
        assert d == pytest.approx(0.258819, abs=1e-6)

    def test_variational_inequality(self, ball_points, rng):
        pts = np.concatenate([ball_points, rng.uniform(-2, 2, size=(500, 3))])
        for pt in pts:
            r = as_bloch(pt)
            q, d = project_cross_polytope(r)
            assert q.l1_norm <= 1 + 1e-12
            assert (d == 0.0) == (r.l1_norm <= 1.0)
            res = r - q
            for vtx in VERTICES:
                assert res.dot(BlochVector(*vtx) - q) <= 1e-9

    def test_matches_dense_search(self, rng):
        # crude independent check: sample the octahedron surface densely
        s = rng.standard_normal((200_000, 3))
        surf = s / np.abs(s).sum(axis=1)[:, None]
        for pt in sample_ball(rng, 20):
            _, d = project_cross_polytope(as_bloch(pt))
            brute = np.sqrt(((surf - pt) ** 2).sum(axis=1)).min()
            if np.abs(pt).sum() > 1:
                assert d <= brute + 1e-12
                assert brute - d < 2e-2


class TestWeightsFromPoint:
    def test_vertex(self):
        assert tuple(weights_from_polytope_point(BlochVector(0, 0, 1))) == (1, 0, 0, 0, 0, 0)

    def test_face_point(self):
        w = weights_from_polytope_point(BlochVector(1 / 3, 1 / 3, 1 / 3))
        assert tuple(w) == pytest.approx((1 / 3, 0, 1 / 3, 0, 1 / 3, 0), abs=1e-15)

    def test_slack_on_z_pair(self):
        w = weights_from_polytope_point(BlochVector(0.2, 0.0, 0.0))
        assert tuple(w) == pytest.approx((0.4, 0.4, 0.2, 0, 0, 0), abs=1e-15)

    def test_outside(self):
        with pytest.raises(OutOfPolytopeError):
            weights_from_polytope_point(BlochVector(0.6, 0.6, 0.0))

    def test_round_trip(self, ball_points):
        for pt in ball_points:
            q, _ = project_cross_polytope(as_bloch(pt))
            m = mixture(B3, weights_from_polytope_point(q))
            assert tuple(m) == pytest.approx(tuple(q), abs=1e-13)


class TestFrankWolfe:
    def test_single_state(self):
        s = frank_wolfe_solve(B3.subset([0]), BlochVector(0, 0, 1))
        assert s.distance == 0.0 and s.weights == (1.0,)

    def test_segment(self):
        s = frank_wolfe_solve(B3.subset([0, 1]), BlochVector(1, 0, 0))
        assert s.distance == pytest.approx(1.0, abs=1e-12)
        assert s.weights == pytest.approx((0.5, 0.5), abs=1e-12)

    def test_paper_point(self):
        s = frank_wolfe_solve(B3, PAPER_POINT)
        assert s.distance == pytest.approx(0.258819, abs=1e-6)
        assert s.distance == pytest.approx(project_cross_polytope(PAPER_POINT)[1], abs=1e-9)
        assert s.gap <= 1e-10

    def test_generic_set(self, rng):
        # tetrahedron states: reachable set is the inscribed tetrahedron
        t = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / math.sqrt(3)
        tet = StateSet(tuple(BlochVector(*v) for v in t), ("t0", "t1", "t2", "t3"))
        for pt in sample_ball(rng, 50):
            r = as_bloch(pt)
            fw = frank_wolfe_solve(tet, r)
            g = grid_search(tet, r)
            assert fw.distance <= g.distance + 1e-9
            assert g.distance - fw.distance <= 2 / 60
            assert abs(sum(fw.weights) - 1) <= 1e-12

    def test_sparse_support(self, ball_points):
        for pt in ball_points[:200]:
            s = frank_wolfe_solve(B3, as_bloch(pt))
            if s.distance > 1e-6:
                assert sum(w > 1e-9 for w in s.weights) <= 3

    def test_non_convergence(self):
        with pytest.raises(NonConvergenceError) as exc:
            frank_wolfe_solve(B3, BlochVector(0.3, 0.2, 0.1), SolverConfig(tol=1e-300, max_iter=3))
        assert exc.value.gap > 0


class TestGridSearch:
    def test_origin(self):
        for n in (2, 8, 60):
            assert grid_search(B3, BlochVector(0, 0, 0), SolverConfig(grid_resolution=n)).distance == 0.0
        # B3 lattice mixtures have even coordinate sums (in units of 1/n), so an
        # odd resolution cannot hit the origin
        for n in (1, 7, 61):
            g = grid_search(B3, BlochVector(0, 0, 0), SolverConfig(grid_resolution=n))
            assert g.distance == pytest.approx(1 / n, abs=1e-15)

    @pytest.mark.parametrize("r, expected", [
        (PAPER_POINT, 0.258819),
        (BlochVector(0.565685, 0.565685, 0.6), 0.422258),
    ])
    def test_lattice_bound(self, r, expected):
        g = grid_search(B3, r)
        assert abs(g.distance - expected) <= 2e-3
        assert all(abs(w * 60 - round(w * 60)) < 1e-12 for w in g.weights)

    def test_agrees_within_lattice_spacing(self, rng):
        for pt in sample_ball(rng, 30):
            r = as_bloch(pt)
            g = grid_search(B3, r)
            d = project_cross_polytope(r)[1]
            assert d - 1e-12 <= g.distance <= d + 2 / 60
            assert sum(g.weights) == pytest.approx(1.0, abs=1e-12)
            assert (r - mixture(B3, g.weights)).norm == pytest.approx(g.distance, abs=1e-12)

    def test_set_too_large(self):
        nine = StateSet(B3.states + B3.states[:3], tuple("abcdefghi"))
        with pytest.raises(SetTooLargeError):
            grid_search(nine, BlochVector(0, 0, 0))

    def test_small_sets(self):
        assert grid_search(B3.subset([0]), BlochVector(1, 0, 0)).distance == pytest.approx(math.sqrt(2))
        g = grid_search(B3.subset([0, 1]), BlochVector(0, 0, 0.5), SolverConfig(grid_resolution=4))
        assert g.weights == (0.75, 0.25) and g.distance == 0.0


class TestKkt:
    def test_case_iv_multipliers(self):
        p = UvParams(0.5, 0.25, math.sqrt(3) / 4)
        sol = solve_akphi(AkPhiParams(0.5, 1.0, math.pi / 3))
        rep = kkt_check(p, sol.weights)
        assert rep.passed
        assert rep.lam == pytest.approx(-0.091506, abs=1e-6)
        assert rep.lam == pytest.approx(0.25 - p.u / 2 - p.v / 2, abs=1e-12)
        assert rep.lambda_i[0] == pytest.approx(0.091506, abs=1e-6)
        assert rep.lambda_i[0] == pytest.approx(p.a + p.u / 2 + p.v / 2 - 0.75, abs=1e-12)

    def test_case_i_multipliers(self):
        p = UvParams(0.2, math.sqrt(0.08), math.sqrt(0.08))  # a=0.2, k=1, phi=pi/4
        sol = solve(p.bloch)
        rep = kkt_check(p, sol.weights)
        assert rep.passed
        assert rep.lam == pytest.approx((p.a - p.u - p.v) / 3, abs=1e-12)
        assert rep.lam == pytest.approx(-0.121895, abs=1e-6)
        for i in (1, 3, 5):
            assert rep.lambda_i[i] == pytest.approx(0.243790, abs=1e-6)

    def test_vertex_fails(self):
        rep = kkt_check(UvParams(0.5, 0.25, math.sqrt(3) / 4), (1, 0, 0, 0, 0, 0))
        assert not rep.passed
        assert min(rep.lambda_i[2:]) < 0
        assert rep.feasibility_ok

    def test_infeasible_weights(self):
        rep = kkt_check(UvParams(0.3, 0.0, 0.0), (0.7, 0.2, 0, 0, 0, 0))
        assert not rep.feasibility_ok and not rep.passed

    def test_analytic_solutions_pass_and_perturbations_fail(self, ball_points):
        perturbed = failed = 0
        for pt in ball_points:
            canon, cmap = canonicalize(as_bloch(pt))
            w = cmap.apply_weights(solve(as_bloch(pt)).weights)
            assert kkt_check(canon, w).passed
            for j in range(6):
                if w[j] > 1e-9:
                    continue
                wp = [0.95 * x for x in w]
                wp[j] += 0.05
                perturbed += 1
                failed += not kkt_check(canon, wp).passed
        assert failed == perturbed

    def test_case_iv_boundary_identity(self):
        # lambda_0 >= 0 exactly where u + v >= (3 - 4a)/2
        for a in np.linspace(0.3, 0.5, 41):
            edge = (3 - 4 * a) / 2
            for s in np.linspace(edge - 0.05, edge + 0.05, 41):
                for frac in (0.3, 0.5, 0.7):
                    u, v = frac * s, (1 - frac) * s
                    p = UvParams(a, u, v)
                    w = (0, 0, 0.5 + u - v, 0, 0.5 - u + v, 0)
                    lam0 = kkt_check(p, w).lambda_i[0]
                    margin = u + v - edge
                    if abs(margin) < 1e-12:
                        assert abs(lam0) < 1e-12
                    else:
                        assert (lam0 >= 0) == (margin >= 0)


def _restricted_kkt(canon: UvParams, support):
    """KKT report for the best weights supported on ``support`` (canonical order)."""
    sub = B3.subset(list(support))
    fw = frank_wolfe_solve(sub, canon.bloch, SolverConfig(tol=1e-14))
    w = [0.0] * 6
    for i, x in zip(support, fw.weights):
        w[i] = x
    return kkt_check(canon, w, tol=1e-6), min(fw.weights)


THREE_SUPPORTS = [(0, 2, 4), (0, 2, 5), (0, 3, 5), (1, 2, 4), (1, 2, 5), (1, 3, 5)]
OPTIMAL_SUPPORT = {
    Region.CASE_I: (0, 2, 4),
    Region.CASE_II: (0, 2),
    Region.CASE_III: (0, 4),
    Region.CASE_IV: (2, 4),
}
NON_ANTIPODAL_PAIRS = [p for p in itertools.combinations(range(6), 2) if p[0] // 2 != p[1] // 2]


@pytest.mark.parametrize("region", list(OPTIMAL_SUPPORT))
def test_no_other_support_is_stationary(region, rng):
    """Only the region's own support pattern admits a KKT point with full support."""
    found = 0
    for pt in np.abs(sample_ball(rng, 4000)):
        canon, _ = canonicalize(as_bloch(pt))
        sol = solve(as_bloch(pt))
        if sol.region is not region or min(w for w in sol.weights if w > 0) < 1e-3:
            continue
        found += 1
        rep, _ = _restricted_kkt(canon, OPTIMAL_SUPPORT[region])
        assert rep.passed
        for support in THREE_SUPPORTS + NON_ANTIPODAL_PAIRS:
            if support == OPTIMAL_SUPPORT[region]:
                continue
            rep, wmin = _restricted_kkt(canon, support)
            # either not stationary, or the optimum leaves the pattern's interior
            assert not rep.passed or wmin < 1e-6
        if found == 15:
            break
    assert found == 15
