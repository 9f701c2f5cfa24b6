import numpy as np
import pytest

from conftest import circle_waypoints
from qcmaps import realizer as rz
from qcmaps.canonical_maps import StretchSpec, oriented_stretch
from qcmaps.errors import InvalidInputError, OriginError, PlanningError

E1 = np.array([1.0, 0.0, 0.0])


class TestTargetSet:
    def test_annulus_bound_inferred(self):
        t = rz.TargetSet(waypoints=np.array([[2.0, 0, 0], [0.0, 0.5, 0]]))
        assert t.annulus_bound >= 2.0

    def test_origin_waypoint_rejected(self):
        with pytest.raises(InvalidInputError):
            rz.TargetSet(waypoints=np.array([[0.0, 0, 0], [1.0, 0, 0]]))

    def test_coincident_waypoints_rejected(self):
        with pytest.raises(InvalidInputError):
            rz.TargetSet(waypoints=np.array([[1.0, 0, 0], [1.0, 0, 0]]))

    def test_annulus_violation_rejected(self):
        with pytest.raises(InvalidInputError):
            rz.TargetSet(waypoints=np.array([[3.0, 0, 0], [1.0, 0, 0]]), annulus_bound=2.0)


class TestPlanPaths:
    def test_singleton_target(self):
        t = rz.TargetSet(waypoints=np.array([[2.0, 0, 0]]))
        plans = rz.plan_paths(t, 4)
        assert plans == [[], [], [], []]

    def test_radial_segment_target(self):
        t = rz.TargetSet(waypoints=np.array([[1.0, 0, 0], [3.0, 0, 0]]))
        plans = rz.plan_paths(t, 3)
        for k, plan in enumerate(plans, start=1):
            assert len(plan) == 1 and isinstance(plan[0], rz.RadialSegment)
            if k % 2 == 1:
                assert (plan[0].u1, plan[0].u2) == (1.0, 3.0)
            else:
                assert (plan[0].u1, plan[0].u2) == (3.0, 1.0)
        # trace = the segment itself: zero Hausdorff gap to the polyline
        trace = np.concatenate([rz._segment_trace(s) for s in plans[0]])
        poly = rz._polyline_samples(t.waypoints, False)
        assert rz.hausdorff_distance(trace, poly) <= 1e-12

    def test_quarter_circle_arc_only(self):
        t = rz.TargetSet(waypoints=circle_waypoints())
        plans = rz.plan_paths(t, 5)
        assert all(isinstance(s, rz.ArcSegment) for s in plans[0])
        trace = np.concatenate([rz._segment_trace(s) for s in plans[0]])
        poly = rz._polyline_samples(t.waypoints, False)
        assert rz.hausdorff_distance(trace, poly) <= 0.5 / 5

    def test_wide_arc_subdivided(self):
        # hops of 0.6 pi exceed the quarter-turn cap and get split; radius 1
        # keeps the arc-chord gap inside the depth-1 tolerance
        w = circle_waypoints(radius=1.0, span=1.2 * np.pi, count=3)
        t = rz.TargetSet(waypoints=w)
        plans = rz.plan_paths(t, 1)
        assert len(plans[0]) == 4
        assert all(s.angle <= np.pi / 2 + 1e-9 for s in plans[0])

    def test_antipodal_hop_rejected(self):
        t = rz.TargetSet(waypoints=np.array([[2.0, 0, 0], [-2.0, 0, 0]]))
        with pytest.raises(PlanningError):
            rz.plan_paths(t, 2)

    def test_sparse_waypoints_rejected_at_depth(self):
        # a half circle from two waypoint hops: fine at k = 1, too coarse deep
        w = circle_waypoints(span=np.pi * 0.9, count=3)
        t = rz.TargetSet(waypoints=w)
        rz.plan_paths(t, 1)
        with pytest.raises(PlanningError):
            rz.plan_paths(t, 30)

    def test_plans_chain_end_to_start(self):
        t = rz.TargetSet(waypoints=circle_waypoints(count=5))
        plans = rz.plan_paths(t, 4)
        for a, b in zip(plans[:-1], plans[1:]):
            end = a[-1].sigma2 if isinstance(a[-1], rz.ArcSegment) else a[-1].sigma
            start = b[0].sigma1 if isinstance(b[0], rz.ArcSegment) else b[0].sigma
            assert np.allclose(end, start, atol=1e-12)


class TestBuildMap:
    def test_empty_plan_is_identity(self):
        rm = rz.build_map([[], []], n=3)
        assert len(rm.pieces) == 0 and rm.outer_K == 1.0
        x = np.array([0.3, -0.4, 1.2])
        assert np.allclose(rz.eval_map(rm, x), x)

    def test_single_radial_piece_factors(self):
        seg = rz.RadialSegment(1.0, 2.0, E1)
        rm = rz.build_map([[seg]])
        assert len(rm.pieces) == 1
        p = rm.pieces[0]
        assert p.kind == "interp"
        assert p.K == pytest.approx(1.0)
        assert p.L == pytest.approx(2.0 ** 1.5)
        # boundary maps are the pure stretches with those factors
        rng = np.random.default_rng(0)
        dirs = rng.standard_normal((200, 3))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        for r, kfac in ((p.r_out, p.K), (p.r_in, p.L)):
            got = rz.eval_map_batch(rm, r * dirs)
            want = oriented_stretch(
                r * dirs, StretchSpec(K=kfac, frame=np.eye(3))
            )
            assert np.abs(got - want).max() <= 1e-12 * r

    def test_single_arc_piece(self):
        seg = rz.ArcSegment(1.0, E1, np.array([0.0, 1.0, 0.0]))
        rm = rz.build_map([[seg]])
        p = rm.pieces[0]
        assert p.kind == "spiral" and p.K == pytest.approx(1.0)
        assert p.theta == pytest.approx(np.pi / 2)
        expected_exit = p.frame @ rz.planar_rotation(np.pi / 2, 0, 1, 3)
        assert np.allclose(p.exit_frame, expected_exit)

    def test_interface_agreement(self, quarter_circle_map):
        rm, _, _ = quarter_circle_map
        rng = np.random.default_rng(1)
        worst = 0.0
        for i, p in enumerate(rm.pieces):
            dirs = rng.standard_normal((100, 3))
            dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
            x = p.r_in * dirs
            above = rz._apply_piece(p, x, np.full(100, p.r_in))
            if i + 1 < len(rm.pieces):
                below = rz._apply_piece(rm.pieces[i + 1], x, np.full(100, p.r_in))
            else:
                below = rz._apply_boundary_stretch(
                    x, np.full(100, p.r_in), rm.inner_K, rm.inner_frame
                )
            worst = max(worst, np.abs(above - below).max() / p.r_in)
        assert worst <= 1e-9

    def test_out_of_plane_arc_rejected(self):
        segs = [
            rz.ArcSegment(1.0, E1, np.array([0.0, 1.0, 0.0])),
            rz.ArcSegment(1.0, np.array([0.0, 1.0, 0.0]), np.array([0.0, 0.0, 1.0])),
        ]
        with pytest.raises(PlanningError):
            rz.build_map([segs])


class TestEvalMap:
    def test_outer_identity(self):
        rm = rz.build_map([[]], n=3)
        x = np.array([5.0, 1.0, -2.0])
        assert np.allclose(rz.eval_map(rm, x), x)

    def test_origin_rejected(self):
        rm = rz.build_map([[]], n=3)
        with pytest.raises(OriginError):
            rz.eval_map(rm, np.zeros(3))

    def test_pure_stretch_configuration(self):
        # degenerate single-piece map (K = L) reproduces the oriented stretch
        rm = rz.RealizedMap(
            pieces=(
                rz.ShellPiece(
                    r_out=1.0,
                    r_in=float(np.exp(-1.0)),
                    kind="interp",
                    frame=np.eye(3),
                    K=2.0 ** 1.5,
                    L=2.0 ** 1.5,
                    s=-1.0,
                    t=0.0,
                    u_exit=2.0,
                    sigma_exit=E1,
                ),
            ),
            outer_K=2.0 ** 1.5,
            outer_frame=np.eye(3),
            n=3,
        )
        rng = np.random.default_rng(2)
        pts = rng.standard_normal((300, 3))
        pts = pts[np.linalg.norm(pts, axis=1) > 1e-3]
        spec = StretchSpec(K=2.0 ** 1.5, frame=np.eye(3))
        got = rz.eval_map_batch(rm, pts)
        assert np.abs(got - oriented_stretch(pts, spec)).max() <= 1e-12


class TestMeanRadius:
    def test_pure_stretch_k8(self):
        rm = rz.RealizedMap(pieces=(), outer_K=8.0, outer_frame=np.eye(3), n=3)
        assert rz.mean_radius(rm, 0.37) / 0.37 == pytest.approx(2.0, abs=1e-12)

    def test_identity_everywhere(self):
        rm = rz.build_map([[]], n=3)
        for r in (0.01, 1.0, 40.0):
            assert rz.mean_radius(rm, r) == pytest.approx(r, abs=1e-9 * r)

    def test_quadrature_vs_monte_carlo(self):
        seg = rz.RadialSegment(1.0, 2.0, E1)
        rm = rz.build_map([[seg]])
        p = rm.pieces[0]
        r_mid = float(np.sqrt(p.r_in * p.r_out))
        rho = rz.mean_radius(rm, r_mid)
        rng = np.random.default_rng(3)
        dirs = rng.standard_normal((1_000_000, 3))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        img = rz.eval_map_batch(rm, r_mid * dirs)
        rho_mc = float(np.mean(np.linalg.norm(img, axis=1) ** 3) ** (1.0 / 3.0))
        assert abs(rho - rho_mc) / rho_mc <= 1e-2


class TestOrbit:
    def test_rescaled_tip_matches_volume_normalization(self):
        # global stretch by K: the e_1 tip rescales to K^{1-1/n} sigma
        rm = rz.RealizedMap(pieces=(), outer_K=8.0, outer_frame=np.eye(3), n=3)
        tip = rz.rescaled_map(rm, 0.11, E1)
        assert np.allclose(tip, [4.0, 0, 0], atol=1e-12)

    def test_rescaled_map_homogeneous(self):
        rm = rz.RealizedMap(pieces=(), outer_K=3.0, outer_frame=np.eye(3), n=3)
        x = np.array([0.3, 0.4, 0.5])
        a = rz.rescaled_map(rm, 0.5, x)
        b = rz.rescaled_map(rm, 0.01, x)
        assert np.abs(a - b).max() <= 1e-12

    def test_identity_orbit_constant(self):
        rm = rz.build_map([[]], n=3)
        gamma = rz.orbit_curve(rm, np.geomspace(1.0, 1e-4, 50))
        assert np.abs(gamma - E1).max() <= 1e-12

    def test_radial_plan_checkpoints(self):
        seg = rz.RadialSegment(1.0, 2.0, E1)
        rm = rz.build_map([[seg]])
        p = rm.pieces[0]
        g_out = rz.rescaled_map(rm, p.r_out, E1)
        g_in = rz.rescaled_map(rm, p.r_in, E1)
        assert np.linalg.norm(g_out - E1) <= 1e-6
        assert np.linalg.norm(g_in - 2.0 * E1) <= 1e-6

    def test_radial_orbit_direction_and_range(self):
        seg = rz.RadialSegment(1.0, 2.0, E1)
        rm = rz.build_map([[seg, rz.RadialSegment(2.0, 1.0, E1)]])
        ts = rz.default_orbit_times(rm, per_piece=150)
        gamma = rz.orbit_curve(rm, ts)
        assert np.abs(gamma[:, 1:]).max() <= 1e-6
        radii = gamma[:, 0]
        assert radii.min() >= 1.0 - 1e-6 and radii.max() <= 2.0 + 1e-6
        assert radii.min() <= 1.0 + 1e-3 and radii.max() >= 2.0 - 1e-3

    def test_quarter_circle_checkpoints(self, quarter_circle_map):
        rm, _, _ = quarter_circle_map
        errs = [
            np.linalg.norm(rz.rescaled_map(rm, r, E1) - u * sig)
            for r, u, sig in rm.checkpoints
        ]
        assert max(errs) <= 1e-6

    def test_orbit_in_annulus(self, quarter_circle_map):
        rm, _, _ = quarter_circle_map
        ts = rz.default_orbit_times(rm, per_piece=60)
        radii = np.linalg.norm(rz.orbit_curve(rm, ts), axis=1)
        assert radii.min() >= 1.0 / 2.5 and radii.max() <= 2.5


class TestHausdorff:
    def test_identical_sets(self):
        pts = np.random.default_rng(4).uniform(-1, 1, (50, 3))
        assert rz.hausdorff_distance(pts, pts) == 0.0

    def test_point_pair(self):
        assert rz.hausdorff_distance([[0.0, 0, 0]], [[1.0, 0, 0]]) == 1.0

    def test_concentric_circles(self):
        th = np.linspace(0, 2 * np.pi, 3000, endpoint=False)
        c1 = np.stack([np.cos(th), np.sin(th), 0 * th], axis=1)
        c2 = 2.0 * c1
        assert rz.hausdorff_distance(c1, c2) == pytest.approx(1.0, abs=1e-5)

    def test_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            rz.hausdorff_distance(np.empty((0, 3)), np.ones((1, 3)))


class TestInjectivity:
    def test_expansion_ratio_positive(self, quarter_circle_map):
        rm, _, _ = quarter_circle_map
        ratio = rz.min_expansion_ratio(rm, 20_000, seed=5)
        assert ratio >= 1e-8
