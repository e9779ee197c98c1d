import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aniso_spectra import (
    AsymmetricLinear,
    DegenerateKernel,
    EuclideanScaled,
    InputError,
    KernelCategory,
    NotDegenerateLine,
    Regularized,
    SplitPNorm,
    SupportPolygon,
    ZeroAnisotropy,
    anisotropy_from_json,
    differentiability_scan,
    dual,
    kernel_classify,
    lower_bound_rotation,
    norm_sup,
    rotation,
    rotation_normal_form,
)
from aniso_spectra.anisotropy import _max_on_circle, numeric_kink_scan, unit

L1_BALL = SupportPolygon([[0, 1], [0, -1], [1, 0], [-1, 0]])
STORED_SQUARE = SupportPolygon([[1, 1], [-1, 1], [-1, -1], [1, -1]])


def circle_points(n):
    th = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    return np.column_stack([np.cos(th), np.sin(th)])


class TestEvaluate:
    def test_one_sided_vertical(self):
        H = AsymmetricLinear(1, 0, math.pi / 2)
        assert H([3.0, 2.0]) == 2.0
        assert H([3.0, -2.0]) == 0.0

    def test_support_polygon_max_dot(self):
        assert L1_BALL([1.0, 1.0]) == 1.0

    def test_regularized_matches_smoothing_formula(self):
        H = Regularized(0.25, AsymmetricLinear(1, 0, math.pi / 2))
        assert H([0.0, -2.0]) == pytest.approx(1.0, abs=1e-15)
        v = np.array([0.7, 1.3])
        expect = math.sqrt(0.25 * (v @ v) + max(v[1], 0.0) ** 2)
        assert H(v) == pytest.approx(expect, rel=1e-15)

    def test_vectorized_shapes(self):
        pts = np.random.default_rng(0).normal(size=(10, 2))
        out = L1_BALL(pts)
        assert out.shape == (10,)
        assert out[3] == L1_BALL(pts[3])


class TestNormSup:
    def test_asymmetric_linear_max_ab(self):
        assert norm_sup(AsymmetricLinear(3, 1, 0.3)) == 3.0
        assert norm_sup(AsymmetricLinear(1, 4, 0.3)) == 4.0

    def test_euclidean(self):
        assert norm_sup(EuclideanScaled(1.0)) == 1.0

    def test_polygon_largest_vertex_with_dense_oracle(self):
        H = SupportPolygon([[0, 2], [0, -1], [0.5, 0], [-0.5, 0]])
        assert norm_sup(H) == 2.0
        dense = H(circle_points(1_000_000)).max()
        assert norm_sup(H) == pytest.approx(dense, rel=1e-10)

    @pytest.mark.parametrize(
        "H",
        [
            SplitPNorm(1.5, 2.5, "E1"),
            SplitPNorm(1.0, 1.0, "E1"),
            SplitPNorm(2.0, 1.7, "E3a", theta=0.5),
            SplitPNorm(1.0, 3.0, "E3b", theta=-0.9),
            Regularized(0.3, AsymmetricLinear(2, 1, 0.4)),
        ],
    )
    def test_analytic_variants_against_scan(self, H):
        scanned = _max_on_circle(H)[1]
        assert norm_sup(H) == pytest.approx(scanned, rel=1e-10, abs=1e-10)


class TestKernelClassify:
    def test_line(self):
        k = kernel_classify(AsymmetricLinear(1, 1, math.pi / 2))
        assert k.category is KernelCategory.LINE
        assert k.angles[0] == pytest.approx(0.0, abs=1e-12)

    def test_half_plane(self):
        k = kernel_classify(AsymmetricLinear(1, 0, math.pi / 2))
        assert k.category is KernelCategory.HALF_PLANE
        assert k.angles[0] == pytest.approx(math.pi, abs=1e-12)

    def test_zero_only(self):
        assert kernel_classify(EuclideanScaled(1.0)).category is KernelCategory.ZERO_ONLY
        assert kernel_classify(L1_BALL).category is KernelCategory.ZERO_ONLY

    def test_half_line_and_sectors(self):
        assert kernel_classify(SplitPNorm(1, 2, "E1")).category is KernelCategory.HALF_LINE
        k = kernel_classify(SplitPNorm(1, 1, "E3a"))
        assert k.category is KernelCategory.SECTOR
        assert k.angles == pytest.approx((math.pi * 1.25, math.pi * 1.75))
        k = kernel_classify(SplitPNorm(1, 2, "E3b"))
        assert k.angles == pytest.approx((math.pi, 1.5 * math.pi))

    def test_zero_anisotropy_flagged(self):
        assert AsymmetricLinear(0, 0, 0.0).is_zero
        assert kernel_classify(AsymmetricLinear(0, 0, 0.0)).category is KernelCategory.PLANE
        assert kernel_classify(SupportPolygon([[0.0, 0.0]])).category is KernelCategory.PLANE

    def test_polygon_kernels(self):
        seg = SupportPolygon([[0, -1], [0, 2]])
        assert kernel_classify(seg).category is KernelCategory.LINE
        ray = SupportPolygon([[0, 0], [0, 1]])
        assert kernel_classify(ray).category is KernelCategory.HALF_PLANE
        tri = SupportPolygon([[0, 1], [0, -1], [1, 0]])
        k = kernel_classify(tri)
        assert k.category is KernelCategory.HALF_LINE
        assert k.angles[0] == pytest.approx(math.pi)

    @pytest.mark.parametrize("seed", range(8))
    def test_kernel_zero_set_agreement(self, seed):
        rng = np.random.default_rng(seed)
        pts = rng.normal(size=(rng.integers(2, 7), 2))
        pts = np.vstack([pts, -0.3 * pts[0]])  # keep the origin inside the hull
        try:
            H = SupportPolygon(pts)
        except InputError:
            pytest.skip("origin fell outside the hull")
        k = kernel_classify(H)
        sup = norm_sup(H)
        if sup == 0.0:
            assert k.category is KernelCategory.PLANE
            return
        for th in np.linspace(0.0, 2 * math.pi, 720, endpoint=False):
            inside = k.contains_direction(th, margin=1e-9)
            val = H(unit(th))
            if inside:
                assert val <= 1e-10 * sup
            elif not k.contains_direction(th, margin=1e-6):
                assert val > 0.0


class TestRotationNormalForm:
    def test_rotated_asymmetric_linear(self):
        H = AsymmetricLinear(2, 3, math.pi / 2 + math.pi / 6)
        A, a, b = rotation_normal_form(H)
        v = np.random.default_rng(1).normal(size=(1000, 2))
        lhs = H(v @ A.T)
        rhs = a * np.maximum(v[:, 1], 0) + b * np.maximum(-v[:, 1], 0)
        assert np.max(np.abs(lhs - rhs)) <= 1e-9
        assert sorted([a, b]) == pytest.approx([2.0, 3.0])

    def test_y_plus_identity(self):
        A, a, b = rotation_normal_form(AsymmetricLinear(1, 0, math.pi / 2))
        assert np.allclose(A, np.eye(2))
        assert (a, b) == (1.0, 0.0)

    def test_rotated_segment_polygon(self):
        A45 = rotation(math.pi / 4)
        H = SupportPolygon(np.array([[0.0, -1.0], [0.0, 2.0]]) @ A45.T)
        A, a, b = rotation_normal_form(H)
        assert (a, b) == (pytest.approx(2.0), pytest.approx(1.0))
        assert math.atan2(A[1, 0], A[0, 0]) == pytest.approx(math.pi / 4)

    def test_rejects_zero_only(self):
        with pytest.raises(NotDegenerateLine):
            rotation_normal_form(EuclideanScaled(1.0))


class TestLowerBoundRotation:
    @pytest.mark.parametrize(
        "H",
        [
            AsymmetricLinear(1, 0, math.pi / 2),
            AsymmetricLinear(3, 1, 0.8),
            EuclideanScaled(1.0),
            SplitPNorm(1.2, 1.7, "E1", theta=0.3),
            STORED_SQUARE,
        ],
    )
    def test_bound_holds_on_samples(self, H, rng):
        A = lower_bound_rotation(H)
        v = rng.normal(size=(1000, 2))
        assert np.all(H(v @ A.T) >= norm_sup(H) * np.maximum(v[:, 1], 0.0) - 1e-9)

    def test_euclidean_identity(self):
        assert np.allclose(lower_bound_rotation(EuclideanScaled(1.0)), np.eye(2))

    def test_zero_rejected(self):
        with pytest.raises(ZeroAnisotropy):
            lower_bound_rotation(AsymmetricLinear(0, 0, 0.0))


class TestDual:
    def test_square_diamond_polarity(self):
        # stored diamond = sup-norm gauge, unit ball the square
        diamond = L1_BALL
        polar = dual(diamond)
        expect = np.array([[-1, -1], [1, -1], [1, 1], [-1, 1]], dtype=float)
        assert np.allclose(polar.hull, expect)

    def test_involution(self):
        back = dual(dual(L1_BALL))
        assert np.allclose(back.hull, L1_BALL.hull, atol=1e-12)

    def test_scaled_square_to_scaled_diamond(self):
        # brute-force polar: H(v) = max over sampled boundary of <v,q>/1
        H = SupportPolygon(2.0 * STORED_SQUARE.vertices)
        polar = dual(H)
        expect = 0.5 * np.array([[-1, 0], [0, -1], [1, 0], [0, 1]], dtype=float)
        assert np.allclose(np.sort(polar.hull, axis=0), np.sort(expect, axis=0))
        # oracle: the dual's values are suprema of <v,w> over {H(w) <= 1}
        rng = np.random.default_rng(3)
        vs = rng.normal(size=(50, 2))
        boundary = circle_points(20000)
        boundary = boundary / H(boundary)[:, None]  # points with H = 1
        brute = (vs @ boundary.T).max(axis=1)
        assert np.allclose(polar(vs), brute, rtol=1e-6, atol=1e-8)

    def test_disk_selfpolar(self):
        gon = SupportPolygon(circle_points(96))
        polar = dual(gon)
        radii = np.linalg.norm(polar.hull, axis=1)
        assert np.max(np.abs(radii - 1.0)) <= 1e-3  # Hausdorff to the unit disk

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateKernel):
            dual(SupportPolygon([[0, 0], [0, 1], [1, 0]]))
        with pytest.raises(InputError):
            dual(EuclideanScaled(1.0))


class TestDifferentiabilityScan:
    def test_l1_gauge_axis_directions(self):
        dirs = differentiability_scan(STORED_SQUARE)
        assert np.allclose(
            np.sort(dirs), [0.0, math.pi / 2, math.pi, 1.5 * math.pi], atol=1e-9
        )

    def test_euclidean_smooth(self):
        assert differentiability_scan(EuclideanScaled(1.0)).size == 0

    def test_general_polygon_matches_fd_oracle(self):
        rng = np.random.default_rng(5)
        pts = rng.normal(size=(7, 2))
        pts -= pts.mean(axis=0)
        H = SupportPolygon(pts)
        exact = differentiability_scan(H)
        assert len(exact) == len(H.hull)
        numeric = numeric_kink_scan(H)
        assert len(numeric) == len(exact)
        assert np.allclose(np.sort(numeric), np.sort(exact), atol=1e-6)

    def test_regularized_smooths_kernel_kink_only(self):
        # the smoothing family of a one-sided linear weight is C^1
        assert differentiability_scan(
            Regularized(0.1, AsymmetricLinear(1, 0, math.pi / 2))
        ).size == 0
        # but kinks away from the kernel survive regularization
        dirs = differentiability_scan(Regularized(0.1, STORED_SQUARE))
        assert len(dirs) == 4


class TestJson:
    @pytest.mark.parametrize(
        "H",
        [
            L1_BALL,
            AsymmetricLinear(2, 0.5, 1.1),
            EuclideanScaled(3.0),
            SplitPNorm(1.0, 2.0, "E3b", theta=0.2),
            Regularized(0.01, AsymmetricLinear(1, 0, math.pi / 2)),
        ],
    )
    def test_round_trip(self, H, rng):
        back = anisotropy_from_json(H.to_json())
        v = rng.normal(size=(200, 2))
        assert np.allclose(H(v), back(v), rtol=1e-14, atol=1e-14)

    def test_bad_inputs(self):
        with pytest.raises(InputError):
            anisotropy_from_json({"kind": "nope"})
        with pytest.raises(InputError):
            anisotropy_from_json({"kind": "euclidean"})
        with pytest.raises(InputError):
            anisotropy_from_json({"kind": "support_polygon", "vertices": [[1, 0]]})


@settings(max_examples=200, deadline=None)
@given(
    a=st.floats(0.0, 10.0),
    b=st.floats(0.0, 10.0),
    theta=st.floats(-10.0, 10.0),
    x=st.floats(-100.0, 100.0),
    y=st.floats(-100.0, 100.0),
    s=st.floats(0.01, 100.0),
)
def test_asymmetric_linear_homogeneity_hypothesis(a, b, theta, x, y, s):
    H = AsymmetricLinear(a, b, theta)
    v = np.array([x, y])
    assert H(v) >= 0.0
    assert H(s * v) == pytest.approx(s * H(v), rel=1e-12, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10_000))
def test_support_polygon_convexity_hypothesis(seed):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(5, 2))
    pts -= pts.mean(axis=0)
    H = SupportPolygon(pts)
    v, w = rng.normal(size=(2, 2))
    t = rng.uniform()
    mid = H(t * v + (1 - t) * w)
    assert mid <= t * H(v) + (1 - t) * H(w) + 1e-12 * (1 + abs(mid))
