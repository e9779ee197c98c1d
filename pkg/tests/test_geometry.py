import math

import numpy as np
import pytest

from aniso_spectra import geometry as geo
from aniso_spectra.anisotropy import rotation
from aniso_spectra.errors import InputError


class TestPolygon:
    def test_area_and_orientation_normalization(self):
        cw = geo.Polygon([[0, 0], [0, 1], [1, 1], [1, 0]])  # clockwise input
        assert cw.area == pytest.approx(1.0)
        assert geo._signed_area(cw.outer) > 0.0

    def test_holes(self):
        p = geo.Polygon(
            [[0, 0], [3, 0], [3, 3], [0, 3]],
            holes=[[[1, 1], [2, 1], [2, 2], [1, 2]]],
        )
        assert p.area == pytest.approx(8.0)
        inside = p.contains(np.array([[0.5, 0.5], [1.5, 1.5]]))
        assert inside.tolist() == [True, False]

    def test_rejects_self_intersection(self):
        with pytest.raises(InputError):
            geo.Polygon([[0, 0], [1, 1], [1, 0], [0, 1]])

    def test_rejects_bad_holes(self):
        with pytest.raises(InputError):
            geo.Polygon([[0, 0], [1, 0], [1, 1], [0, 1]],
                        holes=[[[2, 2], [3, 2], [3, 3], [2, 3]]])

    def test_json_round_trip(self):
        p = geo.l_shape()
        q = geo.polygon_from_json(p.to_json())
        assert np.allclose(p.outer, q.outer)

    def test_diameter(self):
        assert geo.unit_square().diameter == pytest.approx(math.sqrt(2.0))


class TestSlice:
    def test_unit_square_mid(self):
        prof = geo.slice_profile(geo.unit_square(), 0.5)
        assert prof.components == ((0.0, 1.0),)

    def test_two_armed_slice(self):
        prof = geo.slice_profile(geo.slit_square(), 0.6)
        assert len(prof.components) == 2
        assert prof.components[0] == pytest.approx((0.0, 0.49))
        assert prof.components[1] == pytest.approx((0.51, 1.0))

    def test_rotated_rectangle_center_chord(self):
        tilt = math.radians(25)
        rect = geo.rectangle(2.0, 1.0, origin=(-1.0, -0.5)).rotated(tilt)
        prof = geo.slice_profile(rect, 0.0)
        # the vertical chord through the center has length height / cos(tilt)
        assert prof.max_component == pytest.approx(1.0 / math.cos(tilt), rel=1e-12)

    def test_empty_outside(self):
        assert geo.slice_profile(geo.unit_square(), 2.0).components == ()


class TestWidth:
    def test_square_axes_and_diagonal(self):
        sq = geo.unit_square()
        assert geo.width(sq, 0.0) == pytest.approx(1.0)
        assert geo.width(sq, math.pi / 2) == pytest.approx(1.0)
        assert geo.width(sq, math.pi / 4) == pytest.approx(math.sqrt(2.0))

    @pytest.mark.parametrize("k", [2, 8])
    def test_long_thin_rectangle(self, k):
        assert geo.width(geo.rectangle(k, 1.0 / k), 0.0) == pytest.approx(float(k))

    def test_rotation_equivariance(self, hexagon, rng):
        for _ in range(25):
            ang = rng.uniform(0, 2 * math.pi)
            th = rng.uniform(0, math.pi)
            assert geo.width(hexagon, th) == pytest.approx(
                geo.width(hexagon.rotated(ang), th + ang), abs=1e-9
            )

    def test_period_pi_exact_for_dyadic_angles(self, hexagon, rng):
        for _ in range(25):
            th = round(rng.uniform(0, math.pi) * 2.0**48) / 2.0**48
            assert geo.width(hexagon, th) == geo.width(hexagon, th + math.pi)

    def test_monotone_under_inclusion(self):
        inner = geo.rectangle(0.6, 0.7, origin=(0.2, 0.1))
        outer = geo.unit_square()
        for th in np.linspace(0, math.pi, 32, endpoint=False):
            assert geo.width(inner, th) <= geo.width(outer, th) + 1e-12

    def test_bounded_by_diameter(self, hexagon):
        diam = hexagon.diameter
        for th in np.linspace(0, math.pi, 64, endpoint=False):
            assert geo.width(hexagon, th) <= diam + 1e-9


class TestWidthCurve:
    def test_square(self):
        wc = geo.width_curve(geo.unit_square(), samples=256)
        assert wc.argmax_theta == pytest.approx(math.pi / 4, abs=1e-9)
        assert wc.sup_value == pytest.approx(math.sqrt(2.0), rel=1e-12)
        assert wc.attained

    def test_disk_flat(self):
        disk = geo.regular_polygon(96, 0.5)
        wc = geo.width_curve(disk, samples=64)
        assert np.ptp(wc.values) <= 1e-3
        assert wc.sup_value == pytest.approx(1.0, abs=1e-3)

    def test_long_rectangle_diagonal(self):
        wc = geo.width_curve(geo.rectangle(4.0, 1.0), samples=256)
        assert wc.argmax_theta == pytest.approx(math.atan(0.25), abs=1e-3)
        assert wc.sup_value == pytest.approx(math.sqrt(17.0), rel=1e-9)

    def test_tie_breaks_to_smallest_angle(self):
        wc = geo.width_curve(geo.unit_square(), samples=64)
        # both pi/4 and 3pi/4 attain sqrt(2); the smaller angle is reported
        assert wc.argmax_theta <= math.pi / 2


class TestLOmega:
    def test_identity_square(self):
        assert geo.l_omega(geo.unit_square(), np.eye(2)) == pytest.approx(1.0)

    def test_rot45_square(self):
        A = rotation(math.pi / 4)
        assert geo.l_omega(geo.unit_square(), A) == pytest.approx(math.sqrt(2.0))

    def test_rect_aligned_with_long_side(self):
        # A maps (0,1) to the long-side direction (the y-axis already)
        assert geo.l_omega(geo.rectangle(2, 3), np.eye(2)) == pytest.approx(3.0)

    def test_matches_width_of_image_direction(self, hexagon, rng):
        for _ in range(10):
            ang = rng.uniform(0, 2 * math.pi)
            A = rotation(ang)
            theta_img = math.atan2(A[1, 1], A[0, 1])  # direction of A(0,1)
            assert geo.l_omega(hexagon, A) == pytest.approx(
                geo.width(hexagon, theta_img), abs=1e-9
            )


class TestStripConditions:
    def test_rectangle_full_strip(self):
        rep = geo.strip_condition_report(geo.rectangle(2, 1), np.eye(2), scan=512)
        assert rep.slices_bounded
        assert rep.L == pytest.approx(1.0)
        assert rep.strip_found
        lo, hi = rep.strip_interval
        assert lo == pytest.approx(0.0, abs=1e-6)
        assert hi == pytest.approx(2.0, abs=1e-6)
        assert rep.strip.area == pytest.approx(2.0, rel=1e-3)

    def test_triangle_has_no_strip(self):
        tri = geo.Polygon([[0, 0], [1, 0], [0.5, 1.0]])
        rep = geo.strip_condition_report(tri, np.eye(2), scan=512)
        assert not rep.strip_found

    def test_slit_square_leftmost_strip(self):
        rep = geo.strip_condition_report(geo.slit_square(), np.eye(2), scan=1024)
        assert rep.strip_found
        lo, hi = rep.strip_interval
        assert lo == pytest.approx(0.0, abs=1e-5)
        assert hi == pytest.approx(0.25, abs=1e-5)  # the slit band is excluded

    def test_rotated_rectangle_with_aligning_rotation(self):
        ang = math.radians(30)
        dom = geo.rectangle(2, 1).rotated(ang)
        rep = geo.strip_condition_report(dom, rotation(ang), scan=512)
        assert rep.L == pytest.approx(1.0, rel=1e-9)
        assert rep.strip_found
