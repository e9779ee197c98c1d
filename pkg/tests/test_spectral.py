import math

import numpy as np
import pytest

from aniso_spectra import geometry as geo
from aniso_spectra import oned, solver2d, spectral
from aniso_spectra.anisotropy import (
    AsymmetricLinear,
    EuclideanScaled,
    KernelCategory,
    kernel_classify,
    rotation,
)
from aniso_spectra.errors import NotDegenerateLine, SandwichViolation, ZeroAnisotropy


class TestLambdaDegenerate:
    def test_symmetric_line_kernel_on_square(self):
        H = AsymmetricLinear(1, 1, math.pi / 2)
        for p in (1.5, 2.0, 3.0):
            assert spectral.lambda_degenerate(H, p, geo.unit_square()) == pytest.approx(
                oned.lambda_1p(p, (0.0, 1.0)), rel=1e-12
            )

    def test_half_plane_kernel_on_square(self):
        H = AsymmetricLinear(1, 0, math.pi / 2)
        assert spectral.lambda_degenerate(H, 2.0, geo.unit_square()) == pytest.approx(
            math.pi**2 / 4.0, rel=1e-12
        )

    def test_rotated_kernel_uses_width_in_the_normal_direction(self):
        theta = math.pi / 2 + math.pi / 6
        H = AsymmetricLinear(2, 1, theta)
        sq = geo.unit_square()
        lam = spectral.lambda_degenerate(H, 2.0, sq)
        L = geo.width(sq, theta)  # slices run along the kernel normal
        assert lam == pytest.approx(oned.lambda_ab(2.0, (0.0, L), 2, 1), rel=1e-12)

    def test_rejects_positive_anisotropy(self):
        with pytest.raises(NotDegenerateLine):
            spectral.lambda_degenerate(EuclideanScaled(1.0), 2.0, geo.unit_square())


class TestBounds:
    def test_square_lambda_min(self):
        wb = spectral.lambda_min_bound(2.0, geo.unit_square())
        assert wb.lambda_min == pytest.approx(math.pi**2 / 8.0, rel=1e-9)
        assert wb.argmin_theta == pytest.approx(math.pi / 4.0, abs=1e-9)
        assert wb.design_attained

    def test_disk_lambda_min(self):
        disk = geo.regular_polygon(96, 0.5)
        wb = spectral.lambda_min_bound(2.0, disk)
        assert wb.lambda_min == pytest.approx(math.pi**2 / 4.0, rel=3e-3)
        assert wb.design_attained

    def test_thin_rectangle_decay(self):
        for p in (1.5, 2.0):
            vals = []
            for k in (2.0, 4.0, 8.0):
                dom = geo.rectangle(k, 1.0 / k)
                wb = spectral.lambda_min_bound(p, dom)
                diag = math.hypot(k, 1.0 / k)
                assert wb.lambda_min == pytest.approx(
                    (p - 1.0) * (oned.pi_p(p) / (2.0 * diag)) ** p, rel=1e-9
                )
                vals.append(wb.lambda_min)
            assert vals[0] > vals[1] > vals[2]

    def test_lambda_max_square(self):
        lam, rep = spectral.lambda_max_bound(2.0, geo.unit_square(), resolution=48)
        assert lam == pytest.approx(2.0 * math.pi**2, rel=2e-2)
        assert rep.converged

    @pytest.mark.slow
    def test_lambda_max_disk_extrapolates_to_bessel_anchor(self):
        disk = geo.regular_polygon(64)
        study = solver2d.refine_study(
            EuclideanScaled(1.0), 2.0, disk, [24, 48, 96], seed=0
        )
        lams = [r.lambda_estimate for r in study.reports]
        assert all(b <= a + 1e-9 for a, b in zip(lams, lams[1:]))
        assert study.extrapolated == pytest.approx(5.7832, rel=2e-2)

    def test_bounds_report_combines_both(self):
        rep = spectral.bounds_report(2.0, geo.rectangle(2, 1), resolution=32)
        assert rep.lambda_max == pytest.approx(1.25 * math.pi**2, rel=2e-2)
        diag = math.sqrt(5.0)
        assert rep.lambda_min == pytest.approx(math.pi**2 / (2.0 * diag) ** 2, rel=1e-9)
        assert rep.lambda_min < rep.lambda_max


class TestSandwich:
    def test_euclidean_attains_upper_end(self):
        rep = spectral.sandwich_check(
            EuclideanScaled(2.0), 2.0, geo.unit_square(), resolution=24, seed=0
        )
        assert rep.ok
        assert rep.lambda_hat == pytest.approx(rep.lambda_max, rel=1e-9)

    def test_max_width_halfplane_attains_lower_end(self):
        H0, curve = spectral.max_width_halfplane_anisotropy(geo.unit_square())
        assert curve.argmax_theta == pytest.approx(math.pi / 4.0, abs=1e-9)
        rep = spectral.sandwich_check(
            H0, 2.0, geo.unit_square(), resolution=24, seed=0
        )
        assert rep.method == "closed_form"
        assert rep.lambda_hat == pytest.approx(rep.lambda_min, rel=1e-9)

    def test_random_anisotropies_stay_inside(self, rng):
        dom = geo.regular_polygon(6, 0.7)
        mesh = solver2d.build_mesh(dom, 24)
        lam_max, _ = spectral.lambda_max_bound(2.0, dom, resolution=24, mesh=mesh)
        wb = spectral.lambda_min_bound(2.0, dom)
        for _ in range(3):
            H = spectral.random_support_anisotropy(rng)
            rep = spectral.sandwich_check(
                H, 2.0, dom, resolution=24, seed=0, mesh=mesh,
                lambda_max_value=lam_max, width_bounds=wb,
            )
            assert rep.ok
            assert wb.lambda_min <= rep.lambda_hat <= lam_max * 1.02

    def test_violation_carries_numbers(self):
        with pytest.raises(SandwichViolation) as info:
            raise SandwichViolation(1.0, 0.5, 2.0)
        assert info.value.lambda_hat == 0.5

    def test_zero_rejected(self):
        with pytest.raises(ZeroAnisotropy):
            spectral.sandwich_check(
                AsymmetricLinear(0, 0, 0.0), 2.0, geo.unit_square()
            )


class TestDivergence:
    def test_closed_form_column(self):
        H = AsymmetricLinear(1, 0, math.pi / 2)
        rows = spectral.divergence_experiment(H, 2.0, [1, 2, 4, 8])
        for r in rows:
            assert r.area == pytest.approx(1.0, abs=1e-12)
            # 2^-p lambda_1p on an interval of length 1/k
            assert r.closed_form == pytest.approx(
                math.pi**2 / 4.0 * r.k**2, rel=1e-12
            )
        ratios = [b.closed_form / a.closed_form for a, b in zip(rows, rows[1:])]
        assert ratios == pytest.approx([4.0, 4.0, 4.0], rel=1e-13)

    def test_rotated_anisotropy_rotates_rectangles(self):
        H = AsymmetricLinear(2, 0, math.pi / 3)
        rows = spectral.divergence_experiment(H, 2.0, [1, 2])
        # ||H||^p (1/2)^p lambda_1p(0, 1/k)
        for r in rows:
            assert r.closed_form == pytest.approx(
                4.0 * 0.25 * oned.lambda_1p(2.0, (0.0, 1.0 / r.k)), rel=1e-12
            )
            assert r.area == pytest.approx(1.0, abs=1e-12)

    def test_zero_rejected(self):
        with pytest.raises(ZeroAnisotropy):
            spectral.divergence_experiment(AsymmetricLinear(0, 0, 0.0), 2.0, [1])


class TestRandomAnisotropy:
    def test_normalized_and_nondegenerate(self, rng):
        for _ in range(25):
            H = spectral.random_support_anisotropy(rng)
            assert H.norm_sup() == pytest.approx(1.0, rel=1e-12)
            assert kernel_classify(H).category is KernelCategory.ZERO_ONLY

    def test_deterministic_for_seeded_generator(self):
        H1 = spectral.random_support_anisotropy(np.random.default_rng(5))
        H2 = spectral.random_support_anisotropy(np.random.default_rng(5))
        assert np.array_equal(H1.hull, H2.hull)
