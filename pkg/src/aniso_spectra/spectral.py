"""Spectral-optimization layer: degenerate closed forms, sandwich bounds,
optimal-design coupling and the isoperimetric divergence experiment.

For an anisotropy whose kernel is a line or a half-plane, the frequency on
any bounded domain reduces exactly to the 1D constant on an interval whose
length is the maximal slice of the rotated domain:

    lambda(H, domain) = lambda_ab(p, (0, L), a, b),   L = l_omega(domain, A),

with (A, a, b) the rotation normal form.  The two sharp uniform bounds over
normalized anisotropies are

    lambda_max = lambda_1p(domain)          (Euclidean attains it),
    lambda_min = inf_theta lambda_1p(0, 2 L_theta)
               = lambda_1p(0, 2 sup_theta L_theta),

the infimum over directions collapsing to the maximal width because the 1D
constant decreases in the interval length.  ``sandwich_check`` verifies any
concrete anisotropy against both bounds; ``divergence_experiment`` drives
lambda to infinity over unit-area rectangles via the lower bound
||H||^p (1/2)^p lambda_1p(0, 1/k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry, oned, solver2d
from .anisotropy import (
    Anisotropy2D,
    AsymmetricLinear,
    EuclideanScaled,
    KernelCategory,
    SupportPolygon,
    convex_hull,
    kernel_classify,
    lower_bound_rotation,
    rotation,
    rotation_normal_form,
)
from .errors import NotDegenerateLine, SandwichViolation, ZeroAnisotropy
from .geometry import Polygon


@dataclass
class BoundsReport:
    p: float
    lambda_min: float
    lambda_max: float
    argmin_theta: float
    design_attained: bool
    domain_id: str = ""
    width_sup: float = None
    lambda_max_report: object = None

    def to_json(self):
        return {
            "p": self.p,
            "lambda_min": self.lambda_min,
            "lambda_max": self.lambda_max,
            "argmin_theta": self.argmin_theta,
            "design_attained": self.design_attained,
            "domain_id": self.domain_id,
            "width_sup": self.width_sup,
        }


@dataclass
class WidthBounds:
    """Width-pipeline half of the sandwich: the lower optimal constant."""

    lambda_min: float
    argmin_theta: float
    design_attained: bool
    width_sup: float
    curve: geometry.WidthCurve


def lambda_degenerate(H, p, domain):
    """Closed-form frequency for a line- or half-plane-kernel anisotropy."""
    A, a, b = rotation_normal_form(H)  # raises NotDegenerateLine otherwise
    L = geometry.l_omega(domain, A)
    return oned.lambda_ab(p, (0.0, L), a, b)


def lambda_max_bound(p, domain, resolution=96, seed=0, mesh=None):
    """Upper optimal constant: the Euclidean (symmetric) frequency, from the
    2D solver.  Returns (value, SpectralReport)."""
    rep, _ = solver2d.minimize(
        EuclideanScaled(1.0), p, domain, resolution, seed=seed, mesh=mesh
    )
    return rep.lambda_estimate, rep


def lambda_min_bound(p, domain, samples=256, refine_iters=60):
    """Lower optimal constant from the width curve and the 1D closed form."""
    curve = geometry.width_curve(domain, samples=samples, refine_iters=refine_iters)
    lam = oned.lambda_1p(p, (0.0, 2.0 * curve.sup_value))
    return WidthBounds(
        lambda_min=lam,
        argmin_theta=curve.argmax_theta,
        design_attained=curve.attained,
        width_sup=curve.sup_value,
        curve=curve,
    )


def bounds_report(p, domain, resolution=96, seed=0, samples=256, domain_id=""):
    wb = lambda_min_bound(p, domain, samples=samples)
    lam_max, rep = lambda_max_bound(p, domain, resolution=resolution, seed=seed)
    return BoundsReport(
        p=p,
        lambda_min=wb.lambda_min,
        lambda_max=lam_max,
        argmin_theta=wb.argmin_theta,
        design_attained=wb.design_attained,
        domain_id=domain_id,
        width_sup=wb.width_sup,
        lambda_max_report=rep,
    )


@dataclass
class SandwichReport:
    lambda_min: float
    lambda_hat: float
    lambda_max: float
    method: str
    kernel: str
    ok: bool

    def to_json(self):
        return {
            "lambda_min": self.lambda_min,
            "lambda": self.lambda_hat,
            "lambda_max": self.lambda_max,
            "method": self.method,
            "kernel": self.kernel,
            "ok": self.ok,
        }


def sandwich_check(
    H,
    p,
    domain,
    resolution=32,
    seed=0,
    slack=0.02,
    mesh=None,
    lambda_max_value=None,
    width_bounds=None,
    tol=1e-7,
):
    """Check lambda_min - slack <= lambda_hat(H/||H||) <= lambda_max + slack.

    The anisotropy is renormalized through the exact p-homogeneous scaling.
    Degenerate (line / half-plane kernel) anisotropies take the closed-form
    path; everything else runs the solver.  ``lambda_max_value`` and
    ``width_bounds`` can be supplied to share one mesh and one width curve
    across a campaign.  Raises SandwichViolation on failure.
    """
    sup = H.norm_sup()
    if sup <= 0.0:
        raise ZeroAnisotropy("sandwich bounds require H != 0")
    kernel = kernel_classify(H)
    if width_bounds is None:
        width_bounds = lambda_min_bound(p, domain)
    if lambda_max_value is None:
        lambda_max_value, _ = lambda_max_bound(
            p, domain, resolution=resolution, seed=seed, mesh=mesh
        )
    if kernel.category in (KernelCategory.LINE, KernelCategory.HALF_PLANE):
        lam = lambda_degenerate(H, p, domain) / sup**p
        method = "closed_form"
    else:
        rep, _ = solver2d.minimize(
            H, p, domain, resolution, seed=seed, mesh=mesh, tol=tol
        )
        lam = rep.lambda_estimate / sup**p
        method = "solver"
    ok = (
        lam >= width_bounds.lambda_min * (1.0 - slack)
        and lam <= lambda_max_value * (1.0 + slack)
    )
    report = SandwichReport(
        lambda_min=width_bounds.lambda_min,
        lambda_hat=lam,
        lambda_max=lambda_max_value,
        method=method,
        kernel=kernel.category.value,
        ok=ok,
    )
    if not ok:
        raise SandwichViolation(width_bounds.lambda_min, lam, lambda_max_value)
    return report


@dataclass
class DivergenceRow:
    k: int
    area: float
    closed_form: float
    solver_estimate: float = None

    def to_json(self):
        return {
            "k": self.k,
            "area": self.area,
            "closed_form_bound": self.closed_form,
            "solver_estimate": self.solver_estimate,
        }


def divergence_experiment(
    H, p, k_list, solver_upto=0, resolution=32, seed=0
):
    """Frequencies on the unit-area rectangles Omega_k = A((0,k) x (0,1/k)).

    A comes from the lower-bound rotation of H, so on each Omega_k the
    closed-form column ||H||^p (1/2)^p lambda_1p(0, 1/k) bounds the frequency
    from below; it scales exactly like k^p.  For k <= solver_upto the solver
    estimate of lambda(H, Omega_k) is included (resolution is scaled by k to
    keep cells across the thin side).
    """
    sup = H.norm_sup()
    if sup <= 0.0:
        raise ZeroAnisotropy("divergence experiment requires H != 0")
    A = lower_bound_rotation(H)
    rows = []
    for k in k_list:
        if k < 1:
            raise ZeroAnisotropy(f"k must be >= 1, got {k}")
        rect = geometry.rectangle(float(k), 1.0 / float(k))
        omega_k = rect.transformed(A)
        closed = sup**p * 0.5**p * oned.lambda_1p(p, (0.0, 1.0 / k))
        solver_est = None
        if k <= solver_upto:
            rep, _ = solver2d.minimize(
                H, p, omega_k, int(resolution * k), seed=seed
            )
            solver_est = rep.lambda_estimate
        rows.append(DivergenceRow(int(k), omega_k.area, closed, solver_est))
    return rows


def random_support_anisotropy(rng, normalize=True):
    """Random convex hull of 3-9 points in the unit disk, recentred so the
    origin is interior, optionally normalized to ||H|| = 1.  Exercises kinks,
    asymmetry and near-degenerate kernels."""
    for _ in range(100):
        npts = int(rng.integers(3, 10))
        r = np.sqrt(rng.random(npts))
        th = rng.uniform(0.0, 2.0 * math.pi, npts)
        pts = np.column_stack([r * np.cos(th), r * np.sin(th)])
        hull = convex_hull(pts)
        if len(hull) < 3:
            continue
        centered = pts - hull.mean(axis=0)
        H = SupportPolygon(centered)
        if kernel_classify(H).category is not KernelCategory.ZERO_ONLY:
            continue
        if normalize:
            H = H.scaled(1.0 / H.norm_sup())
        return H
    raise RuntimeError("failed to draw a nondegenerate anisotropy")


def max_width_halfplane_anisotropy(domain, samples=256):
    """The half-plane-kernel anisotropy aligned with the maximal-width
    direction: H(v) = <v, e_theta0>+ with theta0 the width argmax."""
    curve = geometry.width_curve(domain, samples=samples)
    return AsymmetricLinear(1.0, 0.0, curve.argmax_theta), curve
