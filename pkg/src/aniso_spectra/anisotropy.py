"""Asymmetric seminorms (anisotropies) on the plane.

An anisotropy is a nonnegative, convex, positively 1-homogeneous function
H on R^2.  Five concrete representations are provided:

* ``SupportPolygon`` -- H(v) = max_q <v, q> over the vertices of a convex
  polygon containing the origin.  Universal approximating form: every
  anisotropy is the support function of a compact convex set.
* ``AsymmetricLinear`` -- H(v) = a s+ + b s- with s = <v, n(theta)>; the
  degenerate line / half-plane family in rotated normal form.
* ``EuclideanScaled`` -- c |v|.
* ``SplitPNorm`` -- the catalog of one-sided q-norm combinations with
  half-line and sector kernels.
* ``Regularized`` -- sqrt(eps |v|^2 + base(v)^2), the smoothing family that
  dominates its base and converges to it uniformly on the unit circle.

All objects are immutable and every operation is a pure function; instances
can be shared freely across threads.  Evaluation is vectorized: ``H(v)``
accepts a single point, shape ``(2,)``, or a stack of points ``(..., 2)``.

Angles are radians everywhere.  Geometric predicates use absolute epsilons
on unit-scale data (see GEOM_EPS / ANGLE_EPS).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadParams,
    DegenerateKernel,
    InputError,
    NotDegenerateLine,
    ZeroAnisotropy,
)

TWO_PI = 2.0 * math.pi
GEOM_EPS = 1e-10   # geometric predicates, unit-scale data
ANGLE_EPS = 1e-9   # angular snapping for kernel classification


def rotation(angle):
    """2x2 counterclockwise rotation matrix."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def unit(angle):
    return np.array([math.cos(angle), math.sin(angle)])


def normalize_angle(theta, period=TWO_PI):
    """Reduce an angle to [0, period)."""
    out = math.fmod(theta, period)
    if out < 0.0:
        out += period
    if out >= period:  # fmod roundoff at the seam
        out -= period
    return out + 0.0  # kill -0.0


def _as_points(v):
    """Coerce input to an (n, 2) float array; report whether it was a single point."""
    arr = np.asarray(v, dtype=float)
    if arr.shape == (2,):
        return arr.reshape(1, 2), True
    if arr.ndim >= 2 and arr.shape[-1] == 2:
        return arr.reshape(-1, 2), False
    raise InputError(f"expected a 2-vector or (..., 2) array, got shape {arr.shape}")


def _restore(values, single, shape):
    if single:
        return float(values[0])
    return values.reshape(shape)


def convex_hull(points):
    """Convex hull (Andrew monotone chain), counterclockwise, collinear points dropped.

    Degenerate inputs (all points equal / collinear) return the 1- or 2-point hull.
    """
    pts = np.asarray(points, dtype=float)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    keep = np.ones(len(pts), dtype=bool)
    keep[1:] = np.any(np.abs(np.diff(pts, axis=0)) > 0.0, axis=1)
    pts = pts[keep]
    if len(pts) <= 2:
        return pts

    def half(seq):
        out = []
        for q in seq:
            while len(out) >= 2:
                u = out[-1] - out[-2]
                w = q - out[-2]
                if u[0] * w[1] - u[1] * w[0] <= 0.0:
                    out.pop()
                else:
                    break
            out.append(q)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    hull = np.array(lower[:-1] + upper[:-1])
    if len(hull) < 3:  # collinear cloud collapses to a segment
        ends = np.array([pts[0], pts[-1]])
        return ends
    return hull


def _canonical_loop(vertices):
    """Rotate a vertex loop to start at the lexicographically smallest vertex."""
    verts = np.asarray(vertices, dtype=float)
    start = np.lexsort((verts[:, 1], verts[:, 0]))[0]
    return np.roll(verts, -start, axis=0)


def _origin_in_hull(hull, tol):
    """Whether the origin lies in the convex hull, within distance tol."""
    if len(hull) == 1:
        return bool(np.linalg.norm(hull[0]) <= tol)
    if len(hull) == 2:
        d = hull[1] - hull[0]
        t = -float(hull[0] @ d) / float(d @ d)
        t = min(max(t, 0.0), 1.0)
        return bool(np.linalg.norm(hull[0] + t * d) <= tol)
    # origin inside iff its signed distance to every ccw edge is >= -tol
    nxt = np.roll(hull, -1, axis=0)
    edges = nxt - hull
    cross = edges[:, 0] * (-hull[:, 1]) - edges[:, 1] * (-hull[:, 0])
    lengths = np.maximum(np.linalg.norm(edges, axis=1), 1e-300)
    return bool(np.all(cross / lengths >= -tol))


class KernelCategory(enum.Enum):
    ZERO_ONLY = "zero_only"
    HALF_LINE = "half_line"
    LINE = "line"
    SECTOR = "sector"
    HALF_PLANE = "half_plane"
    PLANE = "plane"  # zero anisotropy; flagged, rejected by spectral operations


@dataclass(frozen=True)
class KernelClass:
    """Kernel cone {H = 0} classified by its set of directions.

    ``angles`` holds, per category: () for ZERO_ONLY and PLANE, (theta0,) for
    HALF_LINE, (theta1,) with theta1 in [0, pi) for LINE, (theta2, theta3) for
    SECTOR, (theta4,) for HALF_PLANE (directions [theta4, theta4 + pi]).
    Angles are reported in [0, 2pi), ties broken toward the smallest angle.
    """

    category: KernelCategory
    angles: tuple = ()

    def direction_arcs(self):
        """Closed arcs (start, length) of kernel directions on the circle."""
        c = self.category
        if c is KernelCategory.ZERO_ONLY:
            return []
        if c is KernelCategory.PLANE:
            return [(0.0, TWO_PI)]
        if c is KernelCategory.HALF_LINE:
            return [(self.angles[0], 0.0)]
        if c is KernelCategory.LINE:
            return [(self.angles[0], 0.0), (self.angles[0] + math.pi, 0.0)]
        if c is KernelCategory.SECTOR:
            t2, t3 = self.angles
            return [(t2, normalize_angle(t3 - t2))]
        t4 = self.angles[0]
        return [(t4, math.pi)]

    def contains_direction(self, theta, margin=0.0):
        th = normalize_angle(theta)
        for start, length in self.direction_arcs():
            rel = normalize_angle(th - start)
            if rel <= length + margin or rel >= TWO_PI - margin:
                return True
        return False


class Anisotropy2D:
    """Base class; concrete variants implement ``_eval`` and friends."""

    def __call__(self, v):
        pts, single = _as_points(v)
        shape = np.asarray(v, dtype=float).shape[:-1]
        return _restore(self._eval(pts), single, shape)

    def gradient(self, v):
        """A subgradient of H at v, the minimal-norm element at kinks (0 at v = 0)."""
        pts, single = _as_points(v)
        g = self._grad(pts)
        if single:
            return g[0]
        return g.reshape(np.asarray(v, dtype=float).shape)

    @property
    def is_zero(self):
        return self.norm_sup() <= GEOM_EPS

    # --- variant contract -------------------------------------------------
    def _eval(self, pts):
        raise NotImplementedError

    def _grad(self, pts):
        raise NotImplementedError

    def norm_sup(self):
        """max of H over the unit circle."""
        raise NotImplementedError

    def rotated(self, A):
        """The anisotropy H o A for a rotation matrix A."""
        raise NotImplementedError

    def scaled(self, alpha):
        """The anisotropy alpha * H, alpha >= 0."""
        raise NotImplementedError

    def to_json(self):
        raise NotImplementedError


def _rotation_angle(A):
    A = np.asarray(A, dtype=float)
    if A.shape != (2, 2):
        raise InputError("rotation matrix must be 2x2")
    if abs(np.linalg.det(A) - 1.0) > 1e-9 or np.max(np.abs(A @ A.T - np.eye(2))) > 1e-9:
        raise InputError("matrix is not a rotation")
    return math.atan2(A[1, 0], A[0, 0])


@dataclass(frozen=True, eq=False)
class SupportPolygon(Anisotropy2D):
    """H(v) = max over stored vertices q of <v, q>.

    The convex hull of the vertices must contain the origin, otherwise H
    would be negative somewhere.  The hull is canonicalized at construction;
    ``vertices`` keeps the user's input, ``hull`` the ccw reduced loop.
    """

    vertices: np.ndarray
    hull: np.ndarray = None

    def __post_init__(self):
        verts = np.asarray(self.vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[1] != 2 or len(verts) == 0:
            raise InputError("support polygon needs an (n, 2) vertex array")
        if not np.all(np.isfinite(verts)):
            raise InputError("support polygon vertices must be finite")
        hull = convex_hull(verts)
        scale = max(1.0, float(np.max(np.abs(verts))))
        if not _origin_in_hull(hull, GEOM_EPS * scale):
            raise InputError("origin must lie in the convex hull of the vertices")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "hull", _canonical_loop(hull))

    def _eval(self, pts):
        dots = pts @ self.hull.T
        # origin in the hull forces H >= 0; clip pure roundoff
        return np.maximum(dots.max(axis=1), 0.0)

    def _grad(self, pts):
        dots = pts @ self.hull.T
        best = dots.max(axis=1)
        scale = np.maximum(np.linalg.norm(pts, axis=1) * np.max(np.abs(self.hull)), 1e-300)
        tied = dots >= (best - 1e-12 * scale)[:, None]
        ntied = tied.sum(axis=1)
        grad = self.hull[np.argmax(dots, axis=1)].copy()
        grad[best <= 0.0] = 0.0  # inside the kernel the minimum is attained: 0 in the subdifferential
        for i in np.nonzero((ntied > 1) & (best > 0.0))[0]:
            support = self.hull[tied[i]]
            # tied maximizers are collinear; min-norm point of their segment
            spread = support.max(axis=0) - support.min(axis=0)
            axis = int(np.argmax(spread))
            a = support[np.argmin(support[:, axis])]
            b = support[np.argmax(support[:, axis])]
            d = b - a
            denom = float(d @ d)
            t = 0.0 if denom == 0.0 else min(max(-float(a @ d) / denom, 0.0), 1.0)
            grad[i] = a + t * d
        return grad

    def norm_sup(self):
        return float(np.max(np.linalg.norm(self.hull, axis=1)))

    def rotated(self, A):
        _rotation_angle(A)  # validate
        # (H o A)(v) = max <Av, q> = max <v, A^T q>, i.e. rows q^T A
        return SupportPolygon(self.vertices @ np.asarray(A, dtype=float))

    def scaled(self, alpha):
        if alpha < 0.0:
            raise BadParams("scale factor must be nonnegative")
        return SupportPolygon(self.vertices * alpha)

    def to_json(self):
        return {"kind": "support_polygon", "vertices": self.hull.tolist()}


@dataclass(frozen=True)
class AsymmetricLinear(Anisotropy2D):
    """H(v) = a s+ + b s- with s = <v, (cos theta, sin theta)>.

    theta is the direction of the normal; theta = pi/2 gives a y+ + b y-.
    a = b = 0 is the flagged zero anisotropy.
    """

    a: float
    b: float
    theta: float = math.pi / 2.0

    def __post_init__(self):
        if self.a < 0.0 or self.b < 0.0:
            raise InputError("weights a, b must be nonnegative")

    @property
    def normal(self):
        return unit(self.theta)

    def _eval(self, pts):
        s = pts @ self.normal
        return self.a * np.maximum(s, 0.0) + self.b * np.maximum(-s, 0.0)

    def _grad(self, pts):
        s = pts @ self.normal
        coef = np.where(s > 0.0, self.a, np.where(s < 0.0, -self.b, 0.0))
        return coef[:, None] * self.normal[None, :]

    def norm_sup(self):
        return float(max(self.a, self.b))

    def rotated(self, A):
        return AsymmetricLinear(self.a, self.b, self.theta - _rotation_angle(A))

    def scaled(self, alpha):
        if alpha < 0.0:
            raise BadParams("scale factor must be nonnegative")
        return AsymmetricLinear(self.a * alpha, self.b * alpha, self.theta)

    def to_json(self):
        return {"kind": "asymmetric_linear", "a": self.a, "b": self.b, "theta": self.theta}


@dataclass(frozen=True)
class EuclideanScaled(Anisotropy2D):
    """H(v) = c |v| with c > 0."""

    c: float

    def __post_init__(self):
        if not self.c > 0.0:
            raise InputError("Euclidean scale must be positive")

    def _eval(self, pts):
        return self.c * np.linalg.norm(pts, axis=1)

    def _grad(self, pts):
        norms = np.linalg.norm(pts, axis=1)
        safe = np.maximum(norms, 1e-300)
        g = (self.c / safe)[:, None] * pts
        g[norms == 0.0] = 0.0
        return g

    def norm_sup(self):
        return float(self.c)

    def rotated(self, A):
        _rotation_angle(A)
        return self

    def scaled(self, alpha):
        if alpha <= 0.0:
            raise BadParams("Euclidean variant requires a positive scale")
        return EuclideanScaled(self.c * alpha)

    def to_json(self):
        return {"kind": "euclidean", "scale": self.c}


_SPLIT_VARIANTS = ("E1", "E3a", "E3b")


@dataclass(frozen=True)
class SplitPNorm(Anisotropy2D):
    """One-sided q-norm catalog with half-line and sector kernels.

    variant E1:  a * (|x|^q + (y+)^q)^(1/q)       kernel: half-line (down)
    variant E3a: a * (q |x| + y)+                  kernel: sector; q is the slope kappa
    variant E3b: a * ((x+)^q + (y+)^q)^(1/q)       kernel: third-quadrant sector

    ``theta`` rotates the whole construction (the formulas above are the
    theta = 0 frame), so the family is closed under H -> H o A.
    """

    a: float
    q: float
    variant: str
    theta: float = 0.0

    def __post_init__(self):
        if not self.a > 0.0:
            raise InputError("split p-norm weight a must be positive")
        if self.variant not in _SPLIT_VARIANTS:
            raise InputError(f"variant must be one of {_SPLIT_VARIANTS}")
        if self.variant == "E3a":
            if not self.q > 0.0:
                raise InputError("E3a slope must be positive")
        elif not self.q >= 1.0:
            raise InputError("q-norm exponent must be >= 1")

    def _frame(self, pts):
        # coordinates in the unrotated frame: w = R(-theta) v
        if self.theta == 0.0:
            return pts
        return pts @ rotation(-self.theta).T

    def _eval(self, pts):
        w = self._frame(pts)
        x, y = w[:, 0], w[:, 1]
        yp = np.maximum(y, 0.0)
        if self.variant == "E1":
            return self.a * (np.abs(x) ** self.q + yp**self.q) ** (1.0 / self.q)
        if self.variant == "E3a":
            return self.a * np.maximum(self.q * np.abs(x) + y, 0.0)
        xp = np.maximum(x, 0.0)
        return self.a * (xp**self.q + yp**self.q) ** (1.0 / self.q)

    def _grad(self, pts):
        w = self._frame(pts)
        x, y = w[:, 0], w[:, 1]
        yp = np.maximum(y, 0.0)
        q = self.q
        if self.variant == "E3a":
            inside = q * np.abs(x) + y
            gx = np.where(inside > 0.0, self.a * q * np.sign(x), 0.0)
            gy = np.where(inside > 0.0, self.a, 0.0)
        else:
            xs = np.abs(x) if self.variant == "E1" else np.maximum(x, 0.0)
            ssum = xs**q + yp**q
            val = ssum ** (1.0 / q)
            outer = np.where(ssum > 0.0, val / np.maximum(ssum, 1e-300), 0.0)
            dx = xs ** (q - 1.0) * (np.sign(x) if self.variant == "E1" else (x > 0.0))
            dy = yp ** (q - 1.0) * (y > 0.0)
            gx = self.a * outer * dx
            gy = self.a * outer * dy
            gx[ssum == 0.0] = 0.0
            gy[ssum == 0.0] = 0.0
        grad = np.column_stack([gx, gy])
        if self.theta != 0.0:
            grad = grad @ rotation(-self.theta)  # chain rule: R(theta) applied to rows
        return grad

    def _peak(self):
        """(angle in the theta = 0 frame, value) of the max on the unit circle."""
        if self.variant == "E3a":
            return math.atan2(1.0, self.q), self.a * math.hypot(self.q, 1.0)
        # one-sided q-norms: the diagonal wins for q < 2, the axes for q >= 2
        if self.q < 2.0:
            return math.pi / 4.0, self.a * 2.0 ** (1.0 / self.q - 0.5)
        return math.pi / 2.0, self.a

    def norm_sup(self):
        return self._peak()[1]

    def rotated(self, A):
        return SplitPNorm(self.a, self.q, self.variant, self.theta - _rotation_angle(A))

    def scaled(self, alpha):
        if alpha <= 0.0:
            raise BadParams("split p-norm requires a positive scale")
        return SplitPNorm(self.a * alpha, self.q, self.variant, self.theta)

    def to_json(self):
        return {
            "kind": "split_pnorm",
            "a": self.a,
            "q": self.q,
            "variant": self.variant,
            "theta": self.theta,
        }


@dataclass(frozen=True, eq=False)
class Regularized(Anisotropy2D):
    """H(v) = sqrt(eps |v|^2 + base(v)^2), eps > 0.

    Dominates its base pointwise; H - base <= sqrt(eps) |v|, which is the
    monotone-domination hypothesis of the continuity study.
    """

    eps: float
    base: Anisotropy2D

    def __post_init__(self):
        if not self.eps > 0.0:
            raise InputError("regularization epsilon must be positive")
        if not isinstance(self.base, Anisotropy2D):
            raise InputError("base must be an Anisotropy2D")

    def _eval(self, pts):
        bv = self.base._eval(pts)
        return np.sqrt(self.eps * np.einsum("ij,ij->i", pts, pts) + bv * bv)

    def _grad(self, pts):
        bv = self.base._eval(pts)
        bg = self.base._grad(pts)
        val = np.sqrt(self.eps * np.einsum("ij,ij->i", pts, pts) + bv * bv)
        safe = np.maximum(val, 1e-300)
        g = (self.eps * pts + bv[:, None] * bg) / safe[:, None]
        g[val == 0.0] = 0.0
        return g

    def norm_sup(self):
        b = self.base.norm_sup()
        return math.sqrt(self.eps + b * b)

    def rotated(self, A):
        return Regularized(self.eps, self.base.rotated(A))

    def scaled(self, alpha):
        if alpha <= 0.0:
            raise BadParams("regularized variant requires a positive scale")
        return Regularized(self.eps * alpha * alpha, self.base.scaled(alpha))

    def to_json(self):
        return {"kind": "regularized", "epsilon": self.eps, "base": self.base.to_json()}


def evaluate(H, v):
    """H(v); exact max of dot products for SupportPolygon."""
    return H(v)


def _max_on_circle(H, samples=4096, iters=80):
    """(argmax angle, max value) of H on the unit circle: dense scan + golden section."""
    thetas = np.linspace(0.0, TWO_PI, samples, endpoint=False)
    vals = H(np.column_stack([np.cos(thetas), np.sin(thetas)]))
    k = int(np.argmax(vals))
    step = TWO_PI / samples
    lo, hi = thetas[k] - step, thetas[k] + step
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc = H(unit(c))
    fd = H(unit(d))
    for _ in range(iters):
        if fc < fd:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = H(unit(d))
        else:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = H(unit(c))
    best = 0.5 * (lo + hi)
    return normalize_angle(best), float(max(H(unit(best)), vals[k]))


def norm_sup(H):
    """max of H over the unit circle (closed form where available)."""
    return H.norm_sup()


def _intersect_arc(pieces, t, tol):
    """Intersect closed arcs (start, length <= pi) with the closed arc
    [t, t + pi], mod 2pi.

    Working in coordinates relative to a piece start, the constraint covers
    [r, r + pi].  Against the piece [0, ln] that makes at most two segments:
    [r, ln] when r <= ln, and the wraparound [0, r - pi] when r >= pi; both
    are nonempty only in the exactly-antipodal case (two opposite points).
    """
    out = []
    for s, ln in pieces:
        r = normalize_angle(t - s)
        if r <= ln + tol and r <= math.pi + 0.5 * tol:
            a = min(max(r, 0.0), ln)
            out.append((normalize_angle(s + a), ln - a))
        if r >= math.pi - tol:
            b = min(max(r - math.pi, 0.0), ln)
            out.append((s, b))
    return out


def _classify_arcs(pieces, tol=ANGLE_EPS):
    if not pieces:
        return KernelClass(KernelCategory.ZERO_ONLY)
    if len(pieces) == 2:
        (s1, l1), (s2, l2) = pieces
        antipodal = normalize_angle(s1 - s2, math.pi) <= 10.0 * tol or (
            math.pi - normalize_angle(s1 - s2, math.pi) <= 10.0 * tol
        )
        if l1 <= tol and l2 <= tol and antipodal:
            th = min(normalize_angle(s1, math.pi), normalize_angle(s2, math.pi))
            return KernelClass(KernelCategory.LINE, (th,))
        raise InputError("inconsistent kernel arcs")  # not a convex cone
    start, length = pieces[0]
    if length <= tol:
        return KernelClass(KernelCategory.HALF_LINE, (normalize_angle(start),))
    if length >= math.pi - tol:
        return KernelClass(KernelCategory.HALF_PLANE, (normalize_angle(start),))
    s = normalize_angle(start)
    return KernelClass(KernelCategory.SECTOR, (s, normalize_angle(s + length)))


def kernel_classify(H):
    """Classify ker(H) = {H = 0} as the polar cone of the representing set."""
    if isinstance(H, Regularized):
        if H.is_zero:  # eps > 0 forces positivity, so only if eps underflows
            return KernelClass(KernelCategory.PLANE)
        return KernelClass(KernelCategory.ZERO_ONLY)
    if isinstance(H, EuclideanScaled):
        return KernelClass(KernelCategory.ZERO_ONLY)
    if isinstance(H, AsymmetricLinear):
        if H.a == 0.0 and H.b == 0.0:
            return KernelClass(KernelCategory.PLANE)
        if H.a > 0.0 and H.b > 0.0:
            return KernelClass(
                KernelCategory.LINE, (normalize_angle(H.theta + math.pi / 2.0, math.pi),)
            )
        # one-sided: kernel is the closed half-plane {s <= 0} (or {s >= 0})
        if H.a > 0.0:
            return KernelClass(KernelCategory.HALF_PLANE, (normalize_angle(H.theta + math.pi / 2.0),))
        return KernelClass(KernelCategory.HALF_PLANE, (normalize_angle(H.theta - math.pi / 2.0),))
    if isinstance(H, SplitPNorm):
        th = H.theta
        if H.variant == "E1":
            return KernelClass(KernelCategory.HALF_LINE, (normalize_angle(th + 1.5 * math.pi),))
        if H.variant == "E3a":
            half = math.atan(H.q)
            return KernelClass(
                KernelCategory.SECTOR,
                (normalize_angle(th + math.pi + half), normalize_angle(th + TWO_PI - half)),
            )
        return KernelClass(
            KernelCategory.SECTOR,
            (normalize_angle(th + math.pi), normalize_angle(th + 1.5 * math.pi)),
        )
    if isinstance(H, SupportPolygon):
        norms = np.linalg.norm(H.hull, axis=1)
        live = H.hull[norms > GEOM_EPS * max(1.0, norms.max(initial=0.0))]
        if len(live) == 0:
            return KernelClass(KernelCategory.PLANE)
        angles = np.arctan2(live[:, 1], live[:, 0])
        pieces = [(normalize_angle(angles[0] + math.pi / 2.0), math.pi)]
        for alpha in angles[1:]:
            pieces = _intersect_arc(pieces, normalize_angle(alpha + math.pi / 2.0), ANGLE_EPS)
            if not pieces:
                break
        return _classify_arcs(pieces)
    raise InputError(f"unknown anisotropy type {type(H)!r}")


def rotation_normal_form(H):
    """Rotation A and weights (a, b) with H(A(x, y)) = a y+ + b y-.

    Requires a line or half-plane kernel; b > 0 exactly for the line case.
    The line angle is taken in [0, pi), which fixes the (a, b) order.
    """
    kernel = kernel_classify(H)
    if kernel.category is KernelCategory.LINE:
        theta1 = kernel.angles[0]
        A = rotation(theta1)
        a = float(H(unit(theta1 + math.pi / 2.0)))
        b = float(H(unit(theta1 - math.pi / 2.0)))
        return A, a, b
    if kernel.category is KernelCategory.HALF_PLANE:
        theta4 = kernel.angles[0]
        A = rotation(theta4 - math.pi)
        a = float(H(unit(theta4 - math.pi / 2.0)))
        return A, a, 0.0
    raise NotDegenerateLine(f"kernel is {kernel.category.value}, need line or half_plane")


def _argmax_angle(H):
    """An angle where H attains its max on the unit circle."""
    if isinstance(H, SupportPolygon):
        norms = np.linalg.norm(H.hull, axis=1)
        q = H.hull[int(np.argmax(norms))]
        return math.atan2(q[1], q[0])
    if isinstance(H, AsymmetricLinear):
        return H.theta if H.a >= H.b else H.theta + math.pi
    if isinstance(H, EuclideanScaled):
        return math.pi / 2.0  # any direction; pick the one giving the identity rotation
    if isinstance(H, SplitPNorm):
        return H.theta + H._peak()[0]
    if isinstance(H, Regularized):
        # sqrt(eps + base^2) is monotone in base, so the argmax is the base's
        if H.base.is_zero:
            return math.pi / 2.0
        return _argmax_angle(H.base)
    return _max_on_circle(H)[0]


def lower_bound_rotation(H):
    """Rotation A with H(A(x, y)) >= ||H|| y+ ; A maps (0, 1) to an argmax of H
    on the unit circle."""
    if H.is_zero:
        raise ZeroAnisotropy("zero anisotropy admits no positive lower bound")
    return rotation(_argmax_angle(H) - math.pi / 2.0)


def dual(H):
    """The dual seminorm of a SupportPolygon anisotropy, again a SupportPolygon.

    H must be positive away from the origin (origin interior to the hull);
    a degenerate kernel makes the polar body unbounded.  ``dual`` is an
    involution up to hull canonicalization.
    """
    if not isinstance(H, SupportPolygon):
        raise InputError("dual is defined for SupportPolygon representations")
    if kernel_classify(H).category is not KernelCategory.ZERO_ONLY:
        raise DegenerateKernel("polar body unbounded: ker(H) != {0}")
    hull = H.hull
    nxt = np.roll(hull, -1, axis=0)
    det = hull[:, 0] * nxt[:, 1] - hull[:, 1] * nxt[:, 0]
    if np.any(np.abs(det) <= GEOM_EPS):
        raise DegenerateKernel("hull edge collinear with the origin")
    vx = (nxt[:, 1] - hull[:, 1]) / det
    vy = (hull[:, 0] - nxt[:, 0]) / det
    return SupportPolygon(np.column_stack([vx, vy]))


def differentiability_scan(H, tol=1e-9):
    """Unit directions (angles, sorted) where the subdifferential of H is a
    nondegenerate segment, excluding directions inside the kernel."""
    sup = H.norm_sup()
    if sup <= GEOM_EPS:
        return np.array([])

    def _positive(dirs):
        dirs = [normalize_angle(t) for t in dirs]
        keep = [t for t in dirs if H(unit(t)) > tol * sup]
        return np.array(sorted(keep))

    if isinstance(H, EuclideanScaled):
        return np.array([])
    if isinstance(H, AsymmetricLinear):
        return np.array([])  # kinks sit exactly on the kernel line
    if isinstance(H, SupportPolygon):
        hull = H.hull
        if len(hull) < 2:
            return np.array([])
        edges = np.roll(hull, -1, axis=0) - hull
        normals = np.arctan2(-edges[:, 0], edges[:, 1])  # outward for ccw loops
        return _positive(normals)
    if isinstance(H, SplitPNorm):
        th = H.theta
        if H.variant == "E3a":
            return _positive([th + math.pi / 2.0])
        if H.q == 1.0:
            if H.variant == "E1":
                return _positive([th, th + math.pi / 2.0, th + math.pi])
            return _positive([th, th + math.pi / 2.0])
        return np.array([])
    if isinstance(H, Regularized):
        base_dirs = differentiability_scan(H.base, tol=tol)
        return _positive([t for t in base_dirs if H.base(unit(t)) > tol * sup])
    raise InputError(f"unknown anisotropy type {type(H)!r}")


def numeric_kink_scan(H, samples=8192, jump_tol=1e-5, refine_iters=48):
    """Finite-difference detector of gradient jumps of g(theta) = H(e_theta).

    Independent of ``differentiability_scan``: flags grid brackets whose
    centered second difference of g exceeds the smooth-curvature background,
    then pins each kink down by bisecting on chord-slope discrepancy.  A kink
    with slope jump J contributes |second difference| ~ J * step, while smooth
    curvature contributes ~ g'' * step^2.
    """
    sup = H.norm_sup()
    step = TWO_PI / samples
    thetas = np.linspace(0.0, TWO_PI, samples, endpoint=False)
    vals = H(np.column_stack([np.cos(thetas), np.sin(thetas)]))
    second = np.abs(np.roll(vals, -1) - 2.0 * vals + np.roll(vals, 1))
    background = 10.0 * np.median(second) + jump_tol * sup * step

    def slope(phi, h=1e-9):
        return (H(unit(phi + h)) - H(unit(phi))) / h

    hits = []
    for k in np.nonzero(second > background)[0]:
        # convexity of H makes the angular slope increase across a kink;
        # bisect on the slope crossing its bracket midlevel
        lo, hi = thetas[k] - step, thetas[k] + step
        s_lo, s_hi = slope(lo), slope(hi)
        for _ in range(refine_iters):
            mid = 0.5 * (lo + hi)
            if slope(mid) < 0.5 * (s_lo + s_hi):
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-10:
                break
        hits.append(normalize_angle(0.5 * (lo + hi)))
    if not hits:
        return np.array([])
    hits = sorted(hits)
    keep = [hits[0]]
    for t in hits[1:]:
        if t - keep[-1] > 4.0 * step:
            keep.append(t)
    if len(keep) > 1 and (TWO_PI - keep[-1] + keep[0]) < 4.0 * step:
        keep.pop()
    return np.array(keep)


def anisotropy_from_json(data):
    """Build an anisotropy from its JSON dict; raises InputError with the
    offending field on malformed input."""
    if not isinstance(data, dict) or "kind" not in data:
        raise InputError("anisotropy JSON must be an object with a 'kind' field")
    kind = data["kind"]
    try:
        if kind == "support_polygon":
            return SupportPolygon(np.asarray(data["vertices"], dtype=float))
        if kind == "asymmetric_linear":
            return AsymmetricLinear(
                float(data["a"]), float(data["b"]), float(data.get("theta", math.pi / 2.0))
            )
        if kind == "euclidean":
            return EuclideanScaled(float(data["scale"]))
        if kind == "split_pnorm":
            return SplitPNorm(
                float(data["a"]),
                float(data["q"]),
                str(data["variant"]),
                float(data.get("theta", 0.0)),
            )
        if kind == "regularized":
            return Regularized(float(data["epsilon"]), anisotropy_from_json(data["base"]))
    except KeyError as exc:
        raise InputError(f"anisotropy JSON kind {kind!r}: missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise InputError(f"anisotropy JSON kind {kind!r}: {exc}") from exc
    raise InputError(f"unknown anisotropy kind {kind!r}")
