"""Planar polygonal domains and their width geometry.

The domain model is a simple polygon (counterclockwise outer loop, optional
clockwise holes).  The quantities computed here feed the spectral layer:

* ``slice_profile`` -- the vertical section {y : (x, y) in domain} as a list
  of disjoint open intervals, exact from edge crossings;
* ``width`` -- the directional width L_theta: the supremum of lengths of
  connected chords of the domain in direction theta.  Chord-component
  endpoints are piecewise linear in the line offset with breakpoints only at
  vertex events, so the supremum is found exactly from vertex offsets plus
  midpoints (with tiny-offset guards for tangencies);
* ``width_curve`` -- L_theta sampled over [0, pi) with golden-section
  refinement around the best sample, reporting sup, argmax and a numeric
  attainment flag;
* ``l_omega`` -- the maximal vertical-slice component length of the rotated
  domain A^T(domain), which equals the width in the direction A maps (0, 1) to;
* ``strip_condition_report`` -- the decidable slice conditions for a
  degenerate anisotropy with a line kernel: bounded x-extent, slices bounded
  by L, and existence of a strip sub-domain whose slices are intervals of
  length exactly L.

Directions are undirected: every width is computed modulo pi, which makes
L_theta = L_(theta+pi) hold exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .anisotropy import GEOM_EPS, normalize_angle, rotation
from .errors import InputError


def _loop_array(points, name):
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or len(arr) < 3:
        raise InputError(f"{name} must be an (n>=3, 2) coordinate array")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} has non-finite coordinates")
    return arr


def _signed_area(loop):
    x, y = loop[:, 0], loop[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _segments_intersect(p1, p2, q1, q2):
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != 0 and d2 != 0:
        return True
    return False


def _is_simple(loop):
    n = len(loop)
    for i in range(n):
        p1, p2 = loop[i], loop[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            if _segments_intersect(p1, p2, loop[j], loop[(j + 1) % n]):
                return False
    return True


@dataclass(frozen=True, eq=False)
class Polygon:
    """Simple polygon with optional holes.

    The outer loop is normalized to counterclockwise orientation and holes to
    clockwise; construction validates simplicity, positive area and that each
    hole lies inside the outer loop.  Instances are immutable.
    """

    outer: np.ndarray
    holes: tuple = ()

    def __post_init__(self):
        outer = _loop_array(self.outer, "outer loop")
        if not _is_simple(outer):
            raise InputError("outer loop is self-intersecting")
        if _signed_area(outer) < 0.0:
            outer = outer[::-1].copy()
        if _signed_area(outer) <= 0.0:
            raise InputError("outer loop has zero area")
        holes = []
        for k, hole in enumerate(self.holes or ()):
            loop = _loop_array(hole, f"hole {k}")
            if not _is_simple(loop):
                raise InputError(f"hole {k} is self-intersecting")
            if _signed_area(loop) > 0.0:
                loop = loop[::-1].copy()
            if _signed_area(loop) >= 0.0:
                raise InputError(f"hole {k} has zero area")
            if not np.all(_points_in_loop(outer, loop)):
                raise InputError(f"hole {k} is not inside the outer loop")
            holes.append(loop)
        object.__setattr__(self, "outer", outer)
        object.__setattr__(self, "holes", tuple(holes))

    @property
    def loops(self):
        return (self.outer,) + self.holes

    @property
    def area(self):
        return _signed_area(self.outer) + sum(_signed_area(h) for h in self.holes)

    @property
    def bbox(self):
        xs = self.outer[:, 0]
        ys = self.outer[:, 1]
        return float(xs.min()), float(xs.max()), float(ys.min()), float(ys.max())

    @property
    def diameter(self):
        v = self.outer
        d2 = np.max(np.sum((v[:, None, :] - v[None, :, :]) ** 2, axis=2))
        return math.sqrt(float(d2))

    def contains(self, points):
        """Even-odd containment of an (n, 2) array of points (boundary excluded
        up to the crossing-rule convention)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        inside = np.zeros(len(pts), dtype=bool)
        for loop in self.loops:
            inside ^= _points_in_loop(loop, pts)
        return inside

    def distance_to_boundary(self, points):
        """Euclidean distance from each point to the nearest boundary edge."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        best = np.full(len(pts), np.inf)
        for loop in self.loops:
            a = loop
            b = np.roll(loop, -1, axis=0)
            d = b - a
            ls = np.maximum(np.einsum("ij,ij->i", d, d), 1e-300)
            for i in range(len(a)):
                rel = pts - a[i]
                t = np.clip((rel @ d[i]) / ls[i], 0.0, 1.0)
                proj = a[i] + t[:, None] * d[i]
                best = np.minimum(best, np.linalg.norm(pts - proj, axis=1))
        return best

    def transformed(self, M):
        """Image of the polygon under the linear map M (applied to points)."""
        M = np.asarray(M, dtype=float)
        return Polygon(self.outer @ M.T, tuple(h @ M.T for h in self.holes))

    def rotated(self, angle):
        return self.transformed(rotation(angle))

    def translated(self, v):
        v = np.asarray(v, dtype=float)
        return Polygon(self.outer + v, tuple(h + v for h in self.holes))

    def to_json(self):
        return {
            "outer": self.outer.tolist(),
            "holes": [h.tolist() for h in self.holes],
        }


def _points_in_loop(loop, pts):
    """Crossing-parity containment of points in one loop (vectorized)."""
    x, y = pts[:, 0], pts[:, 1]
    inside = np.zeros(len(pts), dtype=bool)
    n = len(loop)
    for i in range(n):
        x1, y1 = loop[i]
        x2, y2 = loop[(i + 1) % n]
        crosses = (y1 > y) != (y2 > y)
        if not np.any(crosses):
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            xs = x1 + (y[crosses] - y1) * (x2 - x1) / (y2 - y1)
        hit = np.zeros_like(inside)
        hit[crosses] = x[crosses] < xs
        inside ^= hit
    return inside


def polygon_from_json(data):
    if not isinstance(data, dict) or "outer" not in data:
        raise InputError("polygon JSON must be an object with an 'outer' field")
    try:
        outer = np.asarray(data["outer"], dtype=float)
        holes = tuple(np.asarray(h, dtype=float) for h in data.get("holes", ()))
    except (TypeError, ValueError) as exc:
        raise InputError(f"polygon JSON: {exc}") from exc
    return Polygon(outer, holes)


# --- fixtures ---------------------------------------------------------------


def rectangle(width, height, origin=(0.0, 0.0)):
    x0, y0 = origin
    return Polygon(
        [[x0, y0], [x0 + width, y0], [x0 + width, y0 + height], [x0, y0 + height]]
    )


def unit_square():
    return rectangle(1.0, 1.0)


def regular_polygon(k, radius=1.0, center=(0.0, 0.0)):
    ang = 2.0 * math.pi * np.arange(k) / k
    return Polygon(
        np.column_stack(
            [center[0] + radius * np.cos(ang), center[1] + radius * np.sin(ang)]
        )
    )


def l_shape(size=1.0, notch=0.5):
    """L-shaped hexagon: the unit square minus its upper-right notch."""
    s, t = size, notch
    return Polygon([[0, 0], [s, 0], [s, s - t], [s - t, s - t], [s - t, s], [0, s]])


def slit_square(size=1.0, slit_y=0.5, slit_height=0.02, slit_from=0.25):
    """Square with a thin horizontal slit entering from the right."""
    s = size
    y0 = slit_y - 0.5 * slit_height
    y1 = slit_y + 0.5 * slit_height
    return Polygon(
        [[0, 0], [s, 0], [s, y0], [slit_from, y0], [slit_from, y1], [s, y1], [s, s], [0, s]]
    )


# --- slices and widths --------------------------------------------------------


@dataclass(frozen=True)
class SliceProfile:
    """Vertical section at fixed x: disjoint open y-intervals, ordered."""

    x: float
    components: tuple

    @property
    def max_component(self):
        return max((hi - lo for lo, hi in self.components), default=0.0)

    @property
    def total_length(self):
        return sum(hi - lo for lo, hi in self.components)


def _axis_crossings(polygon, axis, value):
    """Sorted coordinates where the line {axis coordinate = value} crosses the
    boundary, via the half-open crossing rule (vertex-touching lines resolve
    consistently; degenerate parallel edges are skipped)."""
    other = 1 - axis
    crossings = []
    for loop in polygon.loops:
        c = loop[:, axis]
        o = loop[:, other]
        c2 = np.roll(c, -1)
        o2 = np.roll(o, -1)
        mask = (c > value) != (c2 > value)
        if not np.any(mask):
            continue
        t = (value - c[mask]) / (c2[mask] - c[mask])
        crossings.append(o[mask] + t * (o2[mask] - o[mask]))
    if not crossings:
        return np.array([])
    out = np.concatenate(crossings)
    out.sort()
    return out


def slice_profile(domain, x):
    """Maximal open intervals of the vertical line section at abscissa x."""
    ys = _axis_crossings(domain, 0, x)
    if len(ys) % 2 == 1:  # line through a vertex; nudge off the event
        ys = _axis_crossings(domain, 0, x + 1e-12 * max(1.0, abs(x)))
    comps = []
    for lo, hi in zip(ys[0::2], ys[1::2]):
        if hi - lo > 0.0:
            if comps and lo - comps[-1][1] <= GEOM_EPS * max(1.0, abs(hi)):
                comps[-1] = (comps[-1][0], hi)
            else:
                comps.append((float(lo), float(hi)))
    return SliceProfile(float(x), tuple(comps))


def _max_chord_at(polygon, y):
    """Longest connected horizontal chord component at height y."""
    xs = _axis_crossings(polygon, 1, y)
    if len(xs) < 2:
        return 0.0
    if len(xs) % 2 == 1:
        return 0.0  # tangential event; neighbors cover it
    gaps = xs[1::2] - xs[0::2]
    return float(np.max(gaps)) if len(gaps) else 0.0


def width(domain, theta):
    """Directional width L_theta: sup over lines in direction theta of the
    longest connected chord component."""
    th = normalize_angle(theta, math.pi)
    rotated = domain.transformed(rotation(-th)) if th != 0.0 else domain
    offsets = np.unique(np.concatenate([loop[:, 1] for loop in rotated.loops]))
    scale = max(1.0, float(np.max(np.abs(offsets))))
    candidates = [offsets]
    if len(offsets) > 1:
        candidates.append(0.5 * (offsets[1:] + offsets[:-1]))
    eps = 1e-9 * scale
    candidates.append(offsets + eps)
    candidates.append(offsets - eps)
    best = 0.0
    for y in np.concatenate(candidates):
        best = max(best, _max_chord_at(rotated, y))
    return best


@dataclass(frozen=True)
class WidthCurve:
    thetas: np.ndarray
    values: np.ndarray
    argmax_theta: float
    sup_value: float
    attained: bool

    def rows(self):
        return list(zip(self.thetas.tolist(), self.values.tolist()))


def width_curve(domain, samples=256, refine_iters=60):
    """Sample L_theta over [0, pi) and refine around the best sample.

    Ties for the maximum are broken toward the smallest angle.  The attained
    flag records numeric stability of the refined maximum (last two
    golden-section rounds agree to 1e-9 relative); for convex domains the
    width is continuous in theta and the flag comes out true.
    """
    if samples < 8:
        raise InputError("need at least 8 angular samples")
    thetas = np.linspace(0.0, math.pi, samples, endpoint=False)
    values = np.array([width(domain, t) for t in thetas])
    vmax = float(values.max())
    k = int(np.nonzero(values >= vmax * (1.0 - 1e-12))[0][0])
    step = math.pi / samples
    lo, hi = thetas[k] - step, thetas[k] + step
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = width(domain, c), width(domain, d)
    prev_best = max(vmax, fc, fd)
    stable = False
    for i in range(refine_iters):
        if fc < fd:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = width(domain, d)
        else:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = width(domain, c)
        cur_best = max(prev_best, fc, fd)
        if i >= refine_iters - 2:
            stable = (cur_best - prev_best) <= 1e-9 * max(1.0, cur_best)
        prev_best = cur_best
    argmax = normalize_angle(0.5 * (lo + hi), math.pi)
    sup_value = prev_best
    if sup_value <= vmax * (1.0 + 1e-12):
        # refinement found nothing beyond the grid; keep the smallest-angle tie
        argmax = float(thetas[k])
        sup_value = max(vmax, sup_value)
    return WidthCurve(thetas, values, float(argmax), float(sup_value), bool(stable))


def l_omega(domain, A):
    """Maximal vertical-slice component length of A^T(domain)."""
    A = np.asarray(A, dtype=float)
    return width(domain.transformed(A.T), math.pi / 2.0)


@dataclass(frozen=True)
class StripReport:
    """Decidable slice conditions for a line-kernel anisotropy in normal form.

    ``bounded_extent`` is the x-extent interval of the rotated domain (always
    bounded for polygons); ``slices_bounded`` certifies every slice component
    has length at most L = l_omega (true by construction, with the witness
    abscissa of the maximal slice); ``strip_found`` reports whether a
    subinterval of abscissas exists on which some slice component keeps the
    full length L, together with the leftmost such strip as a polygon.
    """

    bounded_extent: tuple
    slices_bounded: bool
    L: float
    witness_x: float
    strip_found: bool
    strip_interval: tuple = None
    strip: Polygon = None
    all_strips: tuple = ()


def strip_condition_report(domain, A, scan=4096):
    """Scan the rotated domain for strips of full-width slices.

    The abscissa grid has ``scan`` points; run boundaries are sharpened by
    bisection.  Runs narrower than two grid cells are discarded (a single
    maximal slice at one abscissa, as in a triangle, is not a strip).
    """
    A = np.asarray(A, dtype=float)
    om = domain.transformed(A.T)
    x0, x1, _, _ = om.bbox
    L = width(om, math.pi / 2.0)
    eps_geom = 1e-9 * om.diameter

    def qualifying(x):
        comps = [
            (lo, hi)
            for lo, hi in slice_profile(om, x).components
            if hi - lo >= L - eps_geom
        ]
        return comps

    xs = np.linspace(x0, x1, scan + 2)[1:-1]
    hits = [qualifying(x) for x in xs]
    witness_idx = int(
        np.argmax([slice_profile(om, x).max_component for x in xs])
    )
    witness_x = float(xs[witness_idx])

    def overlaps(c1, c2):
        return min(c1[1], c2[1]) - max(c1[0], c2[0]) > 0.0

    runs = []
    run_start = None
    run_comps = []
    prev = None
    for i, comps in enumerate(hits):
        chosen = None
        if comps:
            if prev is not None:
                for c in comps:
                    if overlaps(c, prev):
                        chosen = c
                        break
            if chosen is None:
                chosen = comps[0]
        if chosen is not None and prev is not None and run_start is not None:
            runs_continue = overlaps(chosen, prev)
        else:
            runs_continue = False
        if chosen is None:
            if run_start is not None:
                runs.append((run_start, i - 1, run_comps))
                run_start, run_comps = None, []
            prev = None
        elif runs_continue:
            run_comps.append(chosen)
            prev = chosen
        else:
            if run_start is not None:
                runs.append((run_start, i - 1, run_comps))
            run_start = i
            run_comps = [chosen]
            prev = chosen
    if run_start is not None:
        runs.append((run_start, len(hits) - 1, run_comps))

    step = xs[1] - xs[0] if len(xs) > 1 else x1 - x0
    strips = []
    for i0, i1, comps in runs:
        if i1 - i0 < 2:
            continue
        left = _refine_edge(om, xs[i0], xs[i0] - step, L, eps_geom)
        right = _refine_edge(om, xs[i1], xs[i1] + step, L, eps_geom)
        strips.append(((left, right), list(zip(xs[i0 : i1 + 1], comps))))

    if not strips:
        return StripReport((float(x0), float(x1)), True, float(L), witness_x, False)

    (interval, samples) = strips[0]  # leftmost strip (non-uniqueness is possible)
    xs_run = [interval[0]] + [s[0] for s in samples] + [interval[1]]
    los = [samples[0][1][0]] + [s[1][0] for s in samples] + [samples[-1][1][0]]
    his = [samples[0][1][1]] + [s[1][1] for s in samples] + [samples[-1][1][1]]
    boundary = list(zip(xs_run, los)) + list(zip(xs_run[::-1], his[::-1]))
    strip_poly = Polygon(np.array(boundary))
    return StripReport(
        (float(x0), float(x1)),
        True,
        float(L),
        witness_x,
        True,
        (float(interval[0]), float(interval[1])),
        strip_poly,
        tuple(s[0] for s in strips),
    )


def _refine_edge(om, good_x, bad_x, L, eps):
    """Bisect a strip boundary between a qualifying and non-qualifying abscissa."""

    def ok(x):
        return any(hi - lo >= L - eps for lo, hi in slice_profile(om, x).components)

    for _ in range(50):
        mid = 0.5 * (good_x + bad_x)
        if ok(mid):
            good_x = mid
        else:
            bad_x = mid
    return 0.5 * (good_x + bad_x)
