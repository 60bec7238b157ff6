"""Mutual rotation of two space curves via the Gauss linking integral.

The signed rotation of curves ``c1``, ``c2`` in 3-space is

    (1/4pi) integral integral <c1' x c2', c1 - c2> / |c1 - c2|^3 dt1 dt2,

oriented so that a counterclockwise unit circle in the xy-plane and the
upward z-axis link with value +1.  The absolute variant integrates the
magnitude of the same kernel.  Quadrature is a per-segment-pair midpoint
rule with recursive bisection wherever the inter-curve distance is small
relative to the local segment lengths, plus a global 2x refinement pass
for the error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import AffineSubspace, Curve, GUARD_DIAMETER_FACTOR, RotationResult
from .errors import (CurvesTooClose, DimensionMismatch, DistanceTooSmall,
                     NonTransversal, NotClosed, NotPlanar,
                     QuadratureInconclusive)
from .rotation import rotation_around_subspace

# A segment pair is bisected while the inter-segment distance is below
# this multiple of the longer segment; the midpoint rule needs kernel
# locality well below the distance scale.
_NEAR_FACTOR = 4.0
_DEPTH_CAP = 24
_CHUNK = 1_500_000


@dataclass(frozen=True)
class LinkingResult:
    """Gauss integral of a closed pair with its integer snap."""

    raw: float
    nearest_integer: int
    residual: float
    error_estimate: float

    def __post_init__(self):
        if self.residual > 0.5 + 1e-12:
            raise ValueError("residual cannot exceed 0.5")


def _segment_distance(p1, q1, p2, q2) -> float:
    """Minimal distance between segments [p1,q1] and [p2,q2]."""
    d1 = q1 - p1
    d2 = q2 - p2
    r = p1 - p2
    a = float(np.dot(d1, d1))
    e = float(np.dot(d2, d2))
    f = float(np.dot(d2, r))
    tiny = 1e-300
    if a <= tiny and e <= tiny:
        return float(np.linalg.norm(r))
    if a <= tiny:
        s, t = 0.0, min(max(f / e, 0.0), 1.0)
    else:
        c = float(np.dot(d1, r))
        if e <= tiny:
            t, s = 0.0, min(max(-c / a, 0.0), 1.0)
        else:
            b = float(np.dot(d1, d2))
            denom = a * e - b * b
            s = min(max((b * f - c * e) / denom, 0.0), 1.0) if denom > 0 else 0.0
            t = (b * s + f) / e
            if t < 0.0:
                t, s = 0.0, min(max(-c / a, 0.0), 1.0)
            elif t > 1.0:
                t, s = 1.0, min(max((b - c) / a, 0.0), 1.0)
    return float(np.linalg.norm((p1 + d1 * s) - (p2 + d2 * t)))


def _kernel_midpoint(p1, q1, p2, q2, absolute) -> float:
    """Midpoint-rule contribution of one segment pair (parameters cancel:
    the tangent times dt equals the chord)."""
    d1 = q1 - p1
    d2 = q2 - p2
    m = 0.5 * (p1 + q1) - 0.5 * (p2 + q2)
    cr = np.cross(d1, d2)
    dist2 = float(np.dot(m, m))
    val = float(np.dot(cr, m)) / (dist2 * math.sqrt(dist2))
    return abs(val) if absolute else val


def _refine_pair(p1, q1, p2, q2, absolute, guard, depth=0):
    """Recursive bisection of a close segment pair.

    Returns (value, flagged_error).  Past the depth cap the midpoint
    value is used and its magnitude is flagged into the error estimate.
    """
    d = _segment_distance(p1, q1, p2, q2)
    if d <= guard:
        raise CurvesTooClose(
            f"curves approach within {d:.3g} (guard {guard:.3g})")
    l1 = float(np.linalg.norm(q1 - p1))
    l2 = float(np.linalg.norm(q2 - p2))
    if d >= _NEAR_FACTOR * max(l1, l2):
        return _kernel_midpoint(p1, q1, p2, q2, absolute), 0.0
    if depth >= _DEPTH_CAP:
        v = _kernel_midpoint(p1, q1, p2, q2, absolute)
        return v, abs(v)
    if l1 >= l2:
        m = 0.5 * (p1 + q1)
        va, fa = _refine_pair(p1, m, p2, q2, absolute, guard, depth + 1)
        vb, fb = _refine_pair(m, q1, p2, q2, absolute, guard, depth + 1)
    else:
        m = 0.5 * (p2 + q2)
        va, fa = _refine_pair(p1, q1, p2, m, absolute, guard, depth + 1)
        vb, fb = _refine_pair(p1, q1, m, q2, absolute, guard, depth + 1)
    return va + vb, fa + fb


def _vertex_min_distance(x1, x2) -> float:
    best = math.inf
    chunk = max(1, _CHUNK // max(len(x2), 1))
    for i0 in range(0, len(x1), chunk):
        diff = x1[i0:i0 + chunk, None, :] - x2[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        best = min(best, float(np.min(d2)))
    return math.sqrt(best)


def _pair_quadrature(x1, x2, absolute, guard):
    """Sum the midpoint-rule kernel over all segment pairs.

    Far pairs are evaluated vectorized; pairs whose conservative distance
    bound (midpoint distance minus half-lengths) falls below the bisection
    threshold are re-evaluated by :func:`_refine_pair`.
    """
    d1 = np.diff(x1, axis=0)
    d2 = np.diff(x2, axis=0)
    m1 = 0.5 * (x1[:-1] + x1[1:])
    m2 = 0.5 * (x2[:-1] + x2[1:])
    l1 = np.linalg.norm(d1, axis=1)
    l2 = np.linalg.norm(d2, axis=1)
    n, m = len(d1), len(d2)

    partials = []
    near_pairs = []
    chunk = max(1, _CHUNK // max(m, 1))
    for i0 in range(0, n, chunk):
        i1 = min(i0 + chunk, n)
        diff = m1[i0:i1, None, :] - m2[None, :, :]
        dist2 = np.einsum("ijk,ijk->ij", diff, diff)
        cr = np.cross(d1[i0:i1, None, :], d2[None, :, :])
        numer = np.einsum("ijk,ijk->ij", cr, diff)
        vals = numer / (dist2 * np.sqrt(dist2))
        if absolute:
            vals = np.abs(vals)
        lower = np.sqrt(dist2) - 0.5 * (l1[i0:i1, None] + l2[None, :])
        near = lower < _NEAR_FACTOR * np.maximum(l1[i0:i1, None], l2[None, :])
        if np.any(near):
            vals = np.where(near, 0.0, vals)
            for ii, jj in zip(*np.nonzero(near)):
                near_pairs.append((i0 + int(ii), int(jj)))
        partials.append(float(np.sum(vals)))

    flagged = 0.0
    refined = []
    for i, j in near_pairs:
        v, fl = _refine_pair(x1[i], x1[i + 1], x2[j], x2[j + 1],
                             absolute, guard)
        refined.append(v)
        flagged += fl
    total = math.fsum(partials) + math.fsum(refined)
    return total, flagged


def _midpoint_refined(x):
    out = np.empty((2 * len(x) - 1, x.shape[1]), dtype=x.dtype)
    out[::2] = x
    out[1::2] = 0.5 * (x[:-1] + x[1:])
    return out


def _decimated(x):
    idx = np.arange(0, len(x), 2)
    if idx[-1] != len(x) - 1:
        idx = np.append(idx, len(x) - 1)
    return x[idx]


def _pair_guard(c1: Curve, c2: Curve, guard) -> float:
    if guard is not None:
        return float(guard)
    return GUARD_DIAMETER_FACTOR * max(c1.diameter_bound(), c2.diameter_bound())


def gauss_rotation_pair(c1: Curve, c2: Curve, mode: str = "signed",
                        guard: float | None = None) -> RotationResult:
    """Signed or absolute mutual rotation of two curves in 3-space,
    in turns (the 1/4pi normalization is built in)."""
    if mode not in ("signed", "absolute"):
        raise ValueError("mode must be 'signed' or 'absolute'")
    if c1.dim != 3 or c2.dim != 3:
        raise DimensionMismatch("mutual rotation requires curves in 3-space")
    g = _pair_guard(c1, c2, guard)
    x1 = c1.x.astype(np.float64, copy=False)
    x2 = c2.x.astype(np.float64, copy=False)
    if _vertex_min_distance(x1, x2) <= g:
        raise CurvesTooClose(f"curves approach within the guard {g:.3g}")
    absolute = mode == "absolute"
    v_coarse, _ = _pair_quadrature(x1, x2, absolute, g)
    v_fine, fl_fine = _pair_quadrature(_midpoint_refined(x1),
                                       _midpoint_refined(x2), absolute, g)
    # sampling term: how much the polylines themselves (not the kernel
    # quadrature) could be off from the curves they discretize
    v_dec, _ = _pair_quadrature(_decimated(x1), _decimated(x2), absolute, g)
    err = (abs(v_fine - v_coarse) + abs(v_coarse - v_dec) + fl_fine) \
        / (4 * math.pi) + 1e-12
    value = v_fine / (4 * math.pi)
    if absolute:
        value = max(value, 0.0)
    return RotationResult(value, err, "gauss_turns")


def linking_coefficient(c1: Curve, c2: Curve,
                        guard: float | None = None) -> LinkingResult:
    """Gauss integral of two disjoint closed curves with integer snap.

    The snap is asserted, not assumed: if the residual to the nearest
    integer exceeds ``max(0.1, 3 * error_estimate)`` the quadrature is
    declared inconclusive instead of rounding garbage.
    """
    if not (c1.closed and c2.closed):
        raise NotClosed("linking coefficient requires two closed curves")
    rr = gauss_rotation_pair(c1, c2, "signed", guard=guard)
    nearest = int(round(rr.value))
    residual = abs(rr.value - nearest)
    if residual >= max(0.1, 3.0 * rr.error_estimate):
        raise QuadratureInconclusive(
            f"residual {residual:.3g} too large for integer snap "
            f"(error estimate {rr.error_estimate:.3g})")
    return LinkingResult(rr.value, nearest, residual, rr.error_estimate)


# ---------------------------------------------------------------------------
# topological cross-check: crossings through a flat spanning disk


def _polygon_winding(poly, point) -> float:
    d = poly - point
    cross = d[:-1, 0] * d[1:, 1] - d[:-1, 1] * d[1:, 0]
    dot = d[:-1, 0] * d[1:, 0] + d[:-1, 1] * d[1:, 1]
    return float(np.sum(np.arctan2(cross, dot))) / (2 * math.pi)


def _segments_intersect_2d(poly) -> bool:
    """Any non-adjacent segment pair of the closed polygon intersecting?"""
    a = poly[:-1]
    b = poly[1:]
    n = len(a)

    def orient(p, q, r):
        return (q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1]) \
            - (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0])

    for i in range(n - 2):
        j0 = i + 2
        j1 = n - 1 if i == 0 else n  # skip the wrap-adjacent pair for i=0
        if j0 >= j1:
            continue
        p, q = a[i], b[i]
        rs = a[j0:j1]
        ss = b[j0:j1]
        d1 = orient(p[None, :], q[None, :], rs)
        d2 = orient(p[None, :], q[None, :], ss)
        d3 = orient(rs, ss, p[None, :].repeat(len(rs), axis=0))
        d4 = orient(rs, ss, q[None, :].repeat(len(rs), axis=0))
        hit = (d1 * d2 < 0) & (d3 * d4 < 0)
        if np.any(hit):
            return True
    return False


def topological_linking_planar(c1: Curve, c2: Curve) -> int:
    """Signed count of crossings of ``c2`` through the flat interior of the
    planar simple closed curve ``c1``.

    Crossing signs follow the curve orientations: passing through the disk
    in the direction that makes a right-handed screw with ``c1``'s
    (counterclockwise) orientation counts +1, matching the sign of the
    Gauss integral for a circle/line pair.
    """
    if c1.dim != 3 or c2.dim != 3:
        raise DimensionMismatch("planar linking check requires 3-space curves")
    if not c1.closed:
        raise NotClosed("c1 must be closed")
    x1 = c1.x.astype(np.float64, copy=False)
    centroid = x1[:-1].mean(axis=0)
    u, s, vt = np.linalg.svd(x1 - centroid, full_matrices=False)
    scale = max(c1.diameter_bound(), 1e-30)
    dev = float(np.max(np.abs((x1 - centroid) @ vt[2])))
    if dev > 1e-9 * scale:
        raise NotPlanar(f"c1 deviates {dev:.3g} from its best plane")
    e1, e2 = vt[0], vt[1]
    normal = np.cross(e1, e2)
    poly = (x1 - centroid) @ np.stack([e1, e2], axis=1)
    if _segments_intersect_2d(poly):
        raise NotPlanar("c1 is not simple (self-intersecting)")
    # orient the normal so that c1 runs counterclockwise around it
    area2 = float(np.sum(poly[:-1, 0] * poly[1:, 1] - poly[1:, 0] * poly[:-1, 1]))
    if area2 < 0:
        normal = -normal

    h = (c2.x.astype(np.float64, copy=False) - centroid) @ normal
    if np.any(h == 0.0):
        raise NonTransversal("a sample of c2 lies exactly on the plane of c1")
    total = 0
    x2 = c2.x.astype(np.float64, copy=False)
    flips = np.nonzero(h[:-1] * h[1:] < 0)[0]
    for i in flips:
        tau = h[i] / (h[i] - h[i + 1])
        p = x2[i] + tau * (x2[i + 1] - x2[i])
        pu = np.array([float((p - centroid) @ e1), float((p - centroid) @ e2)])
        if round(abs(_polygon_winding(poly, pu))) != 0:
            total += 1 if h[i + 1] > 0 else -1
    return total


# ---------------------------------------------------------------------------
# line / projection consistency


def truncated_line_curve(line: AffineSubspace, M: float, focus_lo: float,
                         focus_hi: float, core_step: float) -> Curve:
    """Polyline covering parameter range [-M, M] of a straight line,
    densely sampled on the focus window and geometrically coarsened
    outside it."""
    if M <= max(abs(focus_lo), abs(focus_hi)):
        raise ValueError("truncation M must exceed the focus window")
    core = np.arange(focus_lo, focus_hi + core_step, core_step)
    right = [core[-1]]
    step = core_step
    while right[-1] < M:
        step *= 1.25
        right.append(min(right[-1] + step, M))
    left = [core[0]]
    step = core_step
    while left[-1] > -M:
        step *= 1.25
        left.append(max(left[-1] - step, -M))
    s = np.concatenate([left[::-1][:-1], core, right[1:]])
    direction = line.basis[0]
    pts = line.base_point + s[:, None] * direction
    return Curve(s, pts, closed=False)


def _line_tail_bound(x2_pts, seg_len2, base, direction, M) -> float:
    """Error from truncating the line at parameter +-M: for each side,
    bound the omitted kernel mass using the exact single-line integral
    1/eta^2 * (1 - u/sqrt(1+u^2)) with u = (M -+ s)/eta."""
    rel = x2_pts - base
    s = rel @ direction
    eta = np.linalg.norm(rel - s[:, None] * direction, axis=1)
    eta = np.maximum(eta, 1e-300)
    total = 0.0
    for sign in (+1.0, -1.0):
        u = (M - sign * s) / eta
        vals = (1.0 - u / np.sqrt(1.0 + u * u)) / eta
        seg_vals = np.maximum(vals[:-1], vals[1:])
        total += float(np.sum(seg_len2 * seg_vals))
    return total / (4 * math.pi)


def line_rotation_crosscheck(c2: Curve, line: AffineSubspace,
                             mode: str = "signed", M: float = 200.0,
                             guard: float | None = None):
    """Compute the rotation of ``c2`` about a straight line both ways.

    Returns ``(gauss, projection)``: the Gauss integral of ``c2`` against
    a truncated segment of the line (turns, with the analytic truncation
    tail added to its error estimate) and the projection-based rotation
    around the line (its native convention: turns when signed, radians
    when absolute).  The two agree within combined error estimates; the
    complement orientation rule makes the signs match.
    """
    if line.ambient_dim != 3 or line.dim != 1:
        raise DimensionMismatch("need a straight line in 3-space")
    if c2.dim != 3:
        raise DimensionMismatch("curve must live in 3-space")
    direction = line.basis[0]
    x2 = c2.x.astype(np.float64, copy=False)
    rel = x2 - line.base_point
    sproj = rel @ direction
    eta = np.linalg.norm(rel - sproj[:, None] * direction, axis=1)
    eta_min = float(np.min(eta))
    if eta_min <= 0:
        raise DistanceTooSmall("curve touches the line")
    pad = 2.0 * float(np.max(eta))
    lo, hi = float(np.min(sproj)) - pad, float(np.max(sproj)) + pad
    if M <= max(abs(lo), abs(hi)):
        raise ValueError("M must exceed the curve's extent along the line")
    core_step = min(eta_min / 2.0, max((hi - lo) / 400.0, eta_min / 8.0))
    line_curve = truncated_line_curve(line, M, lo, hi, core_step)
    g = min(eta_min / 2.0, _pair_guard(line_curve, c2, guard))
    gauss = gauss_rotation_pair(line_curve, c2, mode, guard=g)
    seg_len2 = np.linalg.norm(np.diff(x2, axis=0), axis=1)
    tail = _line_tail_bound(x2, seg_len2, line.base_point, direction, M)
    gauss = RotationResult(gauss.value, gauss.error_estimate + tail,
                           "gauss_turns")
    projection = rotation_around_subspace(c2, line, mode, guard=guard)
    return gauss, projection
