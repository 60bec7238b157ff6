"""Integral geometry on spheres: Crofton length estimation and the
constructive search for oscillation witnesses.

A long curve confined to a sphere (or ball) must revisit longitudes with
opposite tangential velocities; these witness searches certify that
constructively.  ``crofton_length_estimate`` is the Monte-Carlo form of
the spherical Crofton formula: length = pi * R * E[#crossings with a
uniformly random great subsphere].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import Curve, SphericalCurve, curve_length
from .errors import PreconditionLength, WitnessNotFound
from .fields import enclosing_ball

_WITNESS_SLACK = 1e-9


@dataclass(frozen=True)
class CroftonConstants:
    """Dimensional constants for the Euclidean Crofton estimates.

    ``c_n`` is the line-measure normalization for curves in n-space,
    ``V_n`` the volume of the unit sphere, and ``C_n = c_n * V_n``.
    """

    n: int
    c_n: float
    V_n: float
    C_n: float


def crofton_constants(n: int) -> CroftonConstants:
    if n < 2:
        raise ValueError("n must be >= 2")
    g = math.gamma
    c_n = g((n + 1) / 2) * g(0.5) / g(n / 2)
    v_n = 2.0 * g(0.5) ** n / g(n / 2)
    return CroftonConstants(n, c_n, v_n, c_n * v_n)


def haar_orthogonal(rng: np.random.Generator, n: int, size: int = 1) -> np.ndarray:
    """Haar-distributed orthogonal matrices via QR of Gaussian matrices."""
    z = rng.standard_normal((size, n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    s = np.where(d == 0, 1.0, np.sign(d))
    return q * s[:, None, :]


@dataclass(frozen=True)
class CroftonEstimate:
    value: float
    stderr: float
    draws: int


def crofton_length_estimate(s: SphericalCurve, m: int = 10_000,
                            seed: int = 0) -> CroftonEstimate:
    """Monte-Carlo length of a spherical curve from random subsphere hits.

    Each draw rotates a reference great subsphere by a Haar orthogonal
    matrix and counts sign changes of its defining linear functional
    along the polyline.  The mean count times pi estimates the geodesic
    length.  The standard error carries a 1/m variance floor so that
    zero-variance counts (every subsphere hits the curve equally often)
    still report the discreteness-limited uncertainty.
    """
    if m < 100:
        raise ValueError("m must be >= 100")
    rng = np.random.default_rng(seed)
    x = s.curve.x.astype(np.float64, copy=False)
    n = x.shape[1]
    counts = np.empty(m, dtype=np.int64)
    done = 0
    block = max(1, min(m, 4_000_000 // max(x.shape[0], 1)))
    while done < m:
        k = min(block, m - done)
        g = haar_orthogonal(rng, n, k)
        u = g[:, :, 0]                       # rotated reference normal
        f = x @ u.T                          # (samples, k)
        flips = np.signbit(f[:-1]) != np.signbit(f[1:])
        counts[done:done + k] = np.sum(flips, axis=0)
        done += k
    mean = float(np.mean(counts))
    var = float(np.var(counts, ddof=1)) if m > 1 else 0.0
    value = math.pi * mean
    stderr = math.pi * math.sqrt((var + 1.0 / m) / m)
    return CroftonEstimate(value, stderr, m)


# ---------------------------------------------------------------------------
# witness searches


@dataclass(frozen=True)
class EquatorWitness:
    """Two times at matching longitudes with opposite tangential velocities.

    ``plane`` holds the orthonormal rows spanning the witness circle's
    plane ((2, n); a single row for the straight-line variant).  The
    stored projected velocities satisfy ``sign(v_proj_1) ==
    -sign(v_proj_2)`` and ``min(|v_proj_i|) >= threshold`` up to slack;
    this is re-checked at construction.
    """

    plane: np.ndarray
    tau1: float
    tau2: float
    relation: str          # "coincide" | "antipodal"
    v_proj_1: float
    v_proj_2: float
    theta: float
    threshold: float
    curve_length: float
    window: tuple[float, float]

    def __post_init__(self):
        if self.relation not in ("coincide", "antipodal"):
            raise ValueError(f"bad relation {self.relation!r}")
        if not (self.window[0] < self.tau1 < self.tau2 < self.window[1]):
            raise ValueError("witness times must be strictly inside the window")
        if not (self.v_proj_1 * self.v_proj_2 < 0):
            raise ValueError("projected velocities must have opposite signs")
        achieved = min(abs(self.v_proj_1), abs(self.v_proj_2))
        if achieved < self.threshold - _WITNESS_SLACK * max(1.0, self.threshold):
            raise ValueError("witness velocities fall below the required threshold")

    @property
    def achieved(self) -> float:
        return min(abs(self.v_proj_1), abs(self.v_proj_2))


def _angle_increments(a, b):
    """Signed angle steps of the planar path (a_i, b_i), each in (-pi, pi]."""
    cross = a[:-1] * b[1:] - b[:-1] * a[1:]
    dot = a[:-1] * a[1:] + b[:-1] * b[1:]
    return np.arctan2(cross, dot)


def _centered_rate(values, t):
    """d(values)/dt by centered differences, one-sided at the endpoints."""
    v = np.empty_like(values, dtype=np.float64)
    v[1:-1] = (values[2:] - values[:-2]) / (t[2:] - t[:-2])
    v[0] = (values[1] - values[0]) / (t[1] - t[0])
    v[-1] = (values[-1] - values[-2]) / (t[-1] - t[-2])
    return v


def _best_matched_pair(position, velocity, coincide_ok, antipodal_ok, tol,
                       modulus):
    """Scan interior index pairs for matched positions and opposite motion.

    ``position`` is compared modulo ``modulus`` (None for the straight
    line case).  Returns (score, i, j, relation) of the best candidate or
    None.  For antipodal matches the second velocity is compared after
    projection to the first point's tangent direction, which flips its
    sign.
    """
    m = len(position)
    best = None
    idx = np.arange(m)
    interior = (idx > 0) & (idx < m - 1)
    chunk = max(1, 2_000_000 // m)
    for i0 in range(0, m, chunk):
        i1 = min(i0 + chunk, m)
        pi = position[i0:i1, None]
        vi = velocity[i0:i1, None]
        diff = pi - position[None, :]
        if modulus is None:
            coin = np.abs(diff) <= tol
            anti = np.zeros_like(coin)
        else:
            dd = np.mod(diff, modulus)
            coin = np.minimum(dd, modulus - dd) <= tol
            anti = np.abs(dd - 0.5 * modulus) <= tol
        vv = vi * velocity[None, :]
        cand = np.zeros(coin.shape, dtype=bool)
        if coincide_ok:
            cand |= coin & (vv < 0)
        if antipodal_ok:
            cand |= anti & (vv > 0)
        cand &= interior[i0:i1, None] & interior[None, :]
        cand &= (idx[i0:i1, None] < idx[None, :])
        if not np.any(cand):
            continue
        score = np.minimum(np.abs(vi), np.abs(velocity[None, :]))
        score = np.where(cand, score, -np.inf)
        flat = int(np.argmax(score))
        ii, jj = np.unravel_index(flat, score.shape)
        sc = float(score[ii, jj])
        if best is None or sc > best[0]:
            rel = "coincide"
            if antipodal_ok and not coin[ii, jj]:
                rel = "antipodal"
            best = (sc, i0 + int(ii), int(jj), rel)
    return best


def find_circle_witness(c: Curve, theta: float) -> EquatorWitness:
    """Witness search for a curve lying on a circle about the origin.

    Requires length > 2*pi*R*theta.  Returns the time pair with equal or
    antipodal angular positions, opposite tangential motion, and maximal
    ``min(|v1|, |v2|)``; that minimum is guaranteed to reach
    ``s/(4 (t2-t1))`` for closed curves and ``(theta-4)/(4 theta) *
    s/(t2-t1)`` otherwise.  The longitude-matching tolerance scales as
    ``2*pi/sqrt(samples)`` and is relaxed once (4x) before giving up.
    """
    if theta <= 4:
        raise ValueError("theta must be > 4")
    if c.dim != 2:
        raise ValueError("circle witness needs a planar curve")
    x64 = c.x.astype(np.float64, copy=False)
    radii = np.linalg.norm(x64, axis=1)
    radius = float(np.mean(radii))
    if radius <= 0 or np.max(np.abs(radii - radius)) > 1e-6 * radius:
        raise ValueError("samples do not lie on a circle about the origin")
    inc = _angle_increments(x64[:, 0], x64[:, 1])
    s_len = radius * float(np.sum(np.abs(inc)))
    if s_len <= 2 * math.pi * radius * theta:
        raise PreconditionLength(
            f"curve length {s_len:.6g} must exceed 2*pi*R*theta = "
            f"{2 * math.pi * radius * theta:.6g}")
    duration = c.duration
    factor = 0.25 if c.closed else (theta - 4.0) / (4.0 * theta)
    threshold = factor * s_len / duration

    phi = np.concatenate([[0.0], np.cumsum(inc)])  # unwrapped
    position = np.mod(np.arctan2(x64[:, 1], x64[:, 0]), 2 * math.pi)
    v_tang = radius * _centered_rate(phi, c.t)

    tol0 = 2 * math.pi / math.sqrt(c.n_samples)
    for tol in (tol0, 4 * tol0):
        hit = _best_matched_pair(position, v_tang, True, True, tol,
                                 2 * math.pi)
        if hit is None:
            continue
        score, i, j, rel = hit
        if score < threshold - _WITNESS_SLACK * max(1.0, threshold):
            continue
        v2 = v_tang[j] if rel == "coincide" else -v_tang[j]
        return EquatorWitness(
            plane=np.eye(2), tau1=float(c.t[i]), tau2=float(c.t[j]),
            relation=rel, v_proj_1=float(v_tang[i]), v_proj_2=float(v2),
            theta=theta, threshold=threshold, curve_length=s_len,
            window=(float(c.t[0]), float(c.t[-1])))
    raise WitnessNotFound(
        "no matched pair reaches the required speed; the sampling may be "
        "too coarse for the longitude tolerance")


def principal_plane(points: np.ndarray) -> np.ndarray:
    """Dominant rotation plane of a polyline (top plane of the swept
    bivector sum), as two orthonormal rows."""
    x = points.astype(np.float64, copy=False)
    m = x[:-1].T @ x[1:]
    m = m - m.T
    u, _, _ = np.linalg.svd(m)
    return u[:, :2].T.copy()


def find_equator_witness(s: SphericalCurve, theta: float, trials: int = 64,
                         seed: int = 0) -> EquatorWitness:
    """Witness search on the unit sphere via longitude projections.

    Tries the curve's principal rotation plane first, then Haar-random
    planes.  A candidate circle is kept when the longitude projection of
    the curve is at least as long as the curve itself (1% tolerance) --
    such a plane exists whenever length > 2*pi*theta -- and the circle
    witness search then supplies the time pair.  The stored projected
    velocities are tangential velocities of the longitude projection.
    """
    if theta <= 4:
        raise ValueError("theta must be > 4")
    s_len = curve_length(s.curve)
    if s_len <= 2 * math.pi * theta:
        raise PreconditionLength(
            f"spherical length {s_len:.6g} must exceed 2*pi*theta = "
            f"{2 * math.pi * theta:.6g}")
    x = s.curve.x.astype(np.float64, copy=False)
    rng = np.random.default_rng(seed)
    n = x.shape[1]

    def candidate_planes():
        yield principal_plane(x)
        for g in haar_orthogonal(rng, n, max(trials - 1, 0)):
            yield g[:, :2].T

    best_proj = 0.0
    for plane in candidate_planes():
        a = x @ plane[0]
        b = x @ plane[1]
        rho = np.hypot(a, b)
        if np.min(rho) < 1e-9:
            continue  # curve hits the poles of this plane
        proj_len = float(np.sum(np.abs(_angle_increments(a, b))))
        best_proj = max(best_proj, proj_len)
        if proj_len < 0.99 * s_len:
            continue
        pts = np.stack([a / rho, b / rho], axis=1)
        projected = Curve(s.curve.t, pts, closed=None)
        try:
            w = find_circle_witness(projected, theta)
        except (WitnessNotFound, PreconditionLength):
            continue
        return EquatorWitness(
            plane=plane.copy(), tau1=w.tau1, tau2=w.tau2, relation=w.relation,
            v_proj_1=w.v_proj_1, v_proj_2=w.v_proj_2, theta=theta,
            threshold=w.threshold, curve_length=w.curve_length,
            window=w.window)
    raise WitnessNotFound(
        f"no plane among {trials} trials yielded a witness (best projection "
        f"length {best_proj:.6g} vs curve length {s_len:.6g}); "
        "try more trials")


def principal_direction(points: np.ndarray) -> np.ndarray:
    """Length-weighted dominant direction of motion of a polyline."""
    d = np.diff(points.astype(np.float64, copy=False), axis=0)
    lens = np.linalg.norm(d, axis=1)
    ok = lens > 0
    u = d[ok] / lens[ok, None]
    m = (u * lens[ok, None]).T @ u
    w, vec = np.linalg.eigh(m)
    return vec[:, -1].copy()


def find_euclidean_witness(c: Curve, theta: float, trials: int = 200,
                           seed: int = 0) -> EquatorWitness:
    """Straight-line analog: a long curve inside a ball of radius R
    (length > theta * C_n * R, theta > 8) revisits some line coordinate
    with opposite projected velocities >= (theta-8)/(4 theta) * s/T.
    """
    if theta <= 8:
        raise ValueError("theta must be > 8")
    x = c.x.astype(np.float64, copy=False)
    ball = enclosing_ball(x)
    consts = crofton_constants(c.dim)
    s_len = curve_length(c)
    needed = theta * consts.C_n * ball.radius
    if s_len <= needed:
        raise PreconditionLength(
            f"length {s_len:.6g} must exceed theta*C_n*R = {needed:.6g}")
    duration = c.duration
    threshold = (theta - 8.0) / (4.0 * theta) * s_len / duration
    rng = np.random.default_rng(seed)

    def directions():
        yield principal_direction(x)
        for _ in range(max(trials - 1, 0)):
            g = rng.standard_normal(c.dim)
            yield g / np.linalg.norm(g)

    for u in directions():
        p = x @ u
        v = _centered_rate(p, c.t)
        tol0 = (float(np.max(p)) - float(np.min(p))) / math.sqrt(c.n_samples)
        for tol in (tol0, 4 * tol0):
            hit = _best_matched_pair(p, v, True, False, tol, None)
            if hit is None:
                continue
            score, i, j, _ = hit
            if score < threshold - _WITNESS_SLACK * max(1.0, threshold):
                continue
            return EquatorWitness(
                plane=u[None, :].copy(), tau1=float(c.t[i]),
                tau2=float(c.t[j]), relation="coincide",
                v_proj_1=float(v[i]), v_proj_2=float(v[j]), theta=theta,
                threshold=threshold, curve_length=s_len,
                window=(float(c.t[0]), float(c.t[-1])))
    raise WitnessNotFound(
        f"no line direction among {trials} trials yielded a witness")
