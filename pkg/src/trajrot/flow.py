"""Trajectory integration: adaptive embedded Runge-Kutta 5(4).

Fixed Dormand-Prince coefficients so results are reproducible bit for bit
given the configuration.  Accepted steps are subdivided by cubic Hermite
interpolation until (a) the estimated chord deviation of each output
segment is below the chord tolerance and (b) no segment subtends more
than ``MAX_SEGMENT_ANGLE`` at any declared observation center --
downstream rotation quadrature is sampling-limited, so the integrator is
where angular resolution is enforced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import MAX_SEGMENT_ANGLE, Curve
from .errors import SampleBudgetExceeded, StepUnderflow
from .fields import FieldSpec, eval_field

# Dormand-Prince 5(4) tableau (seven stages, FSAL).
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
# fifth-order minus embedded fourth-order weights
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

_MIN_STEP_FRACTION = 1e-14
_MAX_SPLIT_DEPTH = 24


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and budgets for :func:`integrate_trajectory`.

    ``chord_tol`` controls output granularity (estimated deviation of the
    true solution from each output chord); ``None`` reuses ``abs_tol``.
    Loosen it explicitly when only step-level accuracy matters and dense
    output would be wastefully large.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-9
    max_step: float = math.inf
    max_samples: int = 500_000
    chord_tol: float | None = None

    def __post_init__(self):
        if not (0 < self.rel_tol < 1 and 0 < self.abs_tol < 1):
            raise ValueError("tolerances must lie in (0, 1)")
        if self.max_step <= 0:
            raise ValueError("max_step must be positive")
        if self.max_samples < 2:
            raise ValueError("max_samples must be >= 2")


def _hermite(y0, f0, y1, f1, h, theta):
    """Cubic Hermite interpolant on one accepted step, theta in [0, 1]."""
    t2 = theta * theta
    h00 = 2 * t2 * theta - 3 * t2 + 1
    h10 = t2 * theta - 2 * t2 + theta
    h01 = -2 * t2 * theta + 3 * t2
    h11 = t2 * theta - t2
    return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1


def _angle_at(center, a, b):
    u = a - center
    v = b - center
    dot = float(np.dot(u, v))
    nu2 = float(np.dot(u, u))
    nv2 = float(np.dot(v, v))
    cross2 = max(nu2 * nv2 - dot * dot, 0.0)
    return math.atan2(math.sqrt(cross2), dot)


def integrate_trajectory(f: FieldSpec, x0, t0: float, t1: float,
                         cfg: IntegratorConfig | None = None,
                         obs_centers=()) -> Curve:
    """Integrate ``dx/dt = v(x)`` from ``x0`` over ``[t0, t1]``.

    Raises :class:`StepUnderflow` when the controller is pushed below
    ``1e-14 * (t1 - t0)`` (stiffness or a singularity on the path) and
    :class:`SampleBudgetExceeded` when dense output would exceed
    ``cfg.max_samples``.
    """
    if t1 <= t0:
        raise ValueError("t1 must exceed t0")
    cfg = cfg or IntegratorConfig()
    y = np.asarray(x0, dtype=np.float64).copy()
    if y.ndim != 1 or y.shape[0] != f.dim:
        raise ValueError("x0 must be a vector matching the field dimension")
    centers = [np.asarray(c, dtype=np.float64) for c in obs_centers]
    chord_tol = cfg.abs_tol if cfg.chord_tol is None else float(cfg.chord_tol)

    span = t1 - t0
    h_min = _MIN_STEP_FRACTION * span
    h = min(cfg.max_step, span / 100.0)
    t = t0
    k1 = eval_field(f, y)

    times = [t0]
    points = [y.copy()]

    def emit(tt, yy):
        if len(times) >= cfg.max_samples:
            raise SampleBudgetExceeded(
                f"output exceeds max_samples={cfg.max_samples}")
        times.append(tt)
        points.append(np.asarray(yy, dtype=np.float64))

    while t < t1:
        h = min(h, cfg.max_step, t1 - t)
        if h < h_min:
            raise StepUnderflow(
                f"required step {h:.3g} below {h_min:.3g} at t={t:.6g}")
        # stages
        k = [k1]
        for i in range(1, 7):
            yi = y + h * sum(a * kk for a, kk in zip(_A[i], k))
            k.append(eval_field(f, yi))
        y_new = y + h * sum(b * kk for b, kk in zip(_B5, k) if b != 0.0)
        err_vec = h * sum(e * kk for e, kk in zip(_E, k) if e != 0.0)
        sc = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.sqrt(np.mean((err_vec / sc) ** 2)))
        if err <= 1.0:
            t_new = t + h
            f_new = k[6]  # FSAL: stage 7 is evaluated at (t+h, y_new)
            _emit_step(emit, y, k1, y_new, f_new, t, h, centers, chord_tol)
            t, y, k1 = t_new, y_new, f_new
        factor = 0.9 * (err ** -0.2) if err > 0 else 5.0
        h *= min(5.0, max(0.2, factor))
    return Curve(np.array(times), np.array(points), closed=False)


def _emit_step(emit, y0, f0, y1, f1, t, h, centers, chord_tol):
    """Subdivide one accepted step until chord/angle criteria hold."""
    # stack of (theta_a, ya, theta_b, yb, depth); emit points at theta_b
    stack = [(0.0, y0, 1.0, y1, 0)]
    while stack:
        ta, ya, tb, yb, depth = stack.pop()
        split = False
        if depth < _MAX_SPLIT_DEPTH:
            tm = 0.5 * (ta + tb)
            ym = _hermite(y0, f0, y1, f1, h, tm)
            dev = float(np.linalg.norm(ym - 0.5 * (ya + yb)))
            if dev > chord_tol:
                split = True
            elif centers and any(
                    _angle_at(c, ya, yb) > MAX_SEGMENT_ANGLE for c in centers):
                split = True
        if split:
            stack.append((tm, ym, tb, yb, depth + 1))
            stack.append((ta, ya, tm, ym, depth + 1))
        else:
            emit(t + tb * h, yb)
