import math

import numpy as np
import pytest

import trajrot as tr

# Reference sink: eigenvalues -1 (along x1) and -1 +- 2i (rotating the
# x2/x3 plane at rate 2).  Operator norm sqrt(5).
SINK_MATRIX = np.array([[-1.0, 0.0, 0.0],
                        [0.0, -1.0, -2.0],
                        [0.0, 2.0, -1.0]])
SINK_ALPHA = -1.0
SINK_BETA = 2.0


def sink_closed_form(x0, t):
    """Exact solution of dx/dt = SINK_MATRIX x."""
    x0 = np.asarray(x0, dtype=float)
    t = np.asarray(t, dtype=float)
    ea = np.exp(SINK_ALPHA * t)
    cb, sb = np.cos(SINK_BETA * t), np.sin(SINK_BETA * t)
    x1 = x0[0] * np.exp(-t)
    x2 = ea * (cb * x0[1] - sb * x0[2])
    x3 = ea * (sb * x0[1] + cb * x0[2])
    return np.stack([x1, x2, x3], axis=-1)


def circle3d(n=801, radius=1.0, center=(0.0, 0.0, 0.0), plane="xy",
             phase=0.0, turns=1.0):
    th = np.linspace(0.0, 2 * math.pi * turns, n) + phase
    t = np.linspace(0.0, 1.0, n)
    z = np.zeros_like(th)
    basis = {
        "xy": (np.stack([np.cos(th), np.sin(th), z], axis=1)),
        "xz": (np.stack([np.cos(th), z, np.sin(th)], axis=1)),
    }[plane]
    return tr.Curve(t, np.asarray(center) + radius * basis)


def circle2d(n=1001, radius=1.0, center=(0.0, 0.0), turns=1.0, phase=0.0):
    th = np.linspace(0.0, 2 * math.pi * turns, n) + phase
    t = np.linspace(0.0, abs(turns), n)
    pts = np.asarray(center) + radius * np.stack([np.cos(th), np.sin(th)], axis=1)
    return tr.Curve(t, pts)


def helix_curve(turns=3.0, pitch=0.15, n=1200):
    t = np.linspace(0.0, 2 * math.pi * turns, n)
    return tr.Curve(t, np.stack([np.cos(t), np.sin(t), pitch * t], axis=1))


Z_AXIS = tr.AffineSubspace(np.zeros(3), [np.array([0.0, 0.0, 1.0])])
X_AXIS = tr.AffineSubspace(np.zeros(3), [np.array([1.0, 0.0, 0.0])])


def random_rotation(rng, n=3):
    """Haar rotation restricted to SO(n): signed quantities flip under
    reflections, so rigid-motion tests must stay orientation-preserving."""
    from trajrot.crofton import haar_orthogonal

    q = haar_orthogonal(rng, n)[0]
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


@pytest.fixture(scope="session")
def sink_pair():
    f = tr.linear(SINK_MATRIX)
    cfg = tr.IntegratorConfig(rel_tol=1e-10, abs_tol=1e-12, max_step=0.01,
                              chord_tol=1e-5)
    t1 = tr.integrate_trajectory(f, np.array([1.0, 1.0, 0.0]), 0.0, 3.0, cfg)
    t2 = tr.integrate_trajectory(f, np.array([1.0, -1.0, 0.0]), 0.0, 3.0, cfg)
    return f, t1, t2


@pytest.fixture(scope="session")
def spiral_traj():
    cfg = tr.IntegratorConfig(rel_tol=1e-10, abs_tol=1e-12, chord_tol=1e-5)
    return tr.integrate_trajectory(tr.spiral2d(), np.array([0.5, 0.0]),
                                   0.0, 10.0, cfg, obs_centers=[np.zeros(2)])


@pytest.fixture(scope="session")
def twist_pair():
    cfg = tr.IntegratorConfig(rel_tol=1e-10, abs_tol=1e-13, chord_tol=1e-6)
    f = tr.twist3d()
    w1 = tr.integrate_trajectory(f, np.array([0.05, 0.5, 0.0]), 0.0, 0.15, cfg)
    w2 = tr.integrate_trajectory(f, np.array([0.05, 0.0, 0.7]), 0.0, 0.15, cfg)
    return w1, w2
