import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp

import trajrot as tr
from trajrot.crofton import haar_orthogonal


def mp_constants(n):
    mp.dps = 50
    c_n = mp.gamma((n + 1) / mp.mpf(2)) * mp.gamma(mp.mpf(1) / 2) / mp.gamma(n / mp.mpf(2))
    v_n = 2 * mp.gamma(mp.mpf(1) / 2) ** n / mp.gamma(n / mp.mpf(2))
    return c_n, v_n, c_n * v_n


def test_constants_n3():
    c = tr.crofton_constants(3)
    assert abs(c.c_n - 2.0) < 1e-14
    assert abs(c.V_n - 4 * math.pi) < 1e-12
    assert abs(c.C_n - 8 * math.pi) < 1e-12


def test_constants_n2():
    c = tr.crofton_constants(2)
    assert abs(c.c_n - math.pi / 2) < 1e-14
    assert abs(c.V_n - 2 * math.pi) < 1e-12
    assert abs(c.C_n - math.pi ** 2) < 1e-12


def test_constants_vs_high_precision_reference():
    for n in range(2, 11):
        ref_c, ref_v, ref_cc = mp_constants(n)
        got = tr.crofton_constants(n)
        assert abs(got.c_n / float(ref_c) - 1) < 1e-12
        assert abs(got.V_n / float(ref_v) - 1) < 1e-12
        assert abs(got.C_n / float(ref_cc) - 1) < 1e-12
        assert got.C_n > 0 and math.isfinite(got.C_n)


def great_circle(n=1001):
    th = np.linspace(0, 2 * math.pi, n)
    pts = np.stack([np.cos(th), np.sin(th), np.zeros_like(th)], axis=1)
    return tr.SphericalCurve(tr.Curve(np.linspace(0, 1, n), pts, closed=True))


def test_great_circle_estimate():
    est = tr.crofton_length_estimate(great_circle(), m=10_000, seed=4)
    assert abs(est.value - 2 * math.pi) <= 3 * est.stderr + 1e-9


def test_half_circle_estimate():
    th = np.linspace(0, math.pi, 501)
    pts = np.stack([np.cos(th), np.sin(th), np.zeros_like(th)], axis=1)
    s = tr.SphericalCurve(tr.Curve(np.linspace(0, 1, 501), pts))
    est = tr.crofton_length_estimate(s, m=10_000, seed=5)
    assert abs(est.value - math.pi) <= 3 * est.stderr + 1e-9


def test_spiral_blowup_estimate_matches_rotation(spiral_traj):
    short = tr.slice_time(spiral_traj, 0.0, 5.0)
    sph = tr.spherical_blowup(short, np.zeros(2))
    est = tr.crofton_length_estimate(sph, m=10_000, seed=6)
    assert abs(est.value - 5.0) <= 3 * est.stderr


def test_estimator_consistency_many_seeds():
    gc = great_circle(n=601)
    ref = tr.curve_length(gc.curve)
    hits = 0
    for seed in range(40):
        est = tr.crofton_length_estimate(gc, m=2_000, seed=seed)
        if abs(est.value - ref) <= 4 * est.stderr:
            hits += 1
    assert hits >= 38


def test_haar_isotropy():
    rng = np.random.default_rng(8)
    g = haar_orthogonal(rng, 3, 100_000)
    u = np.array([0.3, -0.5, np.sqrt(1 - 0.09 - 0.25)])
    dots = np.abs(g[:, :, 0] @ u)
    mean = dots.mean()
    se = dots.std(ddof=1) / math.sqrt(len(dots))
    assert abs(mean - 0.5) <= 3 * se  # E|<w,u>| = 1/2 on the 2-sphere


def test_haar_orthogonality():
    rng = np.random.default_rng(9)
    g = haar_orthogonal(rng, 4, 50)
    eye = np.einsum("sij,sik->sjk", g, g)
    assert np.max(np.abs(eye - np.eye(4))) < 1e-12


# --- witness searches ------------------------------------------------------


def uniform_loop(turns=5, n=4001):
    t = np.linspace(0, 1, n)
    phi = 2 * math.pi * turns * t
    return tr.Curve(t, np.stack([np.cos(phi), np.sin(phi)], axis=1),
                    closed=True)


def triangle_wave_curve(total_angle=30 * math.pi, n=6001):
    t = np.linspace(0, 1, n)
    half = total_angle / 2
    ang = np.where(t <= 0.5, 2 * half * t, half - 2 * half * (t - 0.5))
    return tr.Curve(t, np.stack([np.cos(ang), np.sin(ang)], axis=1))


def test_circle_witness_uniform_loop():
    w = tr.find_circle_witness(uniform_loop(), 4.5)
    assert w.relation == "antipodal"
    assert w.v_proj_1 * w.v_proj_2 < 0
    assert abs(abs(w.v_proj_1) - 10 * math.pi) < 0.1
    assert w.achieved >= w.threshold - 1e-9
    assert w.achieved >= 0.25 * w.curve_length - 0.1  # closed-curve bound, T=1


def test_circle_witness_triangle_wave():
    w = tr.find_circle_witness(triangle_wave_curve(), 5.0)
    assert w.v_proj_1 * w.v_proj_2 < 0
    assert abs(abs(w.v_proj_1) - 30 * math.pi) < 0.5
    assert w.achieved >= (1 / 20) * w.curve_length - 0.5


def test_circle_witness_precondition():
    with pytest.raises(tr.PreconditionLength):
        tr.find_circle_witness(uniform_loop(turns=1, n=301), 5.0)


def test_circle_witness_times_interior():
    w = tr.find_circle_witness(uniform_loop(), 4.5)
    assert 0.0 < w.tau1 < w.tau2 < 1.0


def test_equator_witness_six_loops():
    t = np.linspace(0, 1, 6001)
    phi = 12 * math.pi * t
    eq = tr.SphericalCurve(tr.Curve(
        t, np.stack([np.cos(phi), np.sin(phi), np.zeros_like(phi)], axis=1),
        closed=True))
    w = tr.find_equator_witness(eq, 5.0, trials=64, seed=0)
    normal = np.cross(w.plane[0], w.plane[1])
    assert abs(abs(normal[2]) - 1.0) < 1e-6  # the equator plane itself
    assert abs(w.achieved - 12 * math.pi) < 0.1
    assert w.achieved >= (1 / 20) * 12 * math.pi


def test_equator_witness_precondition():
    t = np.linspace(0, 1, 3001)
    phi = 6 * math.pi * t
    s = tr.SphericalCurve(tr.Curve(
        t, np.stack([np.cos(phi), np.sin(phi), np.zeros_like(phi)], axis=1),
        closed=True))
    with pytest.raises(tr.PreconditionLength):
        tr.find_equator_witness(s, 5.0)


def test_equator_witness_back_and_forth_arc():
    t = np.linspace(0, 1, 8001)
    half = 20 * math.pi
    ang = np.where(t <= 0.5, 2 * half * t, half - 2 * half * (t - 0.5))
    arc = tr.SphericalCurve(tr.Curve(
        t, np.stack([np.cos(ang), np.sin(ang), np.zeros_like(ang)], axis=1)))
    w = tr.find_equator_witness(arc, 5.0, trials=64, seed=0)
    assert w.v_proj_1 * w.v_proj_2 < 0
    assert w.achieved >= w.threshold - 1e-9


def zigzag_curve(round_trips=100, n=8001):
    t = np.linspace(0, 1, n)
    saw = (t * 2 * round_trips) % 2.0
    x = np.where(saw <= 1.0, -1.0 + 2 * saw, 3.0 - 2 * saw)
    return tr.Curve(t, np.stack([x, np.zeros_like(t), np.zeros_like(t)],
                                axis=1))


def test_euclidean_witness_zigzag():
    zig = zigzag_curve()
    w = tr.find_euclidean_witness(zig, 9.0, trials=50, seed=0)
    assert abs(abs(w.plane[0][0]) - 1.0) < 1e-9  # the x direction
    assert w.achieved >= (1 / 36) * w.curve_length - 1.0
    assert w.v_proj_1 * w.v_proj_2 < 0


def test_euclidean_witness_short_curve():
    c = tr.Curve([0, 1], [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    with pytest.raises(tr.PreconditionLength):
        tr.find_euclidean_witness(c, 9.0)


def test_euclidean_witness_planar_spiral():
    t = np.linspace(0, 1, 12001)
    ang = 200 * math.pi * t
    r = 1.0 - 0.5 * t
    c = tr.Curve(t, np.stack([r * np.cos(ang), r * np.sin(ang),
                              np.zeros_like(t)], axis=1))
    w = tr.find_euclidean_witness(c, 9.0, trials=200, seed=0)
    assert w.achieved >= w.threshold - 1e-9


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=10, deadline=None)
def test_witness_invariants_hold_for_any_seed(seed):
    t = np.linspace(0, 1, 2001)
    phi = 12 * math.pi * t
    eq = tr.SphericalCurve(tr.Curve(
        t, np.stack([np.cos(phi), np.sin(phi), np.zeros_like(phi)], axis=1),
        closed=True))
    w = tr.find_equator_witness(eq, 4.5, trials=8, seed=seed)
    assert w.v_proj_1 * w.v_proj_2 < 0
    assert w.achieved >= w.threshold - 1e-9
    assert w.window[0] < w.tau1 < w.tau2 < w.window[1]
