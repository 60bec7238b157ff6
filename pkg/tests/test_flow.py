import numpy as np
import pytest
import scipy.linalg

import trajrot as tr

from conftest import SINK_MATRIX, sink_closed_form


def test_constant_field_endpoint():
    c = tr.integrate_trajectory(tr.constant([1.0, 0.0, 0.0]), np.zeros(3),
                                0.0, 1.0, tr.IntegratorConfig())
    assert np.linalg.norm(c.x[-1] - [1.0, 0.0, 0.0]) < 1e-12
    assert np.all(np.diff(c.t) > 0)


def test_sink_endpoint_matches_closed_form():
    cfg = tr.IntegratorConfig(rel_tol=1e-11, abs_tol=1e-13, chord_tol=1e-4)
    c = tr.integrate_trajectory(tr.linear(SINK_MATRIX),
                                np.array([1.0, 1.0, 0.0]), 0.0, 3.0, cfg)
    want = sink_closed_form([1.0, 1.0, 0.0], 3.0)
    assert np.linalg.norm(c.x[-1] - want) < 1e-8


def test_sink_endpoint_matches_expm():
    cfg = tr.IntegratorConfig(rel_tol=1e-11, abs_tol=1e-13, chord_tol=1e-4)
    x0 = np.array([0.3, -1.0, 0.7])
    c = tr.integrate_trajectory(tr.linear(SINK_MATRIX), x0, 0.0, 2.0, cfg)
    want = scipy.linalg.expm(2.0 * SINK_MATRIX) @ x0
    assert np.linalg.norm(c.x[-1] - want) < 1e-9


def test_spiral_radius_decreasing():
    cfg = tr.IntegratorConfig(rel_tol=1e-10, abs_tol=1e-12, chord_tol=1e-5)
    c = tr.integrate_trajectory(tr.spiral2d(), np.array([0.5, 0.0]),
                                0.0, 10.0, cfg)
    r2 = np.sum(c.x * c.x, axis=1)
    assert np.all(np.diff(r2) < 0)
    assert r2[-1] > 0


def test_validation_and_errors():
    with pytest.raises(ValueError, match="t1 must exceed t0"):
        tr.integrate_trajectory(tr.constant([1.0, 0.0]), np.zeros(2), 1.0, 0.0)
    with pytest.raises(ValueError):
        tr.IntegratorConfig(rel_tol=2.0)
    with pytest.raises(tr.StepUnderflow):
        tr.integrate_trajectory(tr.linear(-1e16 * np.eye(2)),
                                np.array([1.0, 1.0]), 0.0, 1.0)
    with pytest.raises(tr.SampleBudgetExceeded):
        cfg = tr.IntegratorConfig(max_samples=20, chord_tol=1e-9)
        tr.integrate_trajectory(tr.linear(SINK_MATRIX),
                                np.array([1.0, 1.0, 0.0]), 0.0, 3.0, cfg)


def test_tolerance_halving_consistency():
    f = tr.linear(SINK_MATRIX)
    x0 = np.array([1.0, 1.0, 0.0])
    coarse_cfg = tr.IntegratorConfig(rel_tol=1e-7, abs_tol=1e-7, chord_tol=0.9)
    fine_cfg = tr.IntegratorConfig(rel_tol=5e-8, abs_tol=5e-8, chord_tol=0.9)
    coarse = tr.integrate_trajectory(f, x0, 0.0, 2.0, coarse_cfg)
    fine = tr.integrate_trajectory(f, x0, 0.0, 2.0, fine_cfg)
    # coarse local error per step is below abs_tol + rel_tol*|y|
    n_steps = coarse.n_samples - 1
    est = n_steps * (coarse_cfg.abs_tol + coarse_cfg.rel_tol)
    assert np.linalg.norm(coarse.x[-1] - fine.x[-1]) < 10 * est


def test_time_reversal():
    f = tr.linear(SINK_MATRIX)
    cfg = tr.IntegratorConfig(rel_tol=1e-10, abs_tol=1e-8, chord_tol=0.9)
    x0 = np.array([1.0, 1.0, 0.0])
    fwd = tr.integrate_trajectory(f, x0, 0.0, 2.0, cfg)
    back = tr.integrate_trajectory(tr.negated(f), fwd.x[-1], 0.0, 2.0, cfg)
    assert np.linalg.norm(back.x[-1] - x0) < 100 * cfg.abs_tol


def test_obs_center_angle_refinement():
    # motion past the origin: every output segment must subtend <= 0.05 rad
    f = tr.constant([1.0, 0.0])
    x0 = np.array([-1.0, 0.01])
    center = np.zeros(2)
    c = tr.integrate_trajectory(f, x0, 0.0, 2.0,
                                tr.IntegratorConfig(chord_tol=0.5),
                                obs_centers=[center])
    from trajrot.curves import subtended_angles
    assert float(np.max(subtended_angles(c.x, center))) <= 0.05 + 1e-12


def test_deterministic_given_config():
    cfg = tr.IntegratorConfig(rel_tol=1e-9, abs_tol=1e-9, chord_tol=1e-4)
    a = tr.integrate_trajectory(tr.spiral2d(), np.array([0.5, 0.0]), 0.0,
                                5.0, cfg)
    b = tr.integrate_trajectory(tr.spiral2d(), np.array([0.5, 0.0]), 0.0,
                                5.0, cfg)
    assert np.array_equal(a.x, b.x) and np.array_equal(a.t, b.t)
