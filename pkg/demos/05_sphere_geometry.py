"""Spherical integral geometry: Monte-Carlo length and oscillation
witnesses.

The Crofton identity reads length = pi * E[#crossings with a uniformly
random great subsphere]; sampling the subspheres by Haar rotations gives
a length estimator with a standard-error bar.  The witness searches make
the companion compactness fact constructive: a curve confined to a
sphere (or ball) whose length exceeds a dimensional multiple of the
radius must revisit some longitude (or line coordinate) with opposite
tangential velocities of size about length/time.
"""

import math

import numpy as np

import trajrot as tr

print("== Crofton length estimates on the unit sphere ==")
t = np.linspace(0, 1, 1001)
th = 2 * math.pi * t
great = tr.SphericalCurve(tr.Curve(
    t, np.stack([np.cos(th), np.sin(th), np.zeros_like(th)], axis=1),
    closed=True))
est = tr.crofton_length_estimate(great, m=10_000, seed=0)
print(f"  great circle: {est.value:.6f} +- {est.stderr:.1e} "
      f"(true 2*pi = {2 * math.pi:.6f})")

half_th = math.pi * t
half = tr.SphericalCurve(tr.Curve(
    t, np.stack([np.cos(half_th), np.sin(half_th), np.zeros_like(t)],
                axis=1)))
est2 = tr.crofton_length_estimate(half, m=10_000, seed=0)
print(f"  half circle:  {est2.value:.6f} +- {est2.stderr:.1e} "
      f"(true pi = {math.pi:.6f})")

print()
print("== dimensional constants ==")
for n in (2, 3, 4):
    c = tr.crofton_constants(n)
    print(f"  n={n}: c_n={c.c_n:.6f}  V_n={c.V_n:.6f}  C_n={c.C_n:.6f}")

print()
print("== witness on a circle: a long curve must double back fast ==")
loop_t = np.linspace(0, 1, 4001)
phi = 10 * math.pi * loop_t
loop = tr.Curve(loop_t, np.stack([np.cos(phi), np.sin(phi)], axis=1),
                closed=True)
w = tr.find_circle_witness(loop, 4.5)
print(f"  uniform 5-turn loop: {w.relation} pair at t=({w.tau1:.4f}, "
      f"{w.tau2:.4f}), projected speeds ({w.v_proj_1:+.2f}, "
      f"{w.v_proj_2:+.2f}), required {w.threshold:.2f}")

print()
print("== witness on the sphere via longitude projections ==")
t6 = np.linspace(0, 1, 6001)
ph6 = 12 * math.pi * t6
six_loops = tr.SphericalCurve(tr.Curve(
    t6, np.stack([np.cos(ph6), np.sin(ph6), np.zeros_like(ph6)], axis=1),
    closed=True))
we = tr.find_equator_witness(six_loops, 5.0, trials=64, seed=0)
normal = np.cross(we.plane[0], we.plane[1])
print(f"  6-loop equator curve: witness plane normal {normal.round(6)}, "
      f"speeds ({we.v_proj_1:+.2f}, {we.v_proj_2:+.2f})")

print()
print("== straight-line witness inside a ball ==")
tz = np.linspace(0, 1, 8001)
saw = (tz * 200) % 2.0
xpos = np.where(saw <= 1.0, -1.0 + 2 * saw, 3.0 - 2 * saw)
zig = tr.Curve(tz, np.stack([xpos, np.zeros_like(tz), np.zeros_like(tz)],
                            axis=1))
wz = tr.find_euclidean_witness(zig, 9.0, trials=50, seed=0)
print(f"  100 round trips on a segment: line direction "
      f"{wz.plane[0].round(6)}, speeds ({wz.v_proj_1:+.0f}, "
      f"{wz.v_proj_2:+.0f}), required {wz.threshold:.1f}")
