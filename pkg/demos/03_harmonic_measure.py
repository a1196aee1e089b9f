"""Harmonic measure: closed forms, level sets, walk-on-spheres and strong Markov."""

import math

from angleset import (
    BoundarySet,
    ModelDomain,
    WalkRegion,
    hm_disk_arc,
    hm_halfplane_interval,
    hm_monte_carlo,
    hm_sector_side,
    level_set_arc,
    strong_markov_residual,
)

PI = math.pi
upper = BoundarySet.disk_arc(0, PI)

print("omega(i, [-1, 1], upper half-plane)  =", hm_halfplane_interval(1j, -1, 1))
print("omega(e^{i pi/4}, right side, H)     =", hm_sector_side(complex(1, 1) / math.sqrt(2), -PI / 2, PI / 2))
print("omega(0.3+0.4i, upper semicircle, D) =", hm_disk_arc(0.3 + 0.4j, upper))

est = hm_monte_carlo(ModelDomain.disk(), upper, 0.3 + 0.4j, walks=100_000, seed=1)
print(f"walk-on-spheres estimate             = {est.mean:.4f} +- {est.stderr:.4f}")

for k in (0.25, 0.5, 0.75):
    lv = level_set_arc(upper, k)
    shape = "diameter" if lv.is_diameter else f"circle centre {lv.center:.4f}, radius {lv.radius:.4f}"
    print(f"level {k}: {shape}, meets the circle at {lv.meeting_angle / PI:.4f} pi")

r = strong_markov_residual(WalkRegion.upper_half_disk(), ModelDomain.disk(), upper, 0.5j,
                           walks=100_000, return_details=True)
print(f"\nstrong Markov, half-disk inside the disk at i/2:")
print(f"  omega_D = {r.lhs:.4f}; omega_half = {r.inner_term:.4f}; integral = {r.integral_term:.4f}")
print(f"  residual {r.residual:.1e}, monotone: {r.monotone}")
