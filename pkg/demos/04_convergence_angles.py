"""Classifying how a sequence approaches the boundary.

A sequence in a domain is pulled back to the disk by the inverse Riemann map;
the tail of theta_n = pi/2 - arg(1 - conj(sigma) w_n) decides between
convergence by angle, an angle-set, tangential approach or a scattered cluster.
"""

import math

import numpy as np

from angleset import (
    ASetSpec,
    BoundarySet,
    Geodesic,
    ModelDomain,
    angle_via_harmonic_measure,
    classify_convergence,
    radius_for_offset,
    theorem_1_1_check,
)

PI = math.pi
n = np.arange(1, 5001)
H, H1 = ModelDomain.half_plane(), ModelDomain.half_plane(1)
spiral = n * np.exp(1j * PI / 6 * np.sin(n))

for name, z, dom in [("radial in D", 1 - 1 / n, None),
                     ("spiral in H", spiral, H),
                     ("ray at 0.5 rad in H", n * np.exp(0.5j), H),
                     ("parabola n + i n^2 in H", n + 1j * n ** 2.0, H),
                     ("two directions in H", n * np.exp(1j * np.where(n % 2, -0.5, 0.5)), H)]:
    c = classify_convergence(z, dom)
    print(f"{name:26s} {c.kind:21s} interval [{c.interval[0]:.4f}, {c.interval[1]:.4f}]")

print("\nharmonic-measure angle of the radial sequence:",
      angle_via_harmonic_measure(1 - 1 / n, BoundarySet.disk_arc(0, PI)).mid)

print("\nthe same trace seen from H+1 and from H")
for dom in (H1, H):
    c = classify_convergence(1 + spiral, dom)
    print(f"  {dom.describe():14s} {c.kind} [{c.interval[0]:.4f}, {c.interval[1]:.4f}]")

# the geodesic must start inside the smaller domain, so it leaves from 2
spec = ASetSpec(Geodesic.ray(H, 2.0), PI / 3, 2 * PI / 3)
for label, delta, R, z in [("H itself", H, 2.0, spiral),
                           ("H+1, horodisk offset 2", H1, radius_for_offset(H, 2.0), 1 + spiral),
                           ("H+1, horodisk offset 0.5", H1, radius_for_offset(H, 0.5), 1 + spiral)]:
    rep = theorem_1_1_check(delta, H, R, spec, z)
    print(f"\ntheorem check, {label}: (i) {rep.cond_i}, (ii) {rep.cond_ii}, (iii) {rep.cond_iii}, "
          f"agree {rep.agree}")
    if not rep.cond_i:
        print("   sandwich witness:", rep.sandwich.witness)
