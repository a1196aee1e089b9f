"""Continuous semigroups in Koenigs form and their slopes.

phi_t(z) = h^-1(h(z) + t).  For a planar domain sandwiched between sector
shapes with opening angles alpha1 below and alpha2 above the real axis the
trajectories approach the Denjoy-Wolff point with slope
(pi/2)(alpha2 - alpha1)/(alpha1 + alpha2).
"""

import math

from angleset import (
    SemigroupModel,
    classify_semigroup,
    corollary_4_1_predict,
    proposition_4_1_scenario,
    slope_cluster,
    trajectory,
)

PI = math.pi

for m in (SemigroupModel.strip(), SemigroupModel.zero_step(), SemigroupModel.positive_step()):
    t = classify_semigroup(m)
    print(f"{m.name:14s} {t.kind:24s} final step {t.final_step}")

m = SemigroupModel.zero_step()
print("\nphi_1(0) for h(z) = 2z/(1-z):", trajectory(m, 0.0, 1.0))

print("\nslopes at t_max = 1e6")
for a1, a2 in [(PI / 2, PI / 2), (PI / 2, PI), (PI, PI / 2), (2 * PI / 3, PI)]:
    c = slope_cluster(SemigroupModel.sector(a1, a2))
    print(f"  alpha = ({a1:.3f}, {a2:.3f}): measured [{c.lo:+.4f}, {c.hi:+.4f}], "
          f"predicted {corollary_4_1_predict(a1, a2):+.4f}")

# outside the established range: reported, never asserted
c = slope_cluster(SemigroupModel.sector(PI / 3, PI / 2))
print(f"  exploratory (pi/3, pi/2): measured {c.mid:+.4f}, "
      f"formula {corollary_4_1_predict(PI / 3, PI / 2, strict=False):+.4f}")

print("\nthe positive reals inside a tilted half-plane")
for theta in (PI / 2, PI / 3):
    rep = proposition_4_1_scenario(theta, 1.0)
    print(f"  theta = {theta:.4f}: {rep.kind} at {rep.measured:.4f}")
