"""Model domains, Riemann maps and the hyperbolic metric.

Every model domain carries a chain of elementary conformal maps from the unit
disk.  Distances are pulled back through that chain, so they agree with the
closed forms on the disk and the half-plane and are invariant under the maps.
"""

import math

from angleset import ModelDomain, hyperbolic_distance_disk, hyperbolic_distance_halfplane

H = ModelDomain.half_plane()
print("k_D(0, 1/2)              =", hyperbolic_distance_disk(0, 0.5))
print("k_H(1, e^{i pi/3})       =", hyperbolic_distance_halfplane(1, complex(math.cos(math.pi / 3), math.sin(math.pi / 3))))

# the same pair of points measured through the Riemann map of H
z, w = 2 + 1j, 0.5 - 3j
print("k_H via closed form      =", hyperbolic_distance_halfplane(z, w))
print("k_H via the disk         =", hyperbolic_distance_disk(H.to_disk(z), H.to_disk(w)))

# domain monotonicity: a smaller domain has a larger metric
H1 = ModelDomain.half_plane(1)
print("k_{H+1}(2, 2+5i) >= k_H  :", H1.hyperbolic_distance(2, 2 + 5j), ">=", H.hyperbolic_distance(2, 2 + 5j))

# a sector {-pi/2 < arg z < pi} and a strip, with their chains
for dom in (ModelDomain.sector(math.pi / 2, math.pi), ModelDomain.strip()):
    print(f"{dom.describe():28s} chain: {[a.kind for a in dom.riemann.atoms]}")
    print("   f(0) =", dom.from_disk(0.0), "  marked end on the circle:", dom.sigma)
