"""Hyperbolic sectors, half-components and the six A-set cases.

In the right half-plane with the geodesic ray [1, inf), the sector of amplitude
R(theta) is the Euclidean cone |arg z| < theta beyond 1 plus a hyperbolic disk
about 1.  A-sets combine two such sectors with a choice of side.
"""

import math

import numpy as np

from angleset import (
    ASetSpec,
    Geodesic,
    HyperbolicSector,
    ModelDomain,
    amplitude_R,
    aset_case,
    aset_contains,
    distance_to_geodesic,
    exhausts,
    half_component,
    sector_contains,
)

PI = math.pi
H = ModelDomain.half_plane()
ray = Geodesic.ray(H, 1.0)

print("R(pi/3) =", amplitude_R(PI / 3))
S = HyperbolicSector(ray, amplitude_R(PI / 4))
for z in (3 * np.exp(1j * PI / 6), 3 * np.exp(1j * PI / 3), 0.5 * np.exp(1j * PI / 6)):
    print(f"z = {z:.3f}: k(z, gamma) = {distance_to_geodesic(H, z, ray):.6f}, in sector: {sector_contains(S, z)}")

line = Geodesic.line(ModelDomain.disk(), -1, 1)
print("side of -i/2 w.r.t. the diameter towards 1:", half_component(line, -0.5j))

print("\nA-set cases")
for t1, t2 in [(PI / 6, PI / 3), (2 * PI / 3, 5 * PI / 6), (PI / 4, 3 * PI / 4),
               (PI / 4, PI / 2), (PI / 2, 2 * PI / 3), (PI / 3, 3 * PI / 4)]:
    print(f"  [{t1:.3f}, {t2:.3f}] -> case ({aset_case(t1, t2)})")
spec = ASetSpec(ray, PI / 6, PI / 3)
print("2e^{-i pi/4} in A(pi/6, pi/3):", aset_contains(spec, 2 * np.exp(-1j * PI / 4)))
print("2e^{+i pi/4} in A(pi/6, pi/3):", aset_contains(spec, 2 * np.exp(1j * PI / 4)))

print("\nexhaustion of A(pi/3, 2pi/3)")
n = np.arange(1, 5001)
spec = ASetSpec(ray, PI / 3, 2 * PI / 3)
for name, z in [("spiral n e^{i(pi/6) sin n}", n * np.exp(1j * PI / 6 * np.sin(n))),
                ("real ray n", n + 0j),
                ("ray n e^{i pi/4}", n * np.exp(1j * PI / 4))]:
    v = exhausts(z, spec)
    print(f"  {name:28s} {v.status}", v.omega or v.theta or "")
