"""The ten acceptance criteria, each printing one PASS/FAIL line."""

import math
import time

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from angleset import (
    ASetSpec,
    BoundarySet,
    Geodesic,
    HyperbolicSector,
    ModelDomain,
    SemigroupModel,
    WalkRegion,
    amplitude_R,
    aset_contains,
    classify_convergence,
    classify_semigroup,
    corollary_4_1_predict,
    distance_to_geodesic,
    exact_measure,
    exhausts,
    hm_disk_arc,
    hm_monte_carlo,
    hyperbolic_distance_disk,
    hyperbolic_distance_halfplane,
    level_set_arc,
    sector_contains,
    slope_cluster,
    strong_markov_residual,
    trajectory,
)

PI = math.pi
n = np.arange(1, 5001)
H = ModelDomain.half_plane()
RAY = Geodesic.ray(H, 1.0)
SPIRAL = n * np.exp(1j * PI / 6 * np.sin(n))


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def test_01_amplitude_closed_form(report):
    t0 = time.perf_counter()
    theta = np.linspace(-PI / 2 + 0.01, PI / 2 - 0.01, 99)
    err = max(abs(amplitude_R(t) - hyperbolic_distance_halfplane(1, np.exp(1j * t))) for t in theta)
    dt = time.perf_counter() - t0
    report(1, err < 1e-10 and dt < 1, f"max error {err:.2e}, {dt:.2f}s")


def test_02_sector_closed_form_vs_brute_force(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    m = 10_000
    z = np.exp(rng.uniform(-4, 4, m)) * np.exp(1j * rng.uniform(-PI / 2, PI / 2, m) * 0.999)
    R = amplitude_R(PI / 4)
    closed = sector_contains(HyperbolicSector(RAY, R), z)
    # brute force: minimise k_H(z, rho) over a dense log grid of rho in [1, e^20]
    rho = np.exp(np.linspace(0, 20, 4001))
    d = np.empty(m)
    for i in range(0, m, 500):
        blk = z[i:i + 500, None]
        d[i:i + 500] = hyperbolic_distance_halfplane(blk, rho[None, :] + 0j).min(axis=1)
    # grid error is O(1e-5); refine the points that could flip with scipy's bounded Brent
    for i in np.flatnonzero(np.abs(d - R) < 1e-3):
        res = minimize_scalar(lambda x: hyperbolic_distance_halfplane(z[i], math.exp(x) + 0j),
                              bounds=(0, 20), method="bounded", options={"xatol": 1e-12})
        d[i] = min(d[i], res.fun)
    disagree = closed != (d < R)
    near = np.abs(d - R) < 1e-6
    rate = 1 - disagree.mean()
    dt = time.perf_counter() - t0
    ok = rate >= 0.999 and not np.any(disagree & ~near) and dt < 30
    report(2, ok, f"agreement {rate:.5f}, {int(disagree.sum())} disagreements, {dt:.1f}s")


def test_03_harmonic_measure_exactness(report):
    t0 = time.perf_counter()
    cases = [
        ("half-plane interval", ModelDomain.rotated_half_plane(0.0),
         BoundarySet.real_interval(-1, 2), 0.5 + 1j),
        ("sector side", ModelDomain.sector(PI / 3, PI / 2), BoundarySet.ray(PI / 2),
         np.exp(0.2j)),
        ("disk arc", ModelDomain.disk(), BoundarySet.disk_arc(0, PI), 0.3 + 0.4j),
    ]
    lines, ok = [], True
    for i, (name, dom, target, z) in enumerate(cases):
        exact = exact_measure(dom, target, z)
        est = hm_monte_carlo(dom, target, z, walks=100_000, seed=100 + i)
        dev = abs(est.mean - exact) / est.stderr
        ok &= dev < 4
        lines.append(f"{name} {dev:.2f} se")
    half = hm_monte_carlo(H, BoundarySet.vertical_side(1), 2.0, walks=100_000, seed=7)
    ok &= abs(half.mean - 0.5) <= 0.01 and exact_measure(H, BoundarySet.vertical_side(1), 2.0) == 0.5
    dt = time.perf_counter() - t0
    ok &= dt < 60
    report(3, ok, f"{'; '.join(lines)}; omega(2)={half.mean:.4f}; {dt:.1f}s")


def test_04_strong_markov(report):
    t0 = time.perf_counter()
    res = strong_markov_residual(WalkRegion.upper_half_disk(), ModelDomain.disk(),
                                 BoundarySet.disk_arc(0, PI), 0.5j, walks=100_000, seed=1)
    dt = time.perf_counter() - t0
    report(4, res < 0.01 and dt < 60, f"residual {res:.2e}, {dt:.1f}s")


def test_05_level_sets(report):
    arcs = [BoundarySet.disk_arc(0, PI), BoundarySet.disk_arc(0.5, 2.5), BoundarySet.disk_arc(1, 5.5)]
    err = 0.0
    for arc in arcs:
        for k in (0.25, 0.5, 0.75):
            pts = level_set_arc(arc, k).points(50)
            err = max(err, float(np.max(np.abs(hm_disk_arc(pts, arc) - k))))
    dia = level_set_arc(BoundarySet.disk_arc(0, PI), 0.5)
    ends = sorted(dia.endpoints, key=lambda z: z.real)
    exact_dia = dia.is_diameter and abs(ends[0] + 1) < 1e-15 and abs(ends[1] - 1) < 1e-15
    report(5, err <= 1e-9 and exact_dia, f"max level error {err:.1e}, diameter {exact_dia}")


def test_06_theorem_round_trip(report):
    t0 = time.perf_counter()
    spec = ASetSpec(RAY, PI / 3, 2 * PI / 3)
    ex = exhausts(SPIRAL, spec)
    c = classify_convergence(SPIRAL, H)
    ok = ex.passed and c.kind == "angle_set" and np.allclose(c.interval, [PI / 3, 2 * PI / 3], atol=0.02)
    ray = n + 0j
    ex_r = exhausts(ray, spec)
    c_r = classify_convergence(ray, H)
    ok &= ex_r.status == "fails_filling" and c_r.kind == "by_angle" and abs(c_r.theta - PI / 2) <= 0.02
    dt = time.perf_counter() - t0
    ok &= dt < 120
    report(6, ok, f"spiral {ex.status} {c.kind} [{c.interval[0]:.4f}, {c.interval[1]:.4f}]; "
                  f"ray {ex_r.status} {c_r.kind} {c_r.theta:.4f}; {dt:.1f}s")


def test_07_orthogonal_bridge(report):
    z = n + 1j * np.log(n)
    d = distance_to_geodesic(H, z[-100:], RAY)
    c = classify_convergence(z, H)
    ok = d[-1] < 1e-3 and np.all(np.diff(d) < 0) and c.kind == "by_angle" and abs(c.theta - PI / 2) <= 0.02
    tail = (n + 0j)[len(n) // 2:]
    pairs = [(PI / 2 - a, PI / 2 + b) for a in (0.01, 0.05, 0.2, 0.6, 1.2) for b in (0.01, 0.1, 0.5, 1.4)]
    contained = all(np.all(aset_contains(ASetSpec(RAY, t1, t2), tail)) for t1, t2 in pairs)
    report(7, ok and contained,
           f"k(z_n, gamma) -> {d[-1]:.1e}, {c.kind} {c.theta:.4f}; ray in {len(pairs)} straddling A-sets: {contained}")


def test_08_slope_law(report):
    t0 = time.perf_counter()
    worst, spread, ok = 0.0, 0.0, True
    for a1, a2 in [(PI / 2, PI / 2), (PI / 2, PI), (2 * PI / 3, 2 * PI / 3), (2 * PI / 3, PI)]:
        model = SemigroupModel.sector(a1, a2)
        pred = corollary_4_1_predict(a1, a2)
        c0 = slope_cluster(model, 0j, t_max=1e6)
        c1 = slope_cluster(model, 0.3 + 0.2j, t_max=1e6)
        err = max(abs(c0.lo - pred), abs(c0.hi - pred), abs(c1.lo - pred), abs(c1.hi - pred))
        worst = max(worst, err)
        spread = max(spread, abs(c0.mid - c1.mid))
    ok = worst < 0.02 and spread < 0.02
    dt = time.perf_counter() - t0
    ok &= dt < 120
    report(8, ok, f"max slope error {worst:.2e}, start spread {spread:.2e}, {dt:.1f}s")


def test_09_semigroup_types(report):
    kinds = [classify_semigroup(m).kind for m in
             (SemigroupModel.strip(), SemigroupModel.zero_step(), SemigroupModel.positive_step())]
    ok = kinds == ["hyperbolic", "parabolic_zero_step", "parabolic_positive_step"]
    rng = np.random.default_rng(9)
    worst = 0.0
    for model in (SemigroupModel.strip(), SemigroupModel.zero_step(), SemigroupModel.positive_step(),
                  SemigroupModel.sector(PI / 2, PI)):
        for _ in range(50):
            z = 0.9 * math.sqrt(rng.random()) * np.exp(2j * PI * rng.random())
            s, t = rng.uniform(0, 4, 2)
            worst = max(worst, hyperbolic_distance_disk(trajectory(model, trajectory(model, z, t), s),
                                                        trajectory(model, z, s + t)))
    report(9, ok and worst < 1e-9, f"{kinds}; semigroup law residual {worst:.1e}")


def test_10_nested_domain_invariance(report):
    H1 = ModelDomain.half_plane(1)
    traces = {"spiral": 1 + SPIRAL, "ray": 1 + n * np.exp(0.5j), "parabola": 1 + n + 1j * n ** 0.7}
    gaps, ok = [], True
    for name, z in traces.items():
        a, b = classify_convergence(z, H1), classify_convergence(z, H)
        gap = float(np.max(np.abs(np.subtract(a.interval, b.interval))))
        ok &= a.kind == b.kind and gap <= 0.02
        gaps.append(f"{name} {a.kind} {gap:.1e}")
    report(10, ok, "; ".join(gaps))
