import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from angleset import (
    BoundaryEnd,
    DomainError,
    Horodisk,
    ModelDomain,
    SamplingError,
    contains,
    domain_from_dict,
    halfplane_offset,
    horodisk_contains,
    radius_for_offset,
    sandwich_check,
)

PI = math.pi

CATALOG = [
    ModelDomain.disk(),
    ModelDomain.half_plane(),
    ModelDomain.half_plane(1 + 0.5j),
    ModelDomain.rotated_half_plane(PI / 3, 0.3),
    ModelDomain.sector(PI / 2, PI),
    ModelDomain.sector(0, PI / 2),
    ModelDomain.sector(PI, PI),
    ModelDomain.strip(),
    ModelDomain.strip(2.0, 1j),
]


def test_contains_examples():
    assert contains(ModelDomain.disk(), 0)
    assert contains(ModelDomain.sector(PI / 2, PI), np.exp(-1j * PI / 4))
    assert not contains(ModelDomain.half_plane(1), 0.5)
    assert not contains(ModelDomain.sector(PI / 2, PI), -2.0)
    assert contains(ModelDomain.strip(), 100 + 1.5j)


@pytest.mark.parametrize("dom", CATALOG, ids=lambda d: d.describe())
def test_riemann_round_trip(dom):
    rng = np.random.default_rng(1)
    w = 0.98 * np.sqrt(rng.random(300)) * np.exp(2j * PI * rng.random(300))
    z = dom.from_disk(w)
    assert np.all(dom.contains(z))
    np.testing.assert_allclose(dom.to_disk(z), w, atol=1e-10)


@pytest.mark.parametrize("dom", CATALOG[1:], ids=lambda d: d.describe())
def test_catalog_marked_end_is_one(dom):
    assert dom.sigma == pytest.approx(1.0, abs=1e-12)


def test_finite_end_of_a_sector_vertex():
    dom = ModelDomain.sector(PI / 2, PI / 2, marked_end=BoundaryEnd.at_point(0, PI))
    assert dom.sigma == pytest.approx(-1.0, abs=1e-8)


def test_domain_descriptor_round_trip():
    for dom in CATALOG:
        again = domain_from_dict(dom.to_dict())
        assert again == dom


def test_outside_point_is_rejected():
    with pytest.raises(DomainError):
        ModelDomain.half_plane().to_disk(-1.0)


def test_disk_horodisk_examples():
    D = ModelDomain.disk()
    assert horodisk_contains(Horodisk(D, 2.0), 0)
    assert not horodisk_contains(Horodisk(D, 0.5), 0)
    with pytest.raises(DomainError):
        horodisk_contains(Horodisk(D, 1.0), 1.5)


def test_halfplane_horodisk_offset():
    H = ModelDomain.half_plane()
    # oracle: the horocycle |1 - w|^2 = R (1 - |w|^2) pulls back to Re z = 1/R
    for R in (0.1, 0.5, 1.0, 3.0, 40.0):
        assert halfplane_offset(H, R) == pytest.approx(1 / R, rel=1e-10)
    R = radius_for_offset(H, 1.0)
    assert R == pytest.approx(1.0, rel=1e-10)
    h = Horodisk(H, R)
    assert horodisk_contains(h, 2.0)
    assert not horodisk_contains(h, 0.9 + 5j)


def test_offset_of_rotated_half_plane_is_along_the_normal():
    U = ModelDomain.rotated_half_plane(PI / 3)
    assert halfplane_offset(U, 2.0) == pytest.approx(0.5, rel=1e-10)
    with pytest.raises(ValueError):
        halfplane_offset(ModelDomain.sector(PI / 2, PI), 1.0)


def test_disk_pullback_agrees_with_direct_formula():
    D = ModelDomain.disk()
    h = Horodisk(D, 0.7)
    x, y = np.meshgrid(np.linspace(-0.99, 0.99, 41), np.linspace(-0.99, 0.99, 41))
    z = (x + 1j * y).ravel()
    z = z[np.abs(z) < 1]
    direct = np.abs(1 - z) ** 2 < 0.7 * (1 - np.abs(z) ** 2)
    np.testing.assert_array_equal(horodisk_contains(h, z), direct)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 5), st.floats(1.01, 4))
def test_horodisk_monotone_in_radius(R, factor):
    H = ModelDomain.half_plane()
    rng = np.random.default_rng(0)
    small, big = Horodisk(H, R), Horodisk(H, R * factor)
    c, rho = small.disk_center_radius()
    w = c + rho * np.sqrt(rng.random(200)) * np.exp(2j * PI * rng.random(200))
    z = H.from_disk(w[np.abs(w) < 1], check=False)
    z = z[np.isfinite(z) & (z.real > 0)]
    inside = horodisk_contains(small, z)
    assert np.all(horodisk_contains(big, z[inside]))


def test_distance_monotone_under_inclusion():
    rng = np.random.default_rng(3)
    inner, outer = ModelDomain.half_plane(1), ModelDomain.half_plane()
    z = 1 + rng.uniform(0.01, 5, 500) + 1j * rng.uniform(-5, 5, 500)
    w = 1 + rng.uniform(0.01, 5, 500) + 1j * rng.uniform(-5, 5, 500)
    assert np.all(outer.hyperbolic_distance(z, w) <= inner.hyperbolic_distance(z, w) + 1e-10)


def test_sandwich_examples():
    H, H1 = ModelDomain.half_plane(), ModelDomain.half_plane(1)
    assert sandwich_check(H, H, R=3.0).holds
    assert sandwich_check(H1, H, R=radius_for_offset(H, 2.0)).status == "holds"
    bad = sandwich_check(H1, H, R=radius_for_offset(H, 0.5))
    assert bad.status == "fails_inner"
    assert 0.5 < bad.witness.real < 1


def test_sandwich_fails_outer():
    v = sandwich_check(ModelDomain.half_plane(-1), ModelDomain.half_plane(), R=0.5)
    assert v.status == "fails_outer"
    assert -1 < v.witness.real <= 0


def test_sandwich_is_shard_independent():
    H, H1 = ModelDomain.half_plane(), ModelDomain.half_plane(1)
    a = sandwich_check(H1, H, R=1.5, samples=30_000, seed=4)
    b = sandwich_check(H1, H, R=1.5, samples=30_000, seed=4, n_jobs=3)
    assert a == b


def test_sandwich_degenerate_input():
    H = ModelDomain.half_plane()
    with pytest.raises(SamplingError):
        sandwich_check(H, H, R=1.0, samples=1)
    with pytest.raises(ValueError):
        sandwich_check(H, H, R=0.0)
