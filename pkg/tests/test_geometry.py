import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from angleset import (
    BranchError,
    ConformalChain,
    DomainError,
    apply_chain,
    cayley,
    cayley_chain,
    hyperbolic_distance_disk,
    hyperbolic_distance_halfplane,
    moebius,
    power,
    rotation,
    sector_straightening,
)
from angleset.geometry import unwrap_angle_diff

PI = math.pi

# mpmath (30 digits): 1/2 log 3 and arctanh(tan(pi/6))
K_DISK_0_HALF = 0.5493061443340548
R_PI_3 = 0.6584789484624084

disk_pts = st.builds(lambda r, a: r * complex(math.cos(a), math.sin(a)),
                     st.floats(0, 0.995), st.floats(-PI, PI))
hp_pts = st.builds(complex, st.floats(1e-3, 50), st.floats(-50, 50))


def test_disk_distance_values():
    assert hyperbolic_distance_disk(0.3 + 0.2j, 0.3 + 0.2j) == 0
    assert hyperbolic_distance_disk(0, 0.5) == pytest.approx(K_DISK_0_HALF, abs=1e-15)
    assert hyperbolic_distance_disk(0.3j, -0.3j) == pytest.approx(
        hyperbolic_distance_disk(0.3, -0.3), abs=1e-15)


def test_halfplane_distance_values():
    assert hyperbolic_distance_halfplane(1, 1) == 0
    w = np.exp(1j * PI / 3)
    assert hyperbolic_distance_halfplane(1, w) == pytest.approx(R_PI_3, abs=1e-14)
    assert hyperbolic_distance_halfplane(1 + 5j, w + 5j) == pytest.approx(R_PI_3, abs=1e-14)


def test_distances_reject_outside_points():
    with pytest.raises(DomainError):
        hyperbolic_distance_disk(0, 1.0)
    with pytest.raises(DomainError):
        hyperbolic_distance_halfplane(1, -0.1 + 1j)


def test_distance_near_boundary_is_finite():
    d = hyperbolic_distance_disk(0, 1 - 1e-15)
    assert math.isfinite(d) and d > 17


@settings(max_examples=200, deadline=None)
@given(disk_pts, disk_pts)
def test_cayley_invariance(z, w):
    inv = cayley_chain().inverse()
    assert hyperbolic_distance_disk(z, w) == pytest.approx(
        hyperbolic_distance_halfplane(inv(z), inv(w)), abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(hp_pts, hp_pts, st.floats(0.01, 100), st.floats(-100, 100))
def test_halfplane_scaling_and_vertical_translation(z, w, r, y):
    a = hyperbolic_distance_halfplane(z, w)
    b = hyperbolic_distance_halfplane(r * z + 1j * y, r * w + 1j * y)
    assert b == pytest.approx(a, abs=1e-9, rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(disk_pts, disk_pts, disk_pts)
def test_triangle_inequality_and_symmetry(a, b, c):
    d = hyperbolic_distance_disk
    assert d(a, b) == pytest.approx(d(b, a), abs=1e-12)
    assert d(a, c) <= d(a, b) + d(b, c) + 1e-9


def test_cayley_chain_examples():
    c = cayley_chain()
    assert apply_chain(c, 1.0) == 0
    assert apply_chain(c, 0.0, "inverse") == 1


def test_straightening_fixes_positive_axis():
    chain = sector_straightening(PI / 2, PI)
    assert apply_chain(chain, 1.0) == pytest.approx(1.0, abs=1e-15)
    x = np.array([0.1, 2.0, 30.0])
    np.testing.assert_allclose(chain(x), x ** (2 / 3), rtol=1e-13)


def test_straightening_first_two_steps():
    # g2(g1(1)) for (pi/2, pi): rotate by -pi/4, then raise to 2/3
    chain = sector_straightening(PI / 2, PI)
    partial = ConformalChain(chain.atoms[:2])
    assert partial(1.0) == pytest.approx(np.exp(-1j * PI / 6), abs=1e-15)


def test_straightening_image_and_exponents():
    chain = sector_straightening(PI / 2, PI)
    # the image is U_theta with theta = pi * a1 / (a1 + a2) = pi / 3
    assert chain(np.exp(-1j * (PI / 2 - 1e-9))) == pytest.approx(np.exp(-1j * PI / 3), abs=1e-8)
    assert sector_straightening(PI, PI).atoms[1].params[0] == 0.5
    sym = sector_straightening(PI / 2, PI / 2)
    z = np.array([1 + 1j, 2 - 3j, 0.1 + 0.01j])
    np.testing.assert_allclose(sym(z), z, atol=1e-14)


def test_straightening_round_trip():
    rng = np.random.default_rng(0)
    chain = sector_straightening(PI / 2, PI)
    ang = rng.uniform(-PI / 2 + 1e-6, PI - 1e-6, 100)
    z = rng.uniform(0.01, 10, 100) * np.exp(1j * ang)
    back = apply_chain(chain, apply_chain(chain, z), "inverse")
    assert np.max(np.abs(back - z) / np.abs(z)) < 1e-12


def test_branch_error():
    p = power(0.5, PI / 2)
    with pytest.raises(BranchError):
        p(-1 + 0.1j)


def test_chain_domain_error():
    with pytest.raises(DomainError):
        apply_chain(cayley_chain(), -1.0)


def test_atom_inverses():
    z = np.array([0.3 + 0.1j, 2 - 1j])
    for atom in (rotation(0.7), moebius(2, 1j, 0.5, 3), cayley(), power(1.5, 0.9)):
        np.testing.assert_allclose(atom.inverse()(atom(z, check=False), check=False), z, atol=1e-12)


def test_simplified_fuses_cayley_pairs():
    c = ConformalChain((cayley(), cayley().inverse())).simplified()
    assert len(c.atoms) == 1
    assert c(1e8 + 3j) == 1e8 + 3j


def test_unwrapped_difference():
    assert unwrap_angle_diff(PI - 0.1, -PI + 0.1) == pytest.approx(-0.2)
