import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from angleset import (
    HypothesisError,
    ModelDomain,
    PreconditionError,
    SemigroupModel,
    classify_semigroup,
    corollary_4_1_predict,
    hyperbolic_distance_disk,
    proposition_4_1_scenario,
    slope_cluster,
    trajectory,
    trajectory_record,
)

PI = math.pi
MODELS = [
    SemigroupModel.strip(),
    SemigroupModel.zero_step(),
    SemigroupModel.positive_step(),
    SemigroupModel.sector(PI / 2, PI),
    SemigroupModel.sector(2 * PI / 3, 2 * PI / 3),
]


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name + str(m.params))
def test_model_normalisation(model):
    assert abs(model.h(0.0)) < 1e-12
    assert model.tau == pytest.approx(1.0, abs=1e-12)
    assert model.starlike_audit()


def test_zero_step_trajectory_closed_form():
    m = SemigroupModel.zero_step()
    np.testing.assert_allclose(m.h(np.array([0.3, 0.2j])), 2 * np.array([0.3, 0.2j]) / (1 - np.array([0.3, 0.2j])), atol=1e-12)
    assert trajectory(m, 0.0, 1.0) == pytest.approx(1 / 3, abs=1e-14)
    t = np.linspace(0, 50, 11)
    np.testing.assert_allclose(trajectory(m, 0.0, t), t / (t + 2), atol=1e-13)
    assert trajectory(m, 0.2 + 0.1j, 0.0) == 0.2 + 0.1j
    assert abs(trajectory(m, trajectory(m, 0.0, 1.0), 1.0) - trajectory(m, 0.0, 2.0)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(range(len(MODELS))), st.floats(0, 4), st.floats(0, 4),
       st.floats(0, 0.9), st.floats(-PI, PI))
def test_semigroup_law(i, s, t, r, psi):
    m = MODELS[i]
    z = r * np.exp(1j * psi)
    lhs = trajectory(m, trajectory(m, z, t), s)
    rhs = trajectory(m, z, s + t)
    assert hyperbolic_distance_disk(lhs, rhs) < 1e-9


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name + str(m.params))
def test_koenigs_conjugation(model):
    z = 0.3 + 0.2j
    t = np.array([0.0, 0.5, 3.0, 10.0])
    rec = trajectory_record(model, z, t)
    np.testing.assert_allclose(model.h(rec.disk_points) - model.h(z) - t, 0, atol=1e-9)
    assert np.all(np.abs(rec.disk_points) < 1)


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name + str(m.params))
def test_denjoy_wolff_attraction(model):
    t = np.geomspace(10, 1e4, 30)
    gap = np.abs(trajectory(model, 0.1j, t) - model.tau)
    # fast (strip) trajectories reach tau exactly in floating point
    assert np.all(np.diff(gap) <= 0)
    live = gap[1:] > 0
    assert np.all(np.diff(gap)[live] < 0)


def test_negative_time_rejected():
    with pytest.raises(ValueError):
        trajectory(SemigroupModel.zero_step(), 0.0, -1.0)


def test_classification_examples():
    assert classify_semigroup(SemigroupModel.strip()).kind == "hyperbolic"
    zero = classify_semigroup(SemigroupModel.zero_step())
    assert zero.kind == "parabolic_zero_step"
    assert zero.final_step < 0.05 and zero.decade_slope < -0.1
    pos = classify_semigroup(SemigroupModel.positive_step())
    assert pos.kind == "parabolic_positive_step"
    assert pos.final_step > 0.05


def test_zero_step_slope_is_exactly_zero():
    rec = trajectory_record(SemigroupModel.zero_step(), 0.0, np.geomspace(1, 1e6, 50))
    assert np.all(rec.slope_args == 0.0)
    c = slope_cluster(SemigroupModel.zero_step())
    assert c.lo == c.hi == 0.0


def test_predictions():
    assert corollary_4_1_predict(PI / 2, PI / 2) == 0
    assert corollary_4_1_predict(PI / 2, PI) == pytest.approx(PI / 6)
    assert corollary_4_1_predict(PI, PI / 2) == pytest.approx(-PI / 6)
    with pytest.raises(HypothesisError):
        corollary_4_1_predict(PI / 3, PI / 3)
    assert corollary_4_1_predict(PI / 3, PI / 2, strict=False) == pytest.approx(PI / 10)


@pytest.mark.parametrize("a1,a2", [(PI / 2, PI / 2), (PI / 2, PI), (PI, PI / 2)])
def test_sector_slopes(a1, a2):
    c = slope_cluster(SemigroupModel.sector(a1, a2))
    assert c.mid == pytest.approx(corollary_4_1_predict(a1, a2), abs=0.02)


def test_slope_independent_of_start():
    m = SemigroupModel.sector(PI / 2, PI)
    assert abs(slope_cluster(m, 0j).mid - slope_cluster(m, 0.3 + 0.2j).mid) < 0.02


@pytest.mark.parametrize("theta,shift", [(PI / 2, 0.0), (PI / 3, 0.0), (PI / 3, 0.3)])
def test_proposition_scenarios(theta, shift):
    U = ModelDomain.rotated_half_plane(theta)
    delta = U if shift == 0 else ModelDomain.rotated_half_plane(theta, shift)
    rep = proposition_4_1_scenario(theta, 1.0, delta)
    assert rep.kind == "by_angle"
    assert rep.agree
    assert rep.measured == pytest.approx(theta, abs=0.02)


def test_proposition_rejects_broken_sandwich():
    inner = ModelDomain.rotated_half_plane(PI / 3, 2.0)
    with pytest.raises(PreconditionError):
        proposition_4_1_scenario(PI / 3, 1.0, inner)
