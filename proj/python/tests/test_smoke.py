import math

import numpy as np
import pytest

import compclass as cc


def test_transitions_match_subspace_counts():
    model = cc.synthetic_model(64, 11, 14, seed=1)
    assert model.ranks == [14] * 11
    assert cc.transition(model, "random", 64, seed=1) == 15
    assert cc.transition(model, "prop5", 11, seed=1) == 10


def test_single_measurement_design_separates_two_classes():
    model = cc.synthetic_model(20, 2, 6, seed=3)
    k = cc.design_single_measurement(model, seed=4)
    assert k.matrix.shape == (1, 20)
    report = cc.exponent_report(model, k.matrix)
    assert report["d"] == pytest.approx(0.25)
    assert report["minimizing_pairs"] == [(0, 1), (1, 0)]


def test_two_class_rate_design_hits_requested_rows():
    model = cc.synthetic_model(64, 2, 14, seed=5)
    k = cc.design_two_class(model, 1.2, seed=6)
    assert k.measurements == 5
    assert cc.pairwise_exponent(k.matrix, model.covariance(0), model.covariance(1)) == pytest.approx(1.25)


def test_allocation_and_infeasible_target():
    total, per_class = cc.solve_allocation(3, 8, 2, 0.5)
    assert total == 2 and per_class == [1, 1, 0]
    with pytest.raises(cc.InfeasibleDesign):
        cc.solve_allocation(3, 8, 2, 1.0)


def test_scalar_error_matches_closed_form():
    # Two zero-mean scalar Gaussians with equal priors cross at a single |y|.
    v1, v2 = 1.25, 4.25
    model = cc.SourceModel([0.5, 0.5], [np.diag([1.0, 0.0]), np.diag([0.0, 4.0])])
    kernel = np.array([[1.0, 1.0]])
    pe, se = cc.estimate_pe(model, kernel, 0.25, 20000, seed=9)
    t = math.sqrt(v1 * v2 * math.log(v2 / v1) / (v2 - v1))
    truth = 0.5 * math.erfc(t / math.sqrt(2 * v1)) + 0.5 * math.erf(t / math.sqrt(2 * v2))
    assert abs(pe - truth) <= 3 * se


def test_sweep_is_deterministic_and_sorted():
    model = cc.synthetic_model(16, 3, 3, seed=2)
    k = cc.random_kernel(4, 16, seed=2)
    a = cc.sweep_noise(model, k.matrix, [-20, -40, -10], 2000, seed=11)
    b = cc.sweep_noise(model, k.matrix, [-20, -40, -10], 2000, seed=11, threads=3)
    assert a == b
    assert a["axis"] == [-40, -20, -10]
    for pe, se, bound in zip(a["pe"], a["se"], a["bound"]):
        assert pe <= bound + 3 * se


def test_model_text_round_trip_and_classifier():
    model = cc.synthetic_model(8, 2, 2, seed=4)
    again = cc.SourceModel.from_text(model.to_text())
    assert np.array_equal(again.covariance(1), model.covariance(1))
    k = cc.random_kernel(8, 8, seed=1).matrix
    clf = cc.MapClassifier(model, k, 1e-6)
    y = k @ model.covariance(1) @ np.ones(8)
    assert clf.classify(y) == 1


def test_validation_errors_surface_as_value_error():
    with pytest.raises(ValueError):
        cc.synthetic_model(8, 2, 8, seed=1)
    with pytest.raises(ValueError):
        cc.SourceModel([0.5, 0.6], [np.eye(2), np.eye(2)])
