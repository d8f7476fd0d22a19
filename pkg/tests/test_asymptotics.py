"""Two-term predictions and data-side estimation of the boundary coefficient."""

import math

import numpy as np
import pytest

from elastic_weyl import (
    AsymptoticModel,
    BoundaryCondition,
    CylinderGeometry,
    counting_closed_form,
    cylinder_two_term,
    estimate_second_coefficient,
    residual_table,
    two_term_prediction,
    validate_material,
)
from elastic_weyl.asymptotics import InsufficientSpanError

DF, FD = BoundaryCondition.DF, BoundaryCondition.FD


class TestPrediction:
    def test_worked_value(self):
        model = AsymptoticModel(leading=0.75, second=1.0 - 1.0 / math.sqrt(2.0),
                                dimension=2)
        want = 75.0 + 10.0 * (1.0 - 1.0 / math.sqrt(2.0))
        assert two_term_prediction(model, 100.0) == pytest.approx(want, rel=1e-14)
        assert two_term_prediction(model, 100.0) == pytest.approx(77.929, abs=5e-4)

    def test_vanishes_at_origin(self):
        model = AsymptoticModel(leading=2.0, second=-1.0, dimension=3)
        assert two_term_prediction(model, 0.0) == 0.0
        assert two_term_prediction(model, 1e-30) == pytest.approx(0.0, abs=1e-14)

    def test_reduces_to_one_term(self):
        model = AsymptoticModel(leading=0.4, second=0.0, dimension=4)
        for lam in (0.5, 3.0, 77.0):
            assert two_term_prediction(model, lam) == pytest.approx(
                0.4 * lam**2, rel=1e-14
            )

    def test_leading_must_be_positive(self):
        with pytest.raises(ValueError):
            AsymptoticModel(leading=0.0, second=1.0, dimension=2)


def synthetic_samples(leading, second, d, lam_max, n):
    lams = np.geomspace(lam_max / 16.0, lam_max, n)
    counts = np.floor(leading * lams ** (d / 2.0) + second * lams ** ((d - 1) / 2.0))
    return np.column_stack([lams, counts])


class TestEstimation:
    def test_synthetic_ground_truth(self):
        samples = synthetic_samples(0.75, 0.3, 2, 2e4, 400)
        est = estimate_second_coefficient(samples, 0.75, 2)
        assert 0.25 <= est.estimate <= 0.35

    def test_estimate_is_floatable(self):
        samples = synthetic_samples(0.75, 0.3, 2, 2e4, 300)
        est = estimate_second_coefficient(samples, 0.75, 2)
        assert float(est) == est.estimate
        assert est.uncertainty >= 0.0
        assert len(est.window_means) >= 2

    def test_needs_enough_samples(self):
        samples = synthetic_samples(0.75, 0.3, 2, 1e4, 50)
        with pytest.raises(InsufficientSpanError):
            estimate_second_coefficient(samples, 0.75, 2)

    def test_needs_dyadic_span(self):
        lams = np.linspace(1000.0, 1400.0, 150)  # all within one octave
        counts = np.floor(0.75 * lams)
        with pytest.raises(InsufficientSpanError):
            estimate_second_coefficient(np.column_stack([lams, counts]), 0.75, 2)

    def test_subsampling_stability(self):
        samples = synthetic_samples(0.6, -0.45, 3, 1e4, 600)
        full = estimate_second_coefficient(samples, 0.6, 3)
        thinned = estimate_second_coefficient(samples[::3], 0.6, 3)
        assert thinned.estimate == pytest.approx(
            full.estimate, abs=max(2.0 * full.uncertainty, 0.02)
        )

    def test_cylinder_recovery_moderate_range(self):
        # small-scale version of the acceptance run (lam <= 2e4 instead of 1e5)
        p = validate_material(0.0, 1.0, 2)
        geom = CylinderGeometry(2, math.pi)
        leading, second = cylinder_two_term(geom, p, DF)
        lams = np.geomspace(1.25e3, 2e4, 250)
        counts = [counting_closed_form(geom, p, DF, float(x)) for x in lams]
        est = estimate_second_coefficient(np.column_stack([lams, counts]), leading, 2)
        assert est.estimate == pytest.approx(second, rel=0.15)


class TestResidualTable:
    def test_empty(self):
        model = AsymptoticModel(leading=1.0, second=0.0, dimension=2)
        series = residual_table([], model)
        assert series.lambdas.size == 0
        assert series.residual2.size == 0

    def test_true_model_leaves_floor_noise(self):
        leading, second, d = 0.8, 0.25, 2
        samples = synthetic_samples(leading, second, d, 4e4, 300)
        model = AsymptoticModel(leading=leading, second=second, dimension=d)
        series = residual_table(samples, model)
        # the floor discards less than one count: residual2 <= 1/sqrt(lam)
        bound = 1.2 / np.sqrt(series.lambdas)
        assert np.all(np.abs(series.residual2) <= bound)

    def test_window_means_shrink_for_cylinder(self):
        p = validate_material(0.0, 1.0, 2)
        geom = CylinderGeometry(2, math.pi)
        leading, second = cylinder_two_term(geom, p, DF)
        model = AsymptoticModel(leading=leading, second=second, dimension=2)
        lams = np.geomspace(100.0, 5e4, 400)
        counts = [counting_closed_form(geom, p, DF, float(x)) for x in lams]
        series = residual_table(np.column_stack([lams, counts]), model)
        lo = np.abs(series.residual2[(series.lambdas > 100) & (series.lambdas < 1000)])
        hi = np.abs(series.residual2[series.lambdas > 2e4])
        assert hi.mean() < lo.mean()

    def test_rejects_malformed_samples(self):
        model = AsymptoticModel(leading=1.0, second=0.0, dimension=2)
        with pytest.raises(ValueError):
            residual_table(np.ones((3, 3)), model)
