"""
Tests for the named ground truths and field-grid export.
"""

import math

import numpy as np
import pytest

from polyfield.errors import ConfigError, InvalidInputError
from polyfield.experiments import available_models, export_field_grid, ground_truth, read_field_grid


@pytest.mark.experiments
class TestGroundTruth:
    """Test model lookup."""

    def test_should_list_every_model(self):
        assert available_models() == ["disease", "disease_controlled", "pendulum", "tumor"]

    def test_domains_should_match_models(self, disease, pendulum, tumor):
        assert disease.domain.bounds == ((0.0, 0.0), (1.0, 1.0))
        assert pendulum.domain.bounds == ((-math.pi, -math.pi), (math.pi, math.pi))
        assert tumor.domain.bounds == ((0.0, 0.0), (2.0, 2.0))

    def test_should_unpack_into_field_and_domain(self, disease):
        field, domain = disease
        assert field is disease.field
        assert domain is disease.domain

    def test_params_should_override_defaults(self):
        truth = ground_truth("disease", {"b1": 0.2})
        assert truth.params["b1"] == 0.2
        np.testing.assert_allclose(truth.field.evaluate([0.0, 1.0]), [0.2, -0.05])

    def test_should_reject_unknown_model_or_parameter(self):
        with pytest.raises(ConfigError):
            ground_truth("lorenz")
        with pytest.raises(ConfigError):
            ground_truth("disease", {"beta": 1.0})

    def test_should_reject_nonpositive_parameters(self):
        with pytest.raises(ConfigError):
            ground_truth("pendulum", {"l": 0.0})
        with pytest.raises(ConfigError):
            ground_truth("disease_controlled", {"u1": -0.1})

    def test_controlled_model_should_remove_population(self):
        truth = ground_truth("disease_controlled", {"u1": 0.5, "u2": 0.0})
        plain = ground_truth("disease")
        x = np.array([0.4, 0.2])
        np.testing.assert_allclose(truth.field.evaluate(x), plain.field.evaluate(x) - [0.2, 0.0])

    def test_pendulum_should_keep_its_sine(self, pendulum):
        np.testing.assert_allclose(pendulum.field.evaluate([math.pi / 2, 0.3]), [0.3, -1.0])

    def test_tumor_growth_should_vanish_at_capacity(self, tumor):
        assert tumor.field.evaluate([1.2, 1.2])[0] == pytest.approx(0.0, abs=1e-15)


@pytest.mark.experiments
class TestExportFieldGrid:
    """Test plotting grids."""

    def test_should_write_every_grid_point(self, tmp_path, disease):
        path = export_field_grid(disease.field, disease.domain, 4, tmp_path / "truth.csv")
        points, values = read_field_grid(path)
        assert points.shape == (16, 2)
        np.testing.assert_allclose(values, disease.field.evaluate(points))

    def test_should_keep_non_finite_values(self, tmp_path, tumor):
        """The tumor field is undefined at K = 0; the row is still written."""
        path = export_field_grid(tumor.field, tumor.domain, 3, tmp_path / "tumor.csv")
        points, values = read_field_grid(path)
        assert points.shape == (9, 2)
        assert not np.all(np.isfinite(values))

    def test_should_reject_small_resolution(self, tmp_path, disease):
        with pytest.raises(InvalidInputError):
            export_field_grid(disease.field, disease.domain, 1, tmp_path / "g.csv")
