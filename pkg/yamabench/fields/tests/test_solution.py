# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

import numpy
import pytest
from pydantic import ValidationError

from yamabench import BubbleTerm, FlatBubbleTerm, SolutionField, induced_curvature
from yamabench.fields.solution import CurvatureError


@pytest.fixture(name='mixed_field')
def fixture_mixed_field():
    """Flat bubble, baseline and two bubbles on the first axis."""
    return SolutionField(
        n=3,
        flat=FlatBubbleTerm(b=1.0),
        baseline=True,
        bubbles=[
            BubbleTerm(center=(3.0, 0.0, 0.0), lam=0.25),
            BubbleTerm(center=(0.0, -5.0, 0.0), lam=0.05),
        ],
    )


def test_single_bubble_has_unit_curvature(offset_field, baseline_field, rng):
    x = rng.uniform(-4.0, 4.0, size=(200, 3))
    assert numpy.allclose(offset_field.curvature(x), 1.0, rtol=1e-12)
    assert numpy.allclose(baseline_field.curvature(x), 1.0, rtol=1e-12)
    assert offset_field.curvature(numpy.array([2.0, 0.0, 0.0])) == pytest.approx(1.0, rel=1e-12)


def test_flat_field_curvature(flat_field, rng):
    x = rng.uniform(-10.0, 10.0, size=(100, 3))
    k = induced_curvature(flat_field, x)
    assert numpy.all((k > 0.25) & (k <= 1.5))
    assert flat_field.curvature(numpy.zeros(3)) == pytest.approx(1.5, rel=1e-14)


def test_mixed_field_curvature_is_positive(mixed_field, rng):
    x = rng.uniform(-8.0, 8.0, size=(500, 3))
    k = mixed_field.curvature(x)
    assert numpy.all(numpy.isfinite(k) & (k > 0))


def test_sum_of_terms(mixed_field, rng):
    x = rng.uniform(-6.0, 6.0, size=(30, 3))
    parts = [
        SolutionField(n=3, flat=mixed_field.flat),
        SolutionField(n=3, baseline=True),
    ] + [SolutionField(n=3, bubbles=[term]) for term in mixed_field.bubbles]
    assert numpy.allclose(mixed_field.value(x), sum(p.value(x) for p in parts), rtol=1e-13)
    assert numpy.allclose(mixed_field.laplacian(x), sum(p.laplacian(x) for p in parts), rtol=1e-12)
    assert numpy.allclose(mixed_field.gradient(x), sum(p.gradient(x) for p in parts), rtol=1e-12)


def test_curvature_gradient(mixed_field, rng):
    x = numpy.concatenate(
        [
            rng.uniform(-6.0, 6.0, size=(40, 3)),
            numpy.array([[3.01, 0.0, 0.0], [0.0, -5.002, 0.001], [0.2, 0.1, 0.0]]),
        ]
    )
    analytic = mixed_field.curvature_gradient(x)
    fd = mixed_field.curvature_gradient_fd(x)
    scale = numpy.maximum(numpy.abs(analytic).max(axis=-1, keepdims=True), 1e-3)
    assert numpy.max(numpy.abs(analytic - fd) / scale) < 1e-5


def test_curvature_gradient_vanishes_for_bubble(offset_field, rng):
    x = rng.uniform(-4.0, 4.0, size=(50, 3))
    assert numpy.allclose(offset_field.curvature_gradient(x), 0.0, atol=1e-10)


def test_evaluate_shapes(mixed_field, rng):
    x = rng.uniform(-3.0, 3.0, size=(4, 5, 3))
    values = mixed_field.evaluate(x)
    assert values.value.shape == (4, 5)
    assert values.gradient.shape == (4, 5, 3)
    assert values.curvature.shape == (4, 5)
    assert values.curvature_gradient.shape == (4, 5, 3)
    assert numpy.allclose(values.value, mixed_field.value(x), rtol=1e-15)


def test_evaluate_wrong_dimension(mixed_field):
    with pytest.raises(ValueError):
        mixed_field.evaluate(numpy.zeros((2, 4)))
    with pytest.raises(ValueError):
        mixed_field.value(numpy.zeros(2))


def test_origin_offsets(mixed_field, rng):
    origin = numpy.array([3.0, 0.0, 0.0])
    y = rng.uniform(-0.01, 0.01, size=(20, 3))
    assert numpy.allclose(mixed_field.value(y, origin), mixed_field.value(y + origin), rtol=1e-12)
    assert numpy.allclose(
        mixed_field.curvature(y, origin), mixed_field.curvature(y + origin), rtol=1e-10
    )


def test_metric_factor(mixed_field, rng):
    x = rng.uniform(-3.0, 3.0, size=(10, 3))
    assert numpy.allclose(mixed_field.metric_factor(x), mixed_field.value(x) ** 4, rtol=1e-13)


def test_active_dims(flat_field, baseline_field, offset_field, mixed_field):
    assert flat_field.active_dims == 0
    assert baseline_field.active_dims == 0
    assert offset_field.active_dims == 1
    assert mixed_field.active_dims == 2


def test_peaks(mixed_field):
    peaks = mixed_field.peaks()
    assert len(peaks) == 2
    assert [p.radius for p in peaks] == [0.5, 0.5]

    close = SolutionField(
        n=3,
        bubbles=[
            BubbleTerm(center=(1.0, 0.0, 0.0), lam=0.01),
            BubbleTerm(center=(1.4, 0.0, 0.0), lam=0.01),
        ],
    )
    assert [p.radius for p in close.peaks()] == pytest.approx([0.2, 0.2])


def test_peaks_shared_centre():
    field = SolutionField(
        n=3,
        bubbles=[
            BubbleTerm(center=(1.0, 0.0, 0.0), lam=0.1),
            BubbleTerm(center=(1.0, 0.0, 0.0), lam=0.2),
        ],
    )
    with pytest.raises(ValueError, match='share'):
        field.peaks()


def test_radial_scales(mixed_field):
    scales = mixed_field.radial_scales()
    assert (0.0, 1.0) in scales
    assert (3.0, 0.5) in scales
    assert (5.0, 0.5) in scales


def test_field_needs_terms():
    with pytest.raises(ValidationError):
        SolutionField(n=3)


def test_field_dimension_mismatch():
    with pytest.raises(ValidationError):
        SolutionField(n=4, bubbles=[BubbleTerm(center=(1.0, 0.0, 0.0), lam=1.0)])


def test_field_config(mixed_field, tmp_path):
    config = mixed_field.dump_config()
    assert 'phi' not in config
    assert config['bubbles'][0] == {'center': [3.0, 0.0, 0.0], 'lambda': 0.25}

    path = tmp_path / 'field.json'
    mixed_field.to_json(path)
    restored = SolutionField.from_json_file(path)
    assert restored == mixed_field

    with_phi = mixed_field.copy()
    with_phi.phi = [(0.0, 0.0), (1.0, 1.0)]
    assert with_phi.dump_config()['phi'] == [[0.0, 0.0], [1.0, 1.0]]


def test_vanishing_field_value():
    """Far from a tiny bubble in eight dimensions the field underflows to zero."""
    field = SolutionField(n=8, bubbles=[BubbleTerm(center=(0.0,) * 8, lam=1e-100)])
    x = numpy.zeros((2, 8))
    x[0, 0] = 1e-60
    x[1, 0] = 1e6

    with pytest.raises(CurvatureError, match='not positive'):
        field.evaluate(x)

    values = field.evaluate(x, check=False)
    assert values.value[1] == 0.0
    assert values.curvature[0] == pytest.approx(1.0, rel=1e-10)
    assert numpy.isnan(values.curvature[1])
    assert numpy.all(numpy.isnan(values.curvature_gradient[1]))
