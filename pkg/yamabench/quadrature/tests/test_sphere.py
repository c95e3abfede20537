# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

import math

import numpy
import pytest

from yamabench import sphere_area
from yamabench.quadrature import (
    QuadratureSettings,
    cap_rule,
    local_frame,
    sphere_integrate,
    sphere_integrate_adaptive,
    sphere_node_count,
    sphere_rule,
)


@pytest.mark.parametrize('n', [2, 3, 4, 5, 6])
@pytest.mark.parametrize('order', [1, 4, 9])
def test_weights_sum_to_area(n, order):
    rule = sphere_rule(n, order)
    assert rule.weights.sum() == pytest.approx(sphere_area(n), rel=1e-13)
    assert numpy.allclose(numpy.linalg.norm(rule.nodes, axis=-1), 1.0, rtol=1e-14)
    assert len(rule) == sphere_node_count(n, order)


@pytest.mark.parametrize('n', [3, 4, 5])
def test_moments(n):
    rule = sphere_rule(n, 6)
    area = sphere_area(n)
    for i in range(n):
        assert sphere_integrate(rule, lambda x, i=i: x[:, i] ** 2, 1.0) == pytest.approx(
            area / n, rel=1e-12
        )
    assert sphere_integrate(rule, lambda x: x[:, 0] ** 4, 1.0) == pytest.approx(
        3.0 * area / (n * (n + 2)), rel=1e-12
    )
    assert sphere_integrate(rule, lambda x: x[:, 0] * x[:, 1], 1.0) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize('active', [0, 1, 2])
def test_reduced_rule(active):
    """A function of the first coordinates needs fewer nodes."""
    full = sphere_rule(4, 8)
    reduced = sphere_rule(4, 8, active)
    assert len(reduced) < len(full)
    assert len(reduced) == sphere_node_count(4, 8, active)
    assert reduced.weights.sum() == pytest.approx(sphere_area(4), rel=1e-13)

    def f(x):
        return numpy.exp(x[:, 0]) if active else numpy.full(x.shape[0], 2.0)

    expected = sphere_integrate(full, f, 1.0)
    assert sphere_integrate(reduced, f, 1.0) == pytest.approx(expected, rel=1e-12)


def test_radius_scaling():
    rule = sphere_rule(3, 6)
    assert sphere_integrate(rule, lambda x: numpy.sum(x * x, axis=-1), 2.0) == pytest.approx(
        16.0 * math.pi, rel=1e-13
    )


@pytest.mark.parametrize('t_max', [-0.5, 0.0, 0.7])
def test_cap_area(t_max):
    rule = cap_rule(3, 12, t_max)
    assert rule.weights.sum() == pytest.approx(2.0 * math.pi * (1.0 + t_max), rel=1e-12)
    assert numpy.all(rule.nodes[:, 0] <= t_max + 1e-14)


def test_cap_limits():
    assert len(cap_rule(3, 4, 1.5)) == len(sphere_rule(3, 4))
    assert len(cap_rule(3, 4, -1.0)) == 0


@pytest.mark.parametrize(
    'center,active',
    [([2.0, 0.0, 0.0], 1), ([1.0, -1.0, 0.0, 0.0], 2), ([0.0, 3.0, 0.0], 3)],
)
def test_local_frame(center, active):
    center = numpy.array(center)
    frame = local_frame(center, active)
    assert numpy.allclose(frame.T @ frame, numpy.eye(len(center)), atol=1e-14)
    assert numpy.allclose(frame[:, 0], center / numpy.linalg.norm(center))


def test_rotated_rule():
    frame = local_frame(numpy.array([0.0, 0.0, 1.0]), 3)
    rule = sphere_rule(3, 6).rotated(frame)
    assert sphere_integrate(rule, lambda x: x[:, 2] ** 2, 1.0) == pytest.approx(4.0 * math.pi / 3.0)


def test_adaptive_smooth():
    result = sphere_integrate_adaptive(lambda x: numpy.exp(x[:, 0]), 3, 1.0)
    assert result.converged
    # int_{S^2} e^{x_1} = 2 pi (e - 1/e)
    assert result.value == pytest.approx(2.0 * math.pi * (math.e - 1.0 / math.e), rel=1e-10)


def test_adaptive_vector_valued():
    result = sphere_integrate_adaptive(
        lambda x: numpy.stack([x[:, 0] ** 2, numpy.ones(x.shape[0])], axis=-1), 3, 1.0
    )
    assert result.value.shape == (2,)
    assert numpy.allclose(result.value, [4.0 * math.pi / 3.0, 4.0 * math.pi], rtol=1e-12)


def test_adaptive_sharp_feature():
    lam = 0.02
    settings = QuadratureSettings(rtol=1e-6)

    def f(x):
        d2 = numpy.sum((x - numpy.array([1.0, 0.0, 0.0])) ** 2, axis=-1)
        return lam / (lam * lam + d2)

    result = sphere_integrate_adaptive(f, 3, 1.0, active_dims=1, settings=settings, widths=[lam])
    assert result.converged
    assert result.order >= 2.0 * math.pi / lam
    # int_{S^2} lam / (lam^2 + 2 - 2 t) = pi lam log(1 + 4 / lam^2)
    expected = math.pi * lam * math.log(1.0 + 4.0 / lam**2)
    assert result.value == pytest.approx(expected, rel=1e-5)


def test_adaptive_radial_only():
    result = sphere_integrate_adaptive(lambda x: numpy.ones(x.shape[0]), 5, 3.0, active_dims=0)
    assert result.converged
    assert result.value == pytest.approx(sphere_area(5), rel=1e-14)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        sphere_rule(1, 4)
    with pytest.raises(ValueError):
        sphere_rule(3, 0)
    with pytest.raises(ValueError):
        sphere_integrate(sphere_rule(3, 4), lambda x: x[:, 0], 0.0)
    with pytest.raises(ValueError):
        sphere_integrate_adaptive(lambda x: x[:, 0], 3, -1.0)
