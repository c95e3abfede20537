# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

import math

import numpy
import pytest

from yamabench import BubbleTerm, bubble_gradient, bubble_value, make_context
from yamabench.construct import (
    LambdaSelectionError,
    domination_sups,
    gradient_sup,
    select_lambda,
    value_ratio_sup,
)


def _outward_ray(distance, rho):
    """Points ``c + rho * c/|c|`` for the centre ``c = (distance, 0, 0)``."""
    points = numpy.zeros((len(rho), 3))
    points[:, 0] = distance + rho
    return points


@pytest.mark.parametrize(
    'lam,distance,rho_min', [(0.1, 2.0, 0.25), (0.5, 1.0, 0.1), (1e-3, 7.0, 0.25)]
)
def test_value_ratio_sup(lam, distance, rho_min):
    ctx = make_context(3)
    term = BubbleTerm(center=(distance, 0.0, 0.0), lam=lam)
    baseline = BubbleTerm(center=(0.0, 0.0, 0.0), lam=1.0)
    rho = numpy.geomspace(rho_min, 1e4, 20001)
    x = _outward_ray(distance, rho)
    ratio = bubble_value(term, x) / bubble_value(baseline, x)

    bound = value_ratio_sup(ctx, lam, distance, rho_min)
    assert numpy.max(ratio) <= bound * (1.0 + 1e-12)
    assert numpy.max(ratio) >= bound * (1.0 - 1e-3)


def test_value_ratio_bounds_every_direction(rng):
    ctx = make_context(3)
    lam, distance, rho_min = 0.05, 3.0, 0.25
    term = BubbleTerm(center=(distance, 0.0, 0.0), lam=lam)
    baseline = BubbleTerm(center=(0.0, 0.0, 0.0), lam=1.0)
    offsets = rng.normal(size=(5000, 3))
    radii = rho_min * numpy.exp(rng.uniform(0.0, 4.0, size=5000))
    offsets *= (radii / numpy.linalg.norm(offsets, axis=-1))[:, None]
    x = term.center_array + offsets
    ratio = bubble_value(term, x) / bubble_value(baseline, x)
    assert numpy.max(ratio) <= value_ratio_sup(ctx, lam, distance, rho_min) * (1.0 + 1e-12)


@pytest.mark.parametrize('n', [3, 4])
@pytest.mark.parametrize('lam,rho_min', [(0.1, 0.01), (0.1, 0.25), (1e-4, 0.25)])
def test_gradient_sup(n, lam, rho_min):
    ctx = make_context(n)
    term = BubbleTerm(center=(0.0,) * n, lam=lam)
    rho = numpy.geomspace(rho_min, 100.0, 20001)
    x = numpy.zeros((len(rho), n))
    x[:, 0] = rho
    grad = numpy.linalg.norm(bubble_gradient(term, x), axis=-1)

    bound = gradient_sup(ctx, lam, rho_min)
    assert numpy.max(grad) <= bound * (1.0 + 1e-12)
    assert numpy.max(grad) >= bound * (1.0 - 1e-3)


@pytest.mark.parametrize('eps,distance', [(0.5, math.e), (0.125, math.exp(3.0)), (0.01, 2.0)])
def test_select_lambda(eps, distance):
    ctx = make_context(3)
    lam = select_lambda(ctx, eps, distance, 0.25, 1.0)
    sups = domination_sups(ctx, lam, distance, 0.25)
    assert sups.value_ratio <= eps
    assert sups.gradient < eps

    # the selected scale is the largest admissible one up to bisection accuracy
    larger = domination_sups(ctx, lam * (1.0 + 1e-6), distance, 0.25)
    assert larger.value_ratio > eps or larger.gradient >= eps


def test_select_lambda_at_upper_bound():
    ctx = make_context(3)
    assert select_lambda(ctx, 1.0, 10.0, 1.0, 1e-6) == 1e-6


@pytest.mark.parametrize('eps', [0.0, -0.1, 1.5])
def test_select_lambda_invalid_eps(eps):
    with pytest.raises(ValueError):
        select_lambda(make_context(3), eps, 1.0, 0.25, 1.0)


def test_select_lambda_gives_up():
    with pytest.raises(LambdaSelectionError):
        select_lambda(make_context(3), 1e-6, 10.0, 0.25, 1.0, max_iter=2)
