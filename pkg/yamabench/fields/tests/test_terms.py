# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

import numpy
import pytest
from pydantic import ValidationError

from yamabench import (
    BubbleTerm,
    FlatBubbleTerm,
    bubble_gradient,
    bubble_laplacian,
    bubble_value,
    flat_bubble_curvature,
    flat_bubble_value,
    make_context,
)


def _fd_laplacian(func, x, h=1e-3):
    total = -2.0 * x.shape[-1] * func(x)
    for i in range(x.shape[-1]):
        shift = numpy.zeros_like(x)
        shift[..., i] = h
        total = total + func(x + shift) + func(x - shift)
    return total / (h * h)


@pytest.mark.parametrize('n', [3, 4, 5])
@pytest.mark.parametrize('lam', [0.1, 1.0, 3.0])
def test_bubble_peak(n, lam):
    term = BubbleTerm(center=(1.0,) + (0.0,) * (n - 1), lam=lam)
    ctx = make_context(n)
    expected = ctx.alpha_n * lam ** (-ctx.m)
    assert term.peak_value(ctx) == pytest.approx(expected, rel=1e-13)
    assert bubble_value(term, term.center_array) == pytest.approx(expected, rel=1e-13)


def test_bubble_closed_form(rng):
    term = BubbleTerm(center=(0.5, -1.0, 2.0), lam=0.7)
    x = rng.uniform(-3.0, 3.0, size=(20, 3))
    rho2 = numpy.sum((x - term.center_array) ** 2, axis=-1)
    expected = 3.0**0.25 * (0.7 / (0.49 + rho2)) ** 0.5
    assert numpy.allclose(bubble_value(term, x), expected, rtol=1e-13, atol=0)


@pytest.mark.parametrize('n', [3, 4, 6])
def test_bubble_solves_equation(n, rng):
    """The bubble satisfies the equation with unit curvature."""
    term = BubbleTerm(center=(0.0,) * n, lam=1.0)
    ctx = make_context(n)
    x = rng.uniform(-2.0, 2.0, size=(10, n))
    laplacian = bubble_laplacian(term, x)
    assert numpy.allclose(laplacian, -bubble_value(term, x) ** ctx.p, rtol=1e-13)
    assert numpy.allclose(
        _fd_laplacian(lambda y: bubble_value(term, y), x), laplacian, rtol=1e-4, atol=1e-6
    )


def test_bubble_gradient(rng):
    term = BubbleTerm(center=(0.3, 0.0, -0.2), lam=0.8)
    x = rng.uniform(-2.0, 2.0, size=(10, 3))
    h = 1e-6
    fd = numpy.stack(
        [
            (bubble_value(term, x + h * e) - bubble_value(term, x - h * e)) / (2 * h)
            for e in numpy.eye(3)
        ],
        axis=-1,
    )
    assert numpy.allclose(bubble_gradient(term, x), fd, rtol=1e-6, atol=1e-9)


def test_bubble_origin_shift(rng):
    term = BubbleTerm(center=(4.0, 1.0, 0.0), lam=0.2)
    origin = numpy.array([4.0, 1.0, 0.0])
    y = rng.uniform(-0.1, 0.1, size=(5, 3))
    assert numpy.allclose(bubble_value(term, y, origin), bubble_value(term, y + origin), rtol=1e-13)


def test_tiny_scale_is_finite():
    term = BubbleTerm(center=(1.0, 0.0, 0.0), lam=1e-200)
    values = bubble_value(term, numpy.array([[1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]))
    assert numpy.all(numpy.isfinite(values))
    assert values[1] > 0.0


@pytest.mark.parametrize(
    'config',
    [
        {'center': [1.0, 0.0], 'lambda': 1.0},
        {'center': [1.0, 0.0, 0.0], 'lambda': 0.0},
        {'center': [1.0, 0.0, 0.0], 'lambda': -1.0},
    ],
)
def test_bubble_invalid(config):
    with pytest.raises(ValidationError):
        BubbleTerm.from_config(config)


def test_bubble_config():
    term = BubbleTerm.from_config({'center': [2.0, 0.0, 0.0], 'lambda': 0.125})
    assert term.lam == 0.125
    assert term.center == (2.0, 0.0, 0.0)
    assert term.center_norm == 2.0
    assert term.dump_config() == {'center': [2.0, 0.0, 0.0], 'lambda': 0.125}


@pytest.mark.parametrize('b', [0.5, 1.0, 2.0])
def test_flat_curvature_limits(b):
    term = FlatBubbleTerm(b=b)
    assert flat_bubble_curvature(term, numpy.zeros(3)) == pytest.approx(1.5, rel=1e-14)
    assert flat_bubble_curvature(term, numpy.array([1e8, 0.0, 0.0])) == pytest.approx(
        0.25, rel=1e-10
    )
    assert flat_bubble_value(term, numpy.zeros(3)) == pytest.approx(b**-0.5, rel=1e-14)


@pytest.mark.parametrize('n', [3, 4, 5])
def test_flat_curvature_matches_laplacian(n, rng):
    term = FlatBubbleTerm(b=1.3)
    ctx = make_context(n)
    x = rng.uniform(-5.0, 5.0, size=(15, n))
    values = term.evaluate(ctx, x)
    curvature = -values.laplacian / values.value**ctx.p
    assert numpy.allclose(curvature, term.curvature(ctx, x), rtol=1e-12)
    assert numpy.all(values.laplacian < 0)
    fd = _fd_laplacian(lambda y: term.evaluate(ctx, y).value, x)
    assert numpy.allclose(fd, values.laplacian, rtol=1e-4, atol=1e-6)

    rho2 = numpy.sum(x * x, axis=-1)
    alternative = 0.5 * n * (n - 2) * (1.0 - (n + 2) / (2.0 * n) * rho2 / (rho2 + 1.69))
    assert numpy.allclose(term.curvature(ctx, x), alternative, rtol=1e-12)


def test_flat_laplacian_gradient(rng):
    term = FlatBubbleTerm(b=0.9)
    ctx = make_context(3)
    x = rng.uniform(-2.0, 2.0, size=(8, 3))
    h = 1e-6
    fd = numpy.stack(
        [
            (term.evaluate(ctx, x + h * e).laplacian - term.evaluate(ctx, x - h * e).laplacian)
            / (2 * h)
            for e in numpy.eye(3)
        ],
        axis=-1,
    )
    assert numpy.allclose(term.evaluate(ctx, x).laplacian_gradient, fd, rtol=1e-5, atol=1e-8)
