# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Tests for the dimension constants and the bubble mass.
"""

from fractions import Fraction
import math

import numpy
import pytest

from yamabench.core import (
    bubble_mass_fraction,
    bubble_mass_median,
    bubble_mass_tail,
    make_context,
    sphere_area,
    v_n_closed_form,
)


@pytest.mark.parametrize('n', [3, 4, 5, 6, 10])
def test_context_exponents(n):
    ctx = make_context(n)
    assert ctx.p_exact == Fraction(n + 2, n - 2)
    assert ctx.q_exact == ctx.p_exact + 1
    assert ctx.q == pytest.approx(2 * n / (n - 2), rel=1e-15)
    assert ctx.m == 0.5 * (n - 2)
    assert ctx.alpha_n == pytest.approx((n * (n - 2)) ** ((n - 2) / 4), rel=1e-14)


def test_context_is_cached():
    assert make_context(4) is make_context(4)


@pytest.mark.parametrize('n', [2, 1, 3.5, -3])
def test_context_invalid_dimension(n):
    with pytest.raises(ValueError):
        make_context(n)


@pytest.mark.parametrize('n,area', [(2, 2 * math.pi), (3, 4 * math.pi), (4, 2 * math.pi**2)])
def test_sphere_area(n, area):
    assert sphere_area(n) == pytest.approx(area, rel=1e-14)


def test_v3_value():
    ctx = make_context(3)
    assert ctx.V_n == pytest.approx(12.8207, abs=1e-3)
    assert ctx.V_n == pytest.approx(v_n_closed_form(3), rel=1e-8)


@pytest.mark.parametrize('n', [4, 5, 6, 8])
def test_v_n_matches_closed_form(n):
    assert make_context(n).V_n == pytest.approx(v_n_closed_form(n), rel=1e-10)


@pytest.mark.parametrize('n', [3, 4, 6])
def test_mass_median_is_one(n):
    assert bubble_mass_median(n) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize('n', [3, 4, 7])
def test_mass_fraction_symmetry(n):
    t = numpy.array([0.1, 0.5, 2.0, 7.0])
    fractions = bubble_mass_fraction(n, t)
    assert numpy.all(numpy.diff(fractions) > 0)
    assert numpy.allclose(fractions + bubble_mass_fraction(n, 1.0 / t), 1.0, rtol=0, atol=1e-14)
    assert bubble_mass_fraction(n, 0.0) == 0.0


@pytest.mark.parametrize('lam,radius', [(1.0, 0.0), (1e-3, 0.01), (10.0, 3.0), (1.0, 1e4)])
def test_mass_tail(lam, radius):
    ctx = make_context(3)
    tail = bubble_mass_tail(ctx, lam, radius)
    inside = ctx.V_n * float(bubble_mass_fraction(3, radius / lam))
    assert tail + inside == pytest.approx(ctx.V_n, rel=1e-13)
    assert tail >= 0.0


def test_mass_tail_invalid():
    with pytest.raises(ValueError):
        bubble_mass_tail(make_context(3), -1.0, 1.0)
