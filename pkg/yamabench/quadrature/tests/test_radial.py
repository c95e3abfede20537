# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

import math

import numpy
import pytest

from yamabench.quadrature import (
    IntegrationResult,
    PanelRecord,
    QuadratureError,
    RadialRule,
    clean_breakpoints,
    gauss_legendre,
    geometric_breakpoints,
    octave_breakpoints,
    radial_integrate,
)


@pytest.mark.parametrize('order', [1, 4, 12, 31])
def test_gauss_legendre(order):
    x, w = gauss_legendre(order)
    assert w.sum() == pytest.approx(2.0, rel=1e-14)
    assert numpy.all(numpy.abs(x) < 1.0)
    # exact for polynomials up to degree 2 * order - 1
    assert numpy.sum(w * x ** (2 * order - 2)) == pytest.approx(2.0 / (2 * order - 1), rel=1e-12)


def test_radial_rule_polynomial():
    rule = RadialRule(breakpoints=(0.0, 0.5, 2.0), order=4)
    assert rule.integrate(lambda r: r**3) == pytest.approx(4.0, rel=1e-14)
    assert RadialRule(breakpoints=(1.0,)).integrate(lambda r: r) == 0.0


def test_radial_integrate_smooth():
    result = radial_integrate(numpy.exp, [0.0, 1.0, 10.0], order=8, rtol=1e-12)
    assert result.converged
    assert result.value == pytest.approx(math.exp(10.0) - 1.0, rel=1e-12)
    assert result.n_evals > 0
    assert result.panels[0].a == 0.0 and result.panels[-1].b == 10.0


def test_radial_integrate_sharp():
    lam = 1e-3
    breakpoints = [0.0] + geometric_breakpoints(0.0, lam, 0.0, 1.0) + [1.0]
    result = radial_integrate(lambda r: lam / (lam * lam + r * r), breakpoints, rtol=1e-11)
    assert result.converged
    assert result.value == pytest.approx(math.atan(1.0 / lam), rel=1e-10)


def test_radial_integrate_not_converged():
    result = radial_integrate(numpy.sqrt, [0.0, 1.0], order=2, rtol=1e-15, max_depth=2)
    assert not result.converged
    with pytest.raises(QuadratureError, match='radius'):
        result.require_converged('radius')


def test_clean_breakpoints():
    points = clean_breakpoints([0.5, 0.5, 2.0, -1.0, 0.5 + 1e-15, 0.25], 0.0, 1.0)
    assert points == [0.0, 0.25, 0.5, 1.0]
    assert clean_breakpoints([1.0 - 1e-15], 0.0, 1.0) == [0.0, 1.0]


def test_geometric_breakpoints():
    points = geometric_breakpoints(5.0, 1.0, 0.0, 10.0, first=0)
    assert sorted(points) == [1.0, 3.0, 4.0, 6.0, 7.0, 9.0]
    assert geometric_breakpoints(5.0, 0.0, 0.0, 10.0) == []


def test_octave_breakpoints():
    assert sorted(octave_breakpoints(10.0)) == [0.25, 0.5, 1.0, 2.0, 4.0, 8.0]
    assert sorted(octave_breakpoints(8.0, smallest=2.0)) == [2.0, 4.0]


def test_combine_results():
    panel = PanelRecord('global', 0.0, 1.0, 8, 1.0, 1e-9, True)
    first = IntegrationResult(1.0, 1e-9, True, 10, [panel])
    second = IntegrationResult(2.5, 2e-9, False, 5)
    total = IntegrationResult.combine([first, second])
    assert total.value == 3.5
    assert total.error_estimate == pytest.approx(3e-9)
    assert not total.converged
    assert total.n_evals == 15
    table = total.panel_table()
    assert list(table.columns) == ['part', 'a', 'b', 'sphere_order', 'value', 'error', 'converged']
    assert len(table) == 1
