# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

import math

import numpy
import pytest
from pydantic import ValidationError

from yamabench import SamplingPlan, bubble_mass_fraction, make_context
from yamabench.construct import (
    ConstructionBParams,
    GrowthTable,
    build_prescribed_growth,
    choose_lambda_ring,
    ring_centers,
    ring_count,
    ring_layout,
    ring_radius_min,
    verify_prescribed_growth,
)


@pytest.fixture(name='quadratic')
def fixture_quadratic():
    return GrowthTable.from_function(lambda r: r * r, range(11))


@pytest.fixture(name='params')
def fixture_params(quadratic):
    return ConstructionBParams(n=3, k_max=6, phi=quadratic)


def test_growth_table(quadratic):
    assert quadratic(3.0) == 9.0
    assert quadratic(2.5) == pytest.approx(6.5)
    assert quadratic(20.0) == 100.0
    assert numpy.allclose(quadratic(numpy.array([1.0, 2.0])), [1.0, 4.0])
    assert quadratic.normalised(5.0)(1.0) == 5.0
    assert quadratic.normalised(5.0)(4.0) == 16.0


@pytest.mark.parametrize(
    'points',
    [
        [(0.0, 1.0), (1.0, 0.5)],
        [(0.0, 1.0), (0.0, 2.0)],
        [(-1.0, 1.0), (1.0, 2.0)],
        [(0.0, 1.0), (1.0, float('inf'))],
        [],
    ],
)
def test_growth_table_invalid(points):
    with pytest.raises(ValidationError):
        GrowthTable(points=points)


def test_ring_counts(quadratic):
    ctx = make_context(3)
    counts = [ring_count(ctx, quadratic, k) for k in range(1, 7)]
    assert counts == [2, 3, 4, 6, 8, 10]


def test_ring_count_exact_quotient():
    ctx = make_context(3)
    assert ring_count(ctx, lambda r: 10.0 * ctx.V_n, 1) == 20
    assert ring_count(ctx, lambda r: 0.0, 1) == 1


def test_ring_centers():
    centers = ring_centers(3, 4, 6)
    assert len(centers) == 6
    assert numpy.allclose(numpy.linalg.norm(centers, axis=-1), 4.0)
    assert centers[-1] == pytest.approx((0.0, 4.0, 0.0), abs=1e-12)
    assert all(c[2] == 0.0 for c in centers)


def test_choose_lambda_ring():
    ctx = make_context(3)
    lam = choose_lambda_ring(ctx, 0.1, 4, 3.0)
    rho = ring_radius_min(4)
    assert rho == pytest.approx(math.pi / 40.0)
    assert float(bubble_mass_fraction(3, rho / lam)) >= 0.5
    with pytest.raises(ValueError):
        choose_lambda_ring(ctx, 0.1, 0, 3.0)


def test_layout(params):
    rings = ring_layout(params)
    assert [ring.count for ring in rings] == [2, 3, 4, 6, 8, 10]
    base = params.eps_rule.values(6)
    assert [ring.eps for ring in rings] == pytest.approx([b / r.count for b, r in zip(base, rings)])


def test_normalised_counts(quadratic):
    params = ConstructionBParams(n=3, k_max=2, phi=quadratic, normalize_phi=True)
    assert [ring.count for ring in ring_layout(params)] == [20, 20]


def test_params_invalid_eps(quadratic):
    with pytest.raises(ValidationError):
        ConstructionBParams(
            n=3,
            k_max=3,
            phi=quadratic,
            eps_rule={'class_name': 'GeometricSequence', 'ratio': 0.7},
        )


def test_build(params):
    field = build_prescribed_growth(params)
    assert field.baseline
    assert len(field.bubbles) == 2 + 3 + 4 + 6 + 8 + 10
    assert field.active_dims == 2
    assert field.phi[3] == (3.0, 9.0)
    norms = [term.center_norm for term in field.bubbles]
    assert norms[:2] == pytest.approx([1.0, 1.0])
    assert norms[-10:] == pytest.approx([6.0] * 10)


def test_verify(params):
    field = build_prescribed_growth(params)
    plan = SamplingPlan(grid_radius=10.0, grid_resolution=15, ray_samples=21, local_shells=4)
    report = verify_prescribed_growth(field, params, plan)
    assert report.passed
    failed = [c for c in report.checks if not c.passed]
    # phi(0) = 0 is below the normalisation, which is reported but not required
    assert [c.name for c in failed] == ['phi_normalisation']
    assert list(report.bubbles['N_k']) == [2, 3, 4, 6, 8, 10]
    assert all(report.bubbles['mass_fraction'] >= 0.5)
