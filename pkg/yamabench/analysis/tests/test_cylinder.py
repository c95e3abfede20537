# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

import math

import numpy
import pytest

from yamabench import (
    CylinderField,
    CylinderValues,
    WIdentityCheck,
    boundary_quantities,
    cylinder_residual,
    sphere_rule,
    tangent_basis,
    w_energy,
    w_identity_check,
)


def _unit_vectors(rng, count, n=3):
    theta = rng.normal(size=(count, n))
    return theta / numpy.linalg.norm(theta, axis=-1)[:, None]


def test_cylinder_baseline_profile(baseline_field, rng):
    """:math:`v(s, \\theta) = \\alpha_3 (2 \\cosh s)^{-1/2}` for the baseline bubble."""
    cyl = CylinderField(baseline_field)
    theta = _unit_vectors(rng, 16)
    alpha = 3.0**0.25

    for s in [-2.0, 0.0, 0.7]:
        expected = alpha * (2.0 * math.cosh(s)) ** -0.5
        assert numpy.allclose(cyl.v(s, theta), expected, rtol=1e-13, atol=0.0)

        values = cyl.evaluate(s, theta)
        assert numpy.allclose(values.v, expected, rtol=1e-13, atol=0.0)
        assert numpy.allclose(values.v_s, -0.5 * math.tanh(s) * expected, rtol=1e-12, atol=1e-15)
        assert numpy.allclose(values.grad_theta, 0.0, atol=1e-14)
        assert numpy.allclose(values.curvature, 1.0, rtol=1e-13)

    assert numpy.allclose(cyl.v(1.3, theta), cyl.v(-1.3, theta), rtol=1e-13)


def test_cylinder_array_s(offset_field, rng):
    cyl = CylinderField(offset_field)
    theta = _unit_vectors(rng, 5)
    s = numpy.linspace(-1.0, 1.0, 5)

    values = cyl.evaluate(s, theta)
    assert values.v.shape == (5,)
    assert values.grad_theta.shape == (5, 3)
    for i in range(5):
        assert values.v[i] == pytest.approx(float(cyl.v(s[i], theta[i])), rel=1e-14)


def test_cylinder_reconstruct(offset_field, flat_field, rng):
    x = 3.0 * rng.normal(size=(20, 3))
    for field in [offset_field, flat_field]:
        cyl = CylinderField(field)
        assert numpy.allclose(cyl.reconstruct_u(x), field.value(x), rtol=1e-12, atol=0.0)


def test_cylinder_angular_gradient(offset_field, rng):
    """The angular gradient is tangent to the sphere."""
    cyl = CylinderField(offset_field)
    theta = _unit_vectors(rng, 10)
    values = cyl.evaluate(0.4, theta)

    radial = numpy.einsum('ij,ij->i', values.grad_theta, theta)
    assert numpy.allclose(radial, 0.0, atol=1e-12)


def test_tangent_basis(rng):
    theta = _unit_vectors(rng, 12, n=4)
    theta[0] = (-1.0, 0.0, 0.0, 0.0)
    theta[1] = (1.0, 0.0, 0.0, 0.0)
    basis = tangent_basis(theta)

    assert basis.shape == (12, 4, 3)
    gram = numpy.einsum('kia,kib->kab', basis, basis)
    assert numpy.allclose(gram, numpy.eye(3), atol=1e-13)
    assert numpy.allclose(numpy.einsum('ki,kia->ka', theta, basis), 0.0, atol=1e-13)


def test_w_energy_baseline(baseline_field):
    """:math:`w(0) = \\frac12 \\cdot 4\\pi \\cdot \\sqrt{3}/2` in three dimensions."""
    cyl = CylinderField(baseline_field)
    assert w_energy(cyl, 0.0) == pytest.approx(math.pi * math.sqrt(3.0), rel=1e-12)
    assert w_energy(cyl, 2.0) == pytest.approx(w_energy(cyl, -2.0), rel=1e-12)


@pytest.mark.parametrize('s', [-1.0, 0.0, 1.5])
def test_cylinder_residual_exact(baseline_field, flat_field, s):
    for field in [baseline_field, flat_field]:
        assert cylinder_residual(CylinderField(field), s) < 1e-6


def test_cylinder_residual_wrong_curvature(baseline_field):
    """Imposing ``K = 2`` leaves the term :math:`v^5` as the residual."""
    cyl = CylinderField(baseline_field)
    v = 3.0**0.25 / math.sqrt(2.0)

    residual = cylinder_residual(cyl, 0.0, curvature=2.0)
    assert residual == pytest.approx(v**5, rel=1e-5)


def test_cylinder_residual_offset(offset_field):
    cyl = CylinderField(offset_field)
    theta = sphere_rule(3, 16).nodes
    assert cylinder_residual(cyl, 0.0, theta_grid=theta) < 1e-4


@pytest.mark.parametrize('s', [-0.5, 0.3])
def test_w_identity_check(baseline_field, flat_field, s):
    for field in [baseline_field, flat_field]:
        check = w_identity_check(CylinderField(field), s)

        assert check.s == s
        assert check.w > 0.0
        assert check.w_second_gap < 1e-5 * max(1.0, abs(check.w_second_identity))
        assert check.pohozaev_gap <= check.pohozaev_allowance
        assert check.sphere_order >= 2


def test_w_identity_baseline_closed_form(baseline_field):
    """
    :math:`w(s) = \\pi \\sqrt{3} / \\cosh s`, whose second derivative at zero
    is :math:`-\\pi \\sqrt{3}`.
    """
    check = w_identity_check(CylinderField(baseline_field), 0.0)

    assert check.w == pytest.approx(math.pi * math.sqrt(3.0), rel=1e-12)
    assert check.w_second_identity == pytest.approx(-math.pi * math.sqrt(3.0), rel=1e-10)
    assert abs(check.pohozaev_volume_twice) < 1e-12


@pytest.mark.parametrize('s', [-1.0, 0.5, 2.0])
def test_boundary_quantities(offset_field, flat_field, s):
    for field in [offset_field, flat_field]:
        quantities = boundary_quantities(CylinderField(field), s)

        assert quantities.r == pytest.approx(math.exp(s))
        assert quantities.l2_cylinder > 0.0
        assert quantities.density_cylinder > 0.0
        assert quantities.max_relative_gap < 1e-6


@pytest.mark.parametrize('obj', [CylinderValues, CylinderField.evaluate, WIdentityCheck])
def test_cylinder_docstrings(obj):
    """Rendered docstrings carry only reST, never attribute comments."""
    assert '#:' not in obj.__doc__
    assert obj.__doc__.count('`') % 2 == 0


def test_cylinder_docstrings_angular_gradient():
    assert ':math:`\\nabla_\\theta v`' in CylinderValues.__doc__
    assert ':math:`\\nabla_\\theta v = r^{n/2} (\\nabla u - u_r \\theta)`' in (
        CylinderField.evaluate.__doc__
    )
