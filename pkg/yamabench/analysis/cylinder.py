# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Cylindrical coordinates :math:`s = \\ln |x|`, :math:`\\theta = x/|x|` and
the transformed field :math:`v(s, \\theta) = e^{s(n-2)/2} u(e^s \\theta)`,
which solves

.. math::

    \\partial_s^2 v + \\Delta_\\theta v - \\frac{(n-2)^2}{4} v + K v^{(n+2)/(n-2)} = 0

on :math:`\\mathbb{R} \\times S^{n-1}`.
"""

from dataclasses import dataclass
import math
from typing import Callable, NamedTuple, Optional

import numpy

from yamabench.analysis.integrals import angular_widths, field_settings, field_sphere_integral
from yamabench.analysis.pohozaev import ALLOWANCE_FACTOR, pohozaev_volume
from yamabench.fields import SolutionField
from yamabench.quadrature import (
    QuadratureSettings,
    SphereIntegral,
    sphere_integrate_adaptive,
    sphere_rule,
)
from yamabench.serialisation_mixin import SerialisationMixin

__all__ = [
    'CylinderValues',
    'CylinderField',
    'tangent_basis',
    'cylinder_residual',
    'w_energy',
    'WIdentityCheck',
    'w_identity_check',
    'BoundaryQuantities',
    'boundary_quantities',
]


class CylinderValues(NamedTuple):
    """:math:`v`, :math:`\\partial_s v`, :math:`\\nabla_\\theta v` and ``K`` at cylinder points."""

    v: numpy.ndarray
    v_s: numpy.ndarray
    grad_theta: numpy.ndarray
    curvature: numpy.ndarray


@dataclass
class CylinderField:
    """
    A solution field in cylindrical coordinates.

    Attributes
    ----------
    source : SolutionField
        The field on :math:`\\mathbb{R}^n`.
    """

    source: SolutionField

    @property
    def n(self) -> int:
        return self.source.n

    def evaluate(self, s, theta) -> CylinderValues:
        """
        Values at ``(s, theta)`` for unit vectors ``theta`` of shape ``(N, n)``
        and ``s`` a scalar or an array of shape ``(N,)``.

        By the chain rule :math:`\\partial_s v = r^{n/2} (u_r + \\frac{n-2}{2} u/r)`
        and :math:`\\nabla_\\theta v = r^{n/2} (\\nabla u - u_r \\theta)`.
        """
        theta = numpy.atleast_2d(numpy.asarray(theta, dtype=float))
        m = 0.5 * (self.n - 2)
        r = numpy.broadcast_to(numpy.exp(numpy.asarray(s, dtype=float)), theta.shape[:1])
        values = self.source.evaluate(r[:, None] * theta, check=False)
        u_r = numpy.einsum('ij,ij->i', values.gradient, theta)
        r_m = r**m
        v = r_m * values.value
        v_s = r_m * (r * u_r + m * values.value)
        grad_theta = (r_m * r)[:, None] * (values.gradient - u_r[:, None] * theta)
        return CylinderValues(v, v_s, grad_theta, values.curvature)

    def v(self, s, theta) -> numpy.ndarray:
        theta = numpy.atleast_2d(numpy.asarray(theta, dtype=float))
        r = numpy.broadcast_to(numpy.exp(numpy.asarray(s, dtype=float)), theta.shape[:1])
        return r ** (0.5 * (self.n - 2)) * self.source.value(r[:, None] * theta)

    def reconstruct_u(self, x) -> numpy.ndarray:
        """:math:`u(x) = |x|^{(2-n)/2} v(\\ln |x|, x/|x|)`."""
        x = numpy.atleast_2d(numpy.asarray(x, dtype=float))
        r = numpy.linalg.norm(x, axis=-1)
        return r ** (-0.5 * (self.n - 2)) * self.v(numpy.log(r), x / r[:, None])

    def sphere_integral(
        self,
        s: float,
        integrand: Callable[[CylinderValues], numpy.ndarray],
        settings: Optional[QuadratureSettings] = None,
        order: Optional[int] = None,
    ) -> SphereIntegral:
        """
        :math:`\\int_{S^{n-1}} g(s, \\theta)\\, d\\theta`, adaptively or with a
        fixed sphere ``order``.
        """
        active = self.source.active_dims
        if order is not None:
            rule = sphere_rule(self.n, order, active)
            values = numpy.asarray(integrand(self.evaluate(s, rule.nodes)), dtype=float)
            return SphereIntegral(
                numpy.tensordot(rule.weights, values, axes=(0, 0)), 0.0, True, order
            )
        r = math.exp(s)
        return sphere_integrate_adaptive(
            lambda points: integrand(self.evaluate(s, points / r)),
            self.n,
            r,
            active_dims=active,
            settings=field_settings(self.source, settings),
            widths=angular_widths(self.source, r),
        )


def tangent_basis(theta: numpy.ndarray) -> numpy.ndarray:
    """
    Orthonormal bases of the tangent spaces of :math:`S^{n-1}` at ``theta``,
    shape ``(N, n, n - 1)``.

    Columns ``1 .. n-1`` of the Householder reflection that maps ``e_1`` to
    :math:`\\pm\\theta`.
    """
    theta = numpy.atleast_2d(theta)
    count, n = theta.shape
    sign = numpy.where(theta[:, 0] >= 0.0, 1.0, -1.0)
    w = theta.copy()
    w[:, 0] += sign
    norm2 = numpy.einsum('ij,ij->i', w, w)
    eye = numpy.broadcast_to(numpy.eye(n)[:, 1:], (count, n, n - 1))
    return eye - 2.0 * w[:, :, None] * w[:, None, 1:] / norm2[:, None, None]


def cylinder_residual(
    cyl: CylinderField,
    s: float,
    theta_grid: Optional[numpy.ndarray] = None,
    step_s: float = 1e-4,
    step_theta: float = 1e-3,
    curvature: Optional[float] = None,
) -> float:
    """
    :math:`\\max_\\theta |\\partial_s^2 v + \\Delta_\\theta v - \\frac{(n-2)^2}{4} v + K v^p|`.

    :math:`\\partial_s^2 v` is a central second difference in ``s`` and
    :math:`\\Delta_\\theta v` the sum of second differences along the
    :math:`n-1` great circles through each node in the directions of an
    orthonormal tangent basis. ``curvature`` replaces the induced curvature
    by a constant.
    """
    n = cyl.n
    if theta_grid is None:
        theta_grid = sphere_rule(n, 8, cyl.source.active_dims).nodes
    theta = numpy.atleast_2d(numpy.asarray(theta_grid, dtype=float))
    ctx = cyl.source.context

    centre = cyl.evaluate(s, theta)
    v = centre.v
    v_ss = (cyl.v(s + step_s, theta) - 2.0 * v + cyl.v(s - step_s, theta)) / step_s**2

    basis = tangent_basis(theta)
    lap_theta = numpy.zeros_like(v)
    cos, sin = math.cos(step_theta), math.sin(step_theta)
    for i in range(n - 1):
        direction = basis[:, :, i]
        plus = cyl.v(s, cos * theta + sin * direction)
        minus = cyl.v(s, cos * theta - sin * direction)
        lap_theta += (plus - 2.0 * v + minus) / step_theta**2

    K = centre.curvature if curvature is None else curvature
    residual = v_ss + lap_theta - ctx.m**2 * v + K * numpy.exp(ctx.p * numpy.log(v))
    return float(numpy.max(numpy.abs(residual)))


def w_energy(
    cyl: CylinderField, s: float, settings: Optional[QuadratureSettings] = None
) -> float:
    """:math:`w(s) = \\frac12 \\int_{S^{n-1}} v^2(s, \\theta)\\, d\\theta`."""
    return 0.5 * float(cyl.sphere_integral(s, lambda c: c.v * c.v, settings).value)


class WIdentityCheck(SerialisationMixin):
    """
    The second derivative of :math:`w` and the Pohozaev functional in
    cylindrical variables, each compared with an independent computation.
    """

    s: float
    w: float
    #: Five-point difference quotient of ``w``.
    w_second_fd: float
    #: :math:`\\int (v_s^2 + |\\nabla_\\theta v|^2 + \\frac{(n-2)^2}{4} v^2
    #: - K v^q)\\, d\\theta`.
    w_second_identity: float
    w_second_gap: float
    #: Cylinder form of the Pohozaev functional,
    #: :math:`\\int (v_s^2 - |\\nabla_\\theta v|^2 - \\frac{(n-2)^2}{4} v^2
    #: + \\frac{n-2}{n} K v^q)\\, d\\theta`.
    pohozaev_cylinder: float
    #: :math:`2 P(u, e^s)` from the volume form.
    pohozaev_volume_twice: float
    pohozaev_gap: float
    pohozaev_allowance: float
    sphere_order: int


def w_identity_check(
    cyl: CylinderField,
    s: float,
    step: float = 0.02,
    settings: Optional[QuadratureSettings] = None,
) -> WIdentityCheck:
    """
    Check the expressions of :math:`w''(s)` and of :math:`2 P(u, e^s)` as
    sphere integrals of :math:`v` and its derivatives.

    All sphere integrals of the difference stencil use the order the
    adaptive rule settles on at ``s``.
    """
    ctx = cyl.source.context
    settings = field_settings(cyl.source, settings)
    m2 = ctx.m**2

    def integrand(c: CylinderValues):
        kinetic = c.v_s * c.v_s
        angular = numpy.einsum('ij,ij->i', c.grad_theta, c.grad_theta)
        mass = m2 * c.v * c.v
        potential = c.curvature * numpy.exp(ctx.q * numpy.log(c.v))
        return numpy.stack(
            [
                c.v * c.v,
                kinetic + angular + mass - potential,
                kinetic - angular - mass + (ctx.n - 2) / ctx.n * potential,
                kinetic + angular + mass + (ctx.n - 2) / ctx.n * numpy.abs(potential),
            ],
            axis=-1,
        )

    centre = cyl.sphere_integral(s, integrand, settings)
    order = centre.order
    w = [
        0.5 * float(cyl.sphere_integral(s + j * step, lambda c: c.v * c.v, order=order).value)
        for j in (-2, -1, 1, 2)
    ]
    w0 = 0.5 * float(centre.value[0])
    w_second = (-w[0] + 16.0 * w[1] - 30.0 * w0 + 16.0 * w[2] - w[3]) / (12.0 * step * step)

    volume = pohozaev_volume(cyl.source, math.exp(s), settings=settings)
    identity = float(centre.value[1])
    cylinder = float(centre.value[2])
    gap = abs(cylinder - 2.0 * volume.value)
    allowance = (
        ALLOWANCE_FACTOR * (2.0 * volume.error_estimate + centre.error_estimate)
        + settings.rtol * float(centre.value[3])
    )
    return WIdentityCheck(
        s=s,
        w=w0,
        w_second_fd=w_second,
        w_second_identity=identity,
        w_second_gap=abs(w_second - identity),
        pohozaev_cylinder=cylinder,
        pohozaev_volume_twice=2.0 * volume.value,
        pohozaev_gap=gap,
        pohozaev_allowance=allowance,
        sphere_order=order,
    )


class BoundaryQuantities(SerialisationMixin):
    """
    Sphere integrals on :math:`S_r`, :math:`r = e^s`, computed from ``u`` in
    Cartesian variables and from ``v`` in cylindrical variables.
    """

    s: float
    r: float
    #: :math:`\\int_{S_r} u^2/r\\, dS`.
    l2_surface: float
    #: :math:`2 w(s)`.
    l2_cylinder: float
    #: :math:`\\int_{S_r} r (u_r + \\frac{n-2}{2} u/r)^2\\, dS`.
    flux_surface: float
    #: :math:`\\int (\\partial_s v)^2\\, d\\theta`.
    flux_cylinder: float
    #: :math:`\\int_{S_r} u^{2n/(n-2)}\\, dS`.
    density_surface: float
    #: :math:`r^{-1} \\int v^{2n/(n-2)}\\, d\\theta`.
    density_cylinder: float

    @property
    def max_relative_gap(self) -> float:
        pairs = [
            (self.l2_surface, self.l2_cylinder),
            (self.flux_surface, self.flux_cylinder),
            (self.density_surface, self.density_cylinder),
        ]
        return max(abs(a - b) / max(abs(a), abs(b), 1e-300) for a, b in pairs)


def boundary_quantities(
    cyl: CylinderField, s: float, settings: Optional[QuadratureSettings] = None
) -> BoundaryQuantities:
    ctx = cyl.source.context
    r = math.exp(s)
    area = r ** (ctx.n - 1)

    def cartesian(values, points):
        u = values.value
        u_r = numpy.einsum('ij,ij->i', points, values.gradient) / r
        shifted = u_r + ctx.m * u / r
        return area * numpy.stack(
            [u * u / r, r * shifted * shifted, numpy.exp(ctx.q * numpy.log(u))], axis=-1
        )

    def cylindrical(c: CylinderValues):
        return numpy.stack(
            [c.v * c.v, c.v_s * c.v_s, numpy.exp(ctx.q * numpy.log(c.v)) / r], axis=-1
        )

    x_form = field_sphere_integral(cyl.source, r, cartesian, settings).value
    v_form = cyl.sphere_integral(s, cylindrical, settings).value
    return BoundaryQuantities(
        s=s,
        r=r,
        l2_surface=float(x_form[0]),
        l2_cylinder=float(v_form[0]),
        flux_surface=float(x_form[1]),
        flux_cylinder=float(v_form[1]),
        density_surface=float(x_form[2]),
        density_cylinder=float(v_form[2]),
    )
