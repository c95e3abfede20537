# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Ball and sphere integrals of quantities derived from a solution field.
"""

from typing import Callable, List, Optional

import numpy

from yamabench.fields import FieldValues, SolutionField
from yamabench.quadrature import (
    BallIntegrand,
    IntegrationResult,
    QuadratureSettings,
    SphereIntegral,
    ball_integrate,
    sphere_integrate_adaptive,
)

__all__ = [
    'FieldIntegrand',
    'peak_ball_integral',
    'field_settings',
    'field_ball_integral',
    'field_sphere_integral',
    'angular_widths',
]

#: ``integrand(values, points)`` with the field values at the absolute ``points``.
FieldIntegrand = Callable[[FieldValues, numpy.ndarray], numpy.ndarray]


def field_settings(
    field: SolutionField, settings: Optional[QuadratureSettings] = None
) -> QuadratureSettings:
    """Settings with the tolerance resolved for the sharpest bubble of ``field``."""
    settings = QuadratureSettings() if settings is None else settings
    scales = [term.lam for term in field.standard_terms()]
    return settings.resolved(min(scales, default=1.0))


def field_ball_integral(
    field: SolutionField,
    R: float,
    integrand: FieldIntegrand,
    settings: Optional[QuadratureSettings] = None,
) -> IntegrationResult:
    """
    :math:`\\int_{B_o(R)} g(u, \\nabla u, \\Delta u, K, \\nabla K; x)\\, dx`.
    """

    def f(offsets, origin):
        values = field.evaluate(offsets, origin, check=False)
        return integrand(values, origin + offsets)

    return peak_ball_integral(field, R, f, settings)


def peak_ball_integral(
    field: SolutionField,
    R: float,
    f: BallIntegrand,
    settings: Optional[QuadratureSettings] = None,
) -> IntegrationResult:
    """
    :func:`ball_integrate` of ``f(offsets, origin)`` with the peaks, radial
    scales and symmetry of ``field``.
    """
    settings = field_settings(field, settings)
    peaks = [
        (peak.center, peak.lam, peak.radius) for peak in field.peaks(settings.local_radius)
    ]
    return ball_integrate(
        f,
        R,
        field.n,
        peaks=peaks,
        scales=field.radial_scales(settings.local_radius),
        active_dims=field.active_dims,
        settings=settings,
    )


def angular_widths(field: SolutionField, r: float) -> List[float]:
    """
    Angular widths of the bubbles of ``field`` seen on the sphere of radius ``r``.
    """
    widths = []
    for peak in field.peaks():
        distance = float(numpy.linalg.norm(peak.center))
        widths.append(min(numpy.pi, max(peak.lam, abs(r - distance)) / r))
    return widths


def field_sphere_integral(
    field: SolutionField,
    r: float,
    integrand: FieldIntegrand,
    settings: Optional[QuadratureSettings] = None,
) -> SphereIntegral:
    """
    :math:`\\int_{S^{n-1}} g(r\\theta)\\, d\\theta`; the surface integral over
    :math:`S_r` is this value times :math:`r^{n-1}`.

    ``integrand`` may return several columns, which are integrated together.
    """
    settings = field_settings(field, settings)

    def f(points):
        return integrand(field.evaluate(points, check=False), points)

    return sphere_integrate_adaptive(
        f,
        field.n,
        r,
        active_dims=field.active_dims,
        settings=settings,
        widths=angular_widths(field, r),
    )
