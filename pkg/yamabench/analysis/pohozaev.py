# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
The Pohozaev functional of a field in volume and in surface form.

For a positive field with induced curvature :math:`K`

.. math::

    P(u, r) = \\frac{n-2}{2n} \\int_{B_o(r)} x \\cdot \\nabla K\\, u^{2n/(n-2)}\\, dx

equals

.. math::

    \\int_{S_r} \\left[ r u_r^2 - \\frac{r}{2} |\\nabla u|^2
    + \\frac{n-2}{2n} r K u^{2n/(n-2)} + \\frac{n-2}{2} u u_r \\right] dS,

and both vanish when :math:`K` is constant. The two forms share no
quadrature, so their agreement tests the curvature gradient and the
quadrature at once.
"""

from typing import Optional

import numpy
from typing_extensions import Literal

from yamabench.analysis.integrals import (
    field_ball_integral,
    field_settings,
    field_sphere_integral,
    peak_ball_integral,
)
from yamabench.fields import SolutionField
from yamabench.logging import debug, warning
from yamabench.quadrature import IntegrationResult, QuadratureSettings, SphereIntegral
from yamabench.serialisation_mixin import SerialisationMixin

__all__ = [
    'GradientMode',
    'PohozaevReport',
    'PohozaevNumber',
    'EnergyIdentity',
    'pohozaev_volume',
    'pohozaev_surface',
    'pohozaev_check',
    'pohozaev_number',
    'energy_identity',
]

#: How :math:`\\nabla K` is obtained: closed form or central differences of ``K``.
GradientMode = Literal['analytic', 'fd']

#: The identity checks allow this multiple of the combined error estimates.
ALLOWANCE_FACTOR = 10.0


def _power(values, exponent):
    return numpy.exp(exponent * numpy.log(values))


def pohozaev_volume(
    field: SolutionField,
    r: float,
    mode: GradientMode = 'analytic',
    settings: Optional[QuadratureSettings] = None,
) -> IntegrationResult:
    """
    :math:`\\frac{n-2}{2n} \\int_{B_o(r)} x \\cdot \\nabla K\\, u^{2n/(n-2)}\\, dx`.

    Parameters
    ----------
    field : SolutionField
        The field.
    r : float
        Radius of the ball.
    mode : str
        ``'analytic'`` uses the closed-form curvature gradient, ``'fd'``
        central differences of the closed-form curvature.
    settings : QuadratureSettings, optional
        Quadrature orders and tolerances.
    """
    if r <= 0:
        raise ValueError(f'The radius must be positive, got {r}')
    ctx = field.context
    factor = (ctx.n - 2) / (2.0 * ctx.n)

    if mode == 'analytic':

        def integrand(values, points):
            radial = numpy.einsum('ij,ij->i', points, values.curvature_gradient)
            return factor * radial * _power(values.value, ctx.q)

        result = field_ball_integral(field, r, integrand, settings)

    elif mode == 'fd':

        def f(offsets, origin):
            values = field.evaluate(offsets, origin, check=False)
            gradient = field.curvature_gradient_fd(offsets, origin)
            radial = numpy.einsum('ij,ij->i', origin + offsets, gradient)
            return factor * radial * _power(values.value, ctx.q)

        result = peak_ball_integral(field, r, f, settings)

    else:
        raise ValueError(f'Unknown curvature gradient mode {mode!r}')

    debug(f'[yamabench] P(u, {r:g}) = {result.value!r} by the volume form ({mode})')
    return result


def _surface_terms(
    field: SolutionField, r: float, settings: Optional[QuadratureSettings]
) -> SphereIntegral:
    """The surface integrand over the unit sphere, signed and absolute."""
    ctx = field.context
    factor = (ctx.n - 2) / (2.0 * ctx.n)

    def integrand(values, points):
        u = values.value
        u_r = numpy.einsum('ij,ij->i', points, values.gradient) / r
        grad2 = numpy.einsum('ij,ij->i', values.gradient, values.gradient)
        # K u^q = -u lap u
        terms = numpy.stack(
            [
                r * u_r * u_r,
                -0.5 * r * grad2,
                -factor * r * u * values.laplacian,
                ctx.m * u * u_r,
            ],
            axis=-1,
        )
        return numpy.stack([terms.sum(axis=-1), numpy.abs(terms).sum(axis=-1)], axis=-1)

    return field_sphere_integral(field, r, integrand, settings)


def pohozaev_surface(
    field: SolutionField, r: float, settings: Optional[QuadratureSettings] = None
) -> IntegrationResult:
    """
    The boundary form of :math:`P(u, r)` on the sphere :math:`S_r`.
    """
    if r <= 0:
        raise ValueError(f'The radius must be positive, got {r}')
    terms = _surface_terms(field, r, settings)
    area = r ** (field.n - 1)
    return IntegrationResult(
        value=area * float(terms.value[0]),
        error_estimate=area * terms.error_estimate,
        converged=terms.converged,
        n_evals=0,
    )


class PohozaevReport(SerialisationMixin):
    """
    Both forms of :math:`P(u, r)` and their discrepancy.
    """

    r: float
    mode: str
    P_volume: float
    P_surface: float
    discrepancy: float
    volume_error: float
    surface_error: float
    #: Largest discrepancy compatible with the quadrature accuracy.
    allowance: float
    converged: bool

    @property
    def consistent(self) -> bool:
        return self.discrepancy <= self.allowance


def pohozaev_check(
    field: SolutionField,
    r: float,
    mode: GradientMode = 'analytic',
    settings: Optional[QuadratureSettings] = None,
) -> PohozaevReport:
    """
    Compare the volume and surface forms of :math:`P(u, r)`.

    The allowance is ten times the sum of both error estimates plus the
    relative tolerance times the size of the surface integrand, which is
    what remains when the curvature is constant and both forms vanish.
    """
    settings = field_settings(field, settings)
    volume = pohozaev_volume(field, r, mode, settings)
    terms = _surface_terms(field, r, settings)
    area = r ** (field.n - 1)
    surface = area * float(terms.value[0])
    surface_error = area * terms.error_estimate
    scale = area * float(terms.value[1])

    discrepancy = abs(volume.value - surface)
    allowance = ALLOWANCE_FACTOR * (volume.error_estimate + surface_error) + settings.rtol * scale
    report = PohozaevReport(
        r=r,
        mode=mode,
        P_volume=volume.value,
        P_surface=surface,
        discrepancy=discrepancy,
        volume_error=volume.error_estimate,
        surface_error=surface_error,
        allowance=allowance,
        converged=volume.converged and terms.converged,
    )
    if not report.consistent:
        warning(
            f'[yamabench] Pohozaev forms differ by {discrepancy:.3e} at r={r:g} '
            f'(allowance {allowance:.3e})'
        )
    return report


class PohozaevNumber(SerialisationMixin):
    """
    :math:`P(u, r_{max})` as the estimate of the Pohozaev number, with the
    Cauchy tail :math:`|P(u, r_{max}) - P(u, r_{max}/2)|`.
    """

    r_max: float
    value: float
    half_value: float
    cauchy_tail: float
    error_estimate: float


def pohozaev_number(
    field: SolutionField,
    r_max: float,
    mode: GradientMode = 'analytic',
    settings: Optional[QuadratureSettings] = None,
) -> PohozaevNumber:
    full = pohozaev_volume(field, r_max, mode, settings)
    half = pohozaev_volume(field, 0.5 * r_max, mode, settings)
    return PohozaevNumber(
        r_max=r_max,
        value=full.value,
        half_value=half.value,
        cauchy_tail=abs(full.value - half.value),
        error_estimate=full.error_estimate + half.error_estimate,
    )


class EnergyIdentity(SerialisationMixin):
    """
    :math:`\\int_{B_o(r)} K u^q = \\int_{B_o(r)} |\\nabla u|^2 - \\int_{S_r} u\\, u_r`.
    """

    r: float
    curvature_mass: float
    dirichlet: float
    boundary_flux: float
    gap: float
    allowance: float
    converged: bool = True

    @property
    def holds(self) -> bool:
        return self.gap <= self.allowance


def energy_identity(
    field: SolutionField, r: float, settings: Optional[QuadratureSettings] = None
) -> EnergyIdentity:
    """
    Integration by parts of :math:`u \\Delta u` over :math:`B_o(r)`.
    """
    if r <= 0:
        raise ValueError(f'The radius must be positive, got {r}')
    settings = field_settings(field, settings)

    def mass(values, points):
        return -values.value * values.laplacian

    def dirichlet(values, points):
        return numpy.einsum('ij,ij->i', values.gradient, values.gradient)

    def flux(values, points):
        return values.value * numpy.einsum('ij,ij->i', points, values.gradient) / r

    curvature_mass = field_ball_integral(field, r, mass, settings)
    energy = field_ball_integral(field, r, dirichlet, settings)
    boundary = field_sphere_integral(field, r, flux, settings)
    area = r ** (field.n - 1)
    boundary_flux = area * float(boundary.value)
    boundary_error = area * boundary.error_estimate

    gap = abs(curvature_mass.value - (energy.value - boundary_flux))
    errors = curvature_mass.error_estimate + energy.error_estimate + boundary_error
    scale = abs(energy.value) + abs(boundary_flux)
    return EnergyIdentity(
        r=r,
        curvature_mass=curvature_mass.value,
        dirichlet=energy.value,
        boundary_flux=boundary_flux,
        gap=gap,
        allowance=ALLOWANCE_FACTOR * errors + settings.rtol * scale,
        converged=curvature_mass.converged and energy.converged and boundary.converged,
    )
