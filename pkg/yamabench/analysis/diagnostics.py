# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Measured hypotheses of the classification results over a grid of
:math:`s = \\ln r`.

Asymptotic conditions cannot be decided numerically; they are reported over
the grid, with the radii beyond ``onset_radius`` flagged.
"""

import math
from typing import Optional, Sequence

import numpy
import pandas as pd
from pydantic import Field

from yamabench.analysis.cylinder import CylinderField, CylinderValues
from yamabench.analysis.growth import pointwise_directions
from yamabench.analysis.pohozaev import pohozaev_volume
from yamabench.fields import SolutionField
from yamabench.logging import header, info
from yamabench.pydantic_utils import PydanticDataFrame
from yamabench.quadrature import QuadratureSettings
from yamabench.serialisation_mixin import SerialisationMixin

__all__ = ['DiagnosticsSettings', 'DiagnosticsReport', 'diagnostics']


class DiagnosticsSettings(SerialisationMixin):
    """
    Constants of the measured hypotheses.
    """

    #: Additive constant in :math:`|\\partial_s v| \\le C + C' v`.
    c11: float = Field(default=1.0, ge=0)
    #: Rate of the exponential weight of the flux :math:`\\int |\\partial_s v|^q d\\theta`.
    decay_rate: float = Field(default=1.0, gt=0)
    #: Exponent :math:`\\epsilon` of the weight :math:`(\\ln r)^{1+\\epsilon}`.
    log_eps: float = Field(default=0.1, gt=0)
    #: Radii from here on count as large.
    onset_radius: float = Field(default=10.0, gt=0)
    #: Sphere order of the pointwise maxima and minima.
    angular_order: int = Field(default=32, ge=2)


class DiagnosticsReport(SerialisationMixin):
    """
    One row per grid point, plus the infimum of :math:`P(u, r)` over the grid.
    """

    settings: DiagnosticsSettings
    table: PydanticDataFrame
    #: :math:`\\inf_r P(u, r)` over the grid.
    pohozaev_inf: float
    #: :math:`\\delta = \\sqrt{\\max(0, -\\inf P)}`, the smallest admissible
    #: constant in :math:`P(u, r) \\ge -\\delta^2`.
    delta_candidate: float


def diagnostics(
    field: SolutionField,
    s_grid: Sequence[float],
    settings: Optional[DiagnosticsSettings] = None,
    quadrature: Optional[QuadratureSettings] = None,
) -> DiagnosticsReport:
    """
    Measure, for every ``s`` of the grid and :math:`r = e^s`:

    * ``kinetic_ratio``: :math:`\\int v_s^2 d\\theta / (1 + \\int v^2 d\\theta)`,
    * ``max_log_derivative``: :math:`\\max_\\theta |v_s|/v`,
    * ``derivative_excess``: :math:`\\max_\\theta (|v_s| - C)/v`,
    * ``weighted_flux``: :math:`e^{-\\lambda s} \\int |v_s|^{2n/(n-2)} d\\theta`,
    * ``radial_curvature_floor``: :math:`\\min_\\theta r^2 \\partial_r K`,
    * ``log_radial_curvature_floor``:
      :math:`\\min_\\theta r^{(n+2)/2} (\\ln r)^{1+\\epsilon} \\partial_r K`,
    * ``two_w`` and ``flux``: :math:`\\int v^2 d\\theta` and :math:`\\int v_s^2 d\\theta`,
    * ``sphere_volume_density``: :math:`r^n \\int u^{2n/(n-2)} d\\theta`,
    * ``pohozaev``: :math:`P(u, r)` with its error estimate.
    """
    settings = DiagnosticsSettings() if settings is None else settings
    header(f'[yamabench] Diagnostics over {len(s_grid)} radii')
    ctx = field.context
    cyl = CylinderField(field)
    directions = pointwise_directions(field, settings.angular_order)

    def moments(c: CylinderValues):
        return numpy.stack(
            [
                c.v * c.v,
                c.v_s * c.v_s,
                numpy.exp(ctx.q * numpy.log(numpy.abs(c.v_s) + 1e-300)),
                numpy.exp(ctx.q * numpy.log(c.v)),
            ],
            axis=-1,
        )

    rows = []
    for s in s_grid:
        s = float(s)
        r = math.exp(s)
        integrals = cyl.sphere_integral(s, moments, quadrature)
        two_w, flux, flux_q, density = (float(x) for x in integrals.value)

        pointwise = cyl.evaluate(s, directions)
        ratio = numpy.abs(pointwise.v_s) / pointwise.v
        excess = (numpy.abs(pointwise.v_s) - settings.c11) / pointwise.v

        gradient = field.curvature_gradient(r * directions)
        k_r = numpy.einsum('ij,ij->i', gradient, directions)
        floor = r * r * float(numpy.min(k_r))
        if r > 1.0:
            log_floor = (
                r ** (0.5 * (ctx.n + 2))
                * math.log(r) ** (1.0 + settings.log_eps)
                * float(numpy.min(k_r))
            )
        else:
            log_floor = math.nan

        pohozaev = pohozaev_volume(field, r, settings=quadrature)
        rows.append(
            [
                s,
                r,
                r >= settings.onset_radius,
                flux / (1.0 + two_w),
                float(numpy.max(ratio)),
                float(numpy.max(excess)),
                math.exp(-settings.decay_rate * s) * flux_q,
                floor,
                log_floor,
                two_w,
                flux,
                density,
                pohozaev.value,
                pohozaev.error_estimate + integrals.error_estimate,
            ]
        )

    table = pd.DataFrame(
        rows,
        columns=[
            's',
            'r',
            'beyond_onset',
            'kinetic_ratio',
            'max_log_derivative',
            'derivative_excess',
            'weighted_flux',
            'radial_curvature_floor',
            'log_radial_curvature_floor',
            'two_w',
            'flux',
            'sphere_volume_density',
            'pohozaev',
            'err_estimate',
        ],
    )
    pohozaev_inf = float(table['pohozaev'].min()) if len(table) else math.nan
    delta = math.sqrt(max(0.0, -pohozaev_inf)) if len(table) else math.nan
    info(f'[yamabench] inf P(u, r) = {pohozaev_inf!r}, delta = {delta!r}')
    return DiagnosticsReport(
        settings=settings, table=table, pohozaev_inf=pohozaev_inf, delta_candidate=delta
    )
