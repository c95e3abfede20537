# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
The verification suites run by ``yamabench verify``.

Each suite adds its checks, result sections and tables to a
:any:`VerificationReport`.
"""

import math
from typing import Callable, Dict, List

import numpy
import pandas as pd

from yamabench.analysis import (
    CylinderField,
    boundary_quantities,
    cylinder_residual,
    dirichlet_growth,
    energy_identity,
    pohozaev_check,
    pointwise_directions,
    slow_decay_measure,
    sphere_lp_table,
    volume_growth,
    w_identity_check,
)
from yamabench.command_line.run_config import RunConfig
from yamabench.construct import curvature_check
from yamabench.fields import SolutionField, curvature_bounds
from yamabench.logging import header
from yamabench.results import CheckResult, VerificationReport

__all__ = [
    'SUITES',
    'SUITE_NAMES',
    'CYLINDER_RESIDUAL_BOUND',
    'curvature_suite',
    'pohozaev_suite',
    'growth_suite',
    'cylinder_suite',
    'run_suites',
]

#: Bounds of the cylinder checks.
CYLINDER_RESIDUAL_BOUND = 1e-6
W_SECOND_BOUND = 1e-4
BOUNDARY_GAP_BOUND = 1e-8
#: Round-trip target and the bound the check enforces.
ROUND_TRIP_TARGET = 1e-13
ROUND_TRIP_BOUND = 1e-11


def curvature_suite(field: SolutionField, config: RunConfig, report: VerificationReport):
    """Bracket of the induced curvature over the sampling plan."""
    header('[yamabench] Suite curvature')
    bounds = curvature_bounds(field, config.sampling)
    report.data['curvature'] = bounds.dump_config()
    report.add(*curvature_check(field, config.sampling, bounds))


def pohozaev_suite(field: SolutionField, config: RunConfig, report: VerificationReport):
    """
    Volume against surface form of :math:`P(u, r)`, and the energy identity,
    on every radius of ``grids.pohozaev_radii``.
    """
    header('[yamabench] Suite pohozaev')
    settings = config.quadrature_settings()
    rows = []
    for r in config.grids.pohozaev_radii:
        check = pohozaev_check(field, r, settings=settings)
        report.add(
            CheckResult.at_most(
                f'pohozaev_forms[r={r:g}]',
                check.discrepancy,
                check.allowance,
                error_estimate=check.volume_error + check.surface_error,
                note=f'P={check.P_volume:.6e}',
            )
        )
        energy = energy_identity(field, r, settings)
        report.add(
            CheckResult.at_most(f'energy_identity[r={r:g}]', energy.gap, energy.allowance)
        )
        rows.append(
            [
                r,
                check.P_volume,
                check.P_surface,
                check.discrepancy,
                check.volume_error + check.surface_error,
                check.allowance,
                energy.curvature_mass,
                energy.dirichlet,
                energy.boundary_flux,
                energy.gap,
                check.converged and energy.converged,
            ]
        )
    report.frames['pohozaev'] = pd.DataFrame(
        rows,
        columns=[
            'r',
            'P_volume',
            'P_surface',
            'discrepancy',
            'err_estimate',
            'allowance',
            'curvature_mass',
            'dirichlet',
            'boundary_flux',
            'energy_gap',
            'converged',
        ],
    )


def _ring_radius_max(field: SolutionField) -> float:
    return max((term.center_norm for term in field.bubbles), default=0.0)


def growth_suite(field: SolutionField, config: RunConfig, report: VerificationReport):
    """
    Volume and Dirichlet growth over ``grids.r_list``, the spherical
    :math:`L^1` norms and the slow decay measure.

    For a field with a growth target, the volume must dominate it from
    ``r = 2`` up to one beyond the outermost ring.
    """
    header('[yamabench] Suite growth')
    settings = config.quadrature_settings()
    r_list = config.grids.r_list

    volume = volume_growth(field, r_list, settings)
    report.frames['volume_growth'] = volume
    values = volume['value'].to_numpy()
    errors = volume['err_estimate'].to_numpy()
    for idx in range(1, len(values)):
        report.add(
            CheckResult.at_least(
                f'volume_monotone[r={r_list[idx]:g}]',
                values[idx] + errors[idx] + errors[idx - 1],
                values[idx - 1],
            )
        )
    if field.phi is not None:
        upper = _ring_radius_max(field) + 1.0
        for row in volume.itertuples(index=False):
            if 2.0 <= row.r <= upper:
                report.add(
                    CheckResult.at_least(
                        f'volume_dominates_phi[r={row.r:g}]',
                        row.value,
                        row.phi,
                        error_estimate=row.err_estimate,
                    )
                )

    report.frames['dirichlet_growth'] = dirichlet_growth(field, r_list, settings)
    report.frames['sphere_l1'] = sphere_lp_table(field, r_list, 1.0, settings)
    report.frames['slow_decay'] = slow_decay_measure(field, r_list)


def cylinder_suite(field: SolutionField, config: RunConfig, report: VerificationReport):
    """
    The cylinder equation, the expressions of :math:`w''` and :math:`2P`,
    and the boundary integrals in both coordinate systems, on ``grids.s_grid``.

    The finite difference checks are informational: their truncation error
    grows with the sharpness of the bubbles.
    """
    header('[yamabench] Suite cylinder')
    settings = config.quadrature_settings()
    cyl = CylinderField(field)
    directions = pointwise_directions(field, 8)
    rows = []
    for s in config.grids.s_grid:
        tag = f's={s:g}'
        residual = cylinder_residual(cyl, s)
        report.add(
            CheckResult.at_most(
                f'cylinder_residual[{tag}]', residual, CYLINDER_RESIDUAL_BOUND, required=False
            )
        )

        identity = w_identity_check(cyl, s, settings=settings)
        report.add(
            CheckResult.at_most(
                f'w_second[{tag}]', identity.w_second_gap, W_SECOND_BOUND, required=False
            ),
            CheckResult.at_most(
                f'pohozaev_cylinder[{tag}]', identity.pohozaev_gap, identity.pohozaev_allowance
            ),
        )

        boundary = boundary_quantities(cyl, s, settings)
        report.add(
            CheckResult.at_most(
                f'boundary_forms[{tag}]', boundary.max_relative_gap, BOUNDARY_GAP_BOUND
            )
        )

        x = math.exp(s) * directions
        u = field.value(x)
        round_trip = float(numpy.max(numpy.abs(cyl.reconstruct_u(x) - u) / u))
        report.add(
            CheckResult.at_most(
                f'round_trip[{tag}]',
                round_trip,
                ROUND_TRIP_BOUND,
                note=f'relaxed from {ROUND_TRIP_TARGET:g}',
            )
        )

        rows.append(
            [
                s,
                boundary.r,
                residual,
                identity.w,
                identity.w_second_fd,
                identity.w_second_identity,
                identity.pohozaev_cylinder,
                identity.pohozaev_volume_twice,
                boundary.l2_surface,
                boundary.flux_surface,
                boundary.density_surface,
                round_trip,
            ]
        )
    report.frames['cylinder'] = pd.DataFrame(
        rows,
        columns=[
            's',
            'r',
            'residual',
            'w',
            'w_second_fd',
            'w_second_identity',
            'two_P_cylinder',
            'two_P_volume',
            'l2_surface',
            'flux_surface',
            'density_surface',
            'round_trip',
        ],
    )


SuiteFunction = Callable[[SolutionField, RunConfig, VerificationReport], None]

SUITES: Dict[str, SuiteFunction] = {
    'curvature': curvature_suite,
    'pohozaev': pohozaev_suite,
    'growth': growth_suite,
    'cylinder': cylinder_suite,
}

SUITE_NAMES = list(SUITES) + ['all']


def run_suites(
    field: SolutionField, config: RunConfig, suite: str, report: VerificationReport
) -> List[str]:
    """
    Run ``suite``, or every suite for ``'all'``, and return the names run.
    """
    if suite not in SUITE_NAMES:
        raise ValueError(f'Unknown suite {suite!r}, expected one of {SUITE_NAMES}')
    names = list(SUITES) if suite == 'all' else [suite]
    for name in names:
        SUITES[name](field, config, report)
    return names
