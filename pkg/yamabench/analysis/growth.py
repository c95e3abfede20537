# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Growth and decay measurements over families of balls and spheres.

Every function returns a table with the columns ``r``, ``value``,
``normalized`` and ``err_estimate``; normalisations that are undefined at a
radius (e.g. division by :math:`\\ln r` for :math:`r \\le 1`) are NaN.
"""

import math
from typing import Callable, NamedTuple, Optional, Sequence

import numpy
import pandas as pd

from yamabench.analysis.integrals import field_ball_integral, field_sphere_integral
from yamabench.fields import SolutionField
from yamabench.logging import debug, warning
from yamabench.quadrature import QuadratureSettings, sphere_rule

__all__ = [
    'SphereNorm',
    'volume_growth',
    'ball_lq',
    'dirichlet_growth',
    'sphere_lp',
    'sphere_lp_table',
    'slow_decay_measure',
    'pointwise_directions',
]

GROWTH_COLUMNS = ['r', 'value', 'normalized', 'err_estimate', 'converged']


def _check_radii(r_list: Sequence[float]) -> list:
    radii = [float(r) for r in r_list]
    if any(r <= 0.0 for r in radii):
        raise ValueError(f'Radii must be positive, got {radii}')
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError(f'Radii must be increasing, got {radii}')
    return radii


def _log_normalised(value: float, r: float) -> float:
    return value / math.log(r) if r > 1.0 else math.nan


def _ball_table(
    field: SolutionField,
    r_list: Sequence[float],
    integrand,
    normalise: Callable[[float, float], float],
    settings: Optional[QuadratureSettings],
    what: str,
) -> pd.DataFrame:
    rows = []
    for r in _check_radii(r_list):
        result = field_ball_integral(field, r, integrand, settings)
        if not result.converged:
            warning(f'[yamabench] {what} over B(0, {r:g}) did not converge')
        rows.append(
            [r, result.value, normalise(result.value, r), result.error_estimate, result.converged]
        )
        debug(f'[yamabench] {what} over B(0, {r:g}): {result.value!r}')
    return pd.DataFrame(rows, columns=GROWTH_COLUMNS)


def volume_growth(
    field: SolutionField,
    r_list: Sequence[float],
    settings: Optional[QuadratureSettings] = None,
) -> pd.DataFrame:
    """
    Conformal volume :math:`\\int_{B_o(r)} u^{2n/(n-2)}\\, dx` per radius,
    normalised by :math:`\\ln r`.

    For a field that carries a growth target :math:`\\phi` the table also has
    the columns ``phi`` and ``value_over_phi``.
    """
    q = field.context.q

    def integrand(values, points):
        return numpy.exp(q * numpy.log(values.value))

    frame = _ball_table(field, r_list, integrand, _log_normalised, settings, 'Volume')
    if field.phi is not None:
        radii, targets = zip(*field.phi)
        frame['phi'] = numpy.interp(frame['r'].to_numpy(), radii, targets)
        with numpy.errstate(divide='ignore'):
            frame['value_over_phi'] = frame['value'] / frame['phi']
    return frame


def ball_lq(
    field: SolutionField,
    r_list: Sequence[float],
    q_exp: float,
    settings: Optional[QuadratureSettings] = None,
) -> pd.DataFrame:
    """
    :math:`\\int_{B_o(r)} u^{q}\\, dx`, normalised by :math:`r^{n - (n-2)q/2}`
    or, at the critical exponent :math:`q = 2n/(n-2)`, by :math:`\\ln r`.
    """
    if q_exp <= 0:
        raise ValueError(f'The exponent must be positive, got {q_exp}')
    n = field.n
    exponent = n - 0.5 * (n - 2) * q_exp

    def integrand(values, points):
        return numpy.exp(q_exp * numpy.log(values.value))

    if math.isclose(exponent, 0.0, abs_tol=1e-12):
        normalise = _log_normalised
    else:

        def normalise(value, r):
            return value * r ** (-exponent)

    return _ball_table(field, r_list, integrand, normalise, settings, f'L^{q_exp:g} mass')


def dirichlet_growth(
    field: SolutionField,
    r_list: Sequence[float],
    settings: Optional[QuadratureSettings] = None,
) -> pd.DataFrame:
    """:math:`\\int_{B_o(r)} |\\nabla u|^2\\, dx`, normalised by :math:`\\ln r`."""

    def integrand(values, points):
        return numpy.einsum('ij,ij->i', values.gradient, values.gradient)

    return _ball_table(field, r_list, integrand, _log_normalised, settings, 'Dirichlet energy')


def pointwise_directions(field: SolutionField, order: int) -> numpy.ndarray:
    """Sphere rule nodes together with the directions of all bubble centres."""
    directions = [sphere_rule(field.n, order, field.active_dims).nodes]
    centres = [term.center_array for term in field.bubbles if term.center_norm > 0.0]
    if centres:
        centres = numpy.stack(centres)
        directions.append(centres / numpy.linalg.norm(centres, axis=-1)[:, None])
    return numpy.concatenate(directions)


class SphereNorm(NamedTuple):
    """:math:`\\int_{S^{n-1}} u^p(r\\theta)\\, d\\theta` and its normalisation."""

    r: float
    value: float
    #: ``value`` times :math:`r^{(n-2)p/2}`.
    normalized: float
    err_estimate: float
    converged: bool


def sphere_lp(
    field: SolutionField,
    r: float,
    p_exp: float,
    settings: Optional[QuadratureSettings] = None,
) -> SphereNorm:
    """
    :math:`\\int_{S^{n-1}} u^{p}(r, \\theta)\\, d\\theta` with the companion
    :math:`r^{(n-2)p/2} \\int_{S^{n-1}} u^p\\, d\\theta`.
    """
    if p_exp < 1:
        raise ValueError(f'The exponent must be at least 1, got {p_exp}')
    if r <= 0:
        raise ValueError(f'The radius must be positive, got {r}')

    def integrand(values, points):
        return numpy.exp(p_exp * numpy.log(values.value))

    result = field_sphere_integral(field, r, integrand, settings)
    value = float(result.value)
    return SphereNorm(
        r=r,
        value=value,
        normalized=value * r ** (0.5 * (field.n - 2) * p_exp),
        err_estimate=result.error_estimate,
        converged=result.converged,
    )


def sphere_lp_table(
    field: SolutionField,
    r_list: Sequence[float],
    p_exp: float,
    settings: Optional[QuadratureSettings] = None,
) -> pd.DataFrame:
    rows = [sphere_lp(field, r, p_exp, settings) for r in _check_radii(r_list)]
    return pd.DataFrame(rows, columns=GROWTH_COLUMNS)


def slow_decay_measure(
    field: SolutionField, r_list: Sequence[float], order: int = 32
) -> pd.DataFrame:
    """
    :math:`\\sup_\\theta r^{(n-2)/2} u(r, \\theta)` over the nodes of a sphere
    rule and the directions of all bubble centres, where the supremum is
    attained for sharp bubbles.

    ``normalized`` divides by :math:`\\alpha_n`, the peak value of a bubble of
    unit scale. A single bubble decays like :math:`r^{2-n}`, so its measure
    tends to zero; the flat bubble tends to one.
    """
    ctx = field.context
    directions = pointwise_directions(field, order)

    rows = []
    for r in _check_radii(r_list):
        values = field.value(r * directions)
        best = int(numpy.argmax(values))
        sup = r**ctx.m * float(values[best])
        rows.append([r, sup, sup / ctx.alpha_n, 0.0, True])
    return pd.DataFrame(rows, columns=GROWTH_COLUMNS)
