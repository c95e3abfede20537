# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
The radial cylinder equation

.. math::

    v'' - \\frac{(n-2)^2}{4} v + \\frac{n(n-2)}{4} v^{(n+2)/(n-2)} = 0

with its first integral

.. math::

    E = \\frac12 v'^2 - \\frac{(n-2)^2}{8} \\left(v^2 - v^{2n/(n-2)}\\right).

Bounded positive solutions are the constant :math:`v^* = ((n-2)/n)^{(n-2)/4}`,
the homoclinic orbit :math:`(\\cosh s)^{-(n-2)/2}` with :math:`E = 0` and
the periodic orbits in between, indexed by their minimum (the necksize).
Orbits always start at the neck :math:`(v, v') = (\\epsilon, 0)`.

The standard bubble has curvature one, while this equation has curvature
:math:`n(n-2)/4`; :func:`to_fowler_normalisation` maps one to the other.
"""

import math
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy
import pandas as pd
from scipy import integrate, optimize

from yamabench.core import DimensionContext, make_context
from yamabench.fowler.integrator import EnergyGuardedRK45, FowlerError
from yamabench.logging import debug, warning
from yamabench.pydantic_utils import PydanticDataFrame
from yamabench.serialisation_mixin import SerialisationMixin
from yamabench.util import parallel_map

__all__ = [
    'FowlerOrbit',
    'DerivativeBound',
    'fixed_point',
    'fowler_energy',
    'fowler_residual',
    'fowler_scale',
    'to_fowler_normalisation',
    'to_unit_curvature_normalisation',
    'homoclinic',
    'homoclinic_derivative',
    'linearised_period',
    'turning_points',
    'integrate_orbit',
    'necksize_orbit',
    'necksize_family',
    'ode_residual_bounded_derivative',
]

#: Orbits leaving ``(0, ESCAPE_VALUE)`` are stopped and flagged.
ESCAPE_VALUE = 1e8


class FowlerOrbit(SerialisationMixin):
    """
    A trajectory of the radial cylinder equation.

    The table ``trajectory`` has the columns ``s``, ``v``, ``v_prime`` and
    ``energy``.
    """

    n: int
    v0: float
    v0_prime: float
    #: Energy of the initial state.
    energy: float
    #: Largest deviation of the energy from its initial value along the trajectory.
    energy_drift: float
    trajectory: PydanticDataFrame
    #: The orbit left ``0 < v < ESCAPE_VALUE`` and was stopped.
    escaped: bool = False
    #: Minimum of ``v`` along the trajectory.
    necksize: Optional[float] = None
    period: Optional[float] = None
    v_max: Optional[float] = None
    #: Largest :math:`|v'|`, including the crossings of :math:`v = v^*`.
    max_v_prime: Optional[float] = None
    #: The orbit is the constant solution and has no period.
    degenerate: bool = False


def fixed_point(ctx: DimensionContext) -> float:
    """:math:`v^* = ((n-2)/n)^{(n-2)/4}`."""
    return ((ctx.n - 2) / ctx.n) ** (0.25 * (ctx.n - 2))


def fowler_energy(ctx: DimensionContext, v, v_prime):
    v = numpy.asarray(v, dtype=float)
    v_prime = numpy.asarray(v_prime, dtype=float)
    potential = v * v - numpy.abs(v) ** ctx.q
    return 0.5 * v_prime * v_prime - 0.125 * (ctx.n - 2) ** 2 * potential


def fowler_residual(ctx: DimensionContext, v, v_second):
    """:math:`v'' - \\frac{(n-2)^2}{4} v + \\frac{n(n-2)}{4} v^p`."""
    v = numpy.asarray(v, dtype=float)
    return v_second - ctx.m**2 * v + 0.25 * ctx.n * (ctx.n - 2) * numpy.abs(v) ** ctx.p


def fowler_scale(n: int) -> float:
    """:math:`c = (4/(n(n-2)))^{(n-2)/4}`, with :math:`\\alpha_n c = 2^{(n-2)/2}`."""
    return (4.0 / (n * (n - 2))) ** (0.25 * (n - 2))


def to_fowler_normalisation(n: int, v):
    """Map a cylinder solution with curvature one to a solution of the radial equation."""
    return fowler_scale(n) * numpy.asarray(v, dtype=float)


def to_unit_curvature_normalisation(n: int, v):
    return numpy.asarray(v, dtype=float) / fowler_scale(n)


def homoclinic(n: int, s):
    """:math:`(\\cosh s)^{-(n-2)/2}`."""
    s = numpy.asarray(s, dtype=float)
    # cosh(s) = e^|s| (1 + e^{-2|s|}) / 2 without overflow
    log_cosh = numpy.abs(s) + numpy.log1p(numpy.exp(-2.0 * numpy.abs(s))) - math.log(2.0)
    return numpy.exp(-0.5 * (n - 2) * log_cosh)


def homoclinic_derivative(n: int, s):
    s = numpy.asarray(s, dtype=float)
    return -0.5 * (n - 2) * numpy.tanh(s) * homoclinic(n, s)


def linearised_period(n: int) -> float:
    """:math:`2\\pi/\\sqrt{n-2}`, the limit of the period at the fixed point."""
    return 2.0 * math.pi / math.sqrt(n - 2)


def turning_points(ctx: DimensionContext, eps: float) -> Tuple[float, float]:
    """
    Both positive roots of :math:`E(v, 0) = E(\\epsilon, 0)`, the minimum and
    the maximum of the orbit through the neck ``eps``.

    Raises
    ------
    FowlerError
        If Brent's method does not converge.
    """
    v_star = fixed_point(ctx)
    if not 0.0 < eps < v_star:
        raise ValueError(f'The necksize must lie in (0, {v_star!r}), got {eps!r}')
    level = eps * eps - eps**ctx.q

    def excess(v):
        return v * v - v**ctx.q - level

    try:
        low = optimize.brentq(excess, 0.0, v_star, xtol=1e-15, rtol=1e-15)
        high = optimize.brentq(excess, v_star, 1.0, xtol=1e-15, rtol=1e-15)
    except (RuntimeError, ValueError) as exc:
        raise FowlerError(f'No turning points for the necksize {eps!r}: {exc}') from exc
    return low, high


def _rhs(ctx: DimensionContext):
    m2 = ctx.m**2
    k = 0.25 * ctx.n * (ctx.n - 2)

    def rhs(s, y):
        return [y[1], m2 * y[0] - k * abs(y[0]) ** ctx.p]

    return rhs


def _escape_events():
    def vanish(s, y):
        return y[0]

    def blow_up(s, y):
        return y[0] - ESCAPE_VALUE

    vanish.terminal = True
    vanish.direction = -1
    blow_up.terminal = True
    blow_up.direction = 1
    return [vanish, blow_up]


def _solve(ctx, y0, s_span, s_eval, rtol, atol, energy_tol, extra_events=()):
    def energy(y):
        return float(fowler_energy(ctx, y[0], y[1]))

    return integrate.solve_ivp(
        _rhs(ctx),
        s_span,
        list(y0),
        method=EnergyGuardedRK45,
        t_eval=s_eval,
        events=_escape_events() + list(extra_events),
        rtol=rtol,
        atol=atol,
        energy=energy,
        energy_tol=energy_tol,
    )


def integrate_orbit(
    ctx: DimensionContext,
    v0: float,
    v0_prime: float,
    s_span: Tuple[float, float],
    rtol: float = 1e-12,
    atol: float = 1e-14,
    energy_tol: float = 1e-11,
    s_eval: Optional[Sequence[float]] = None,
) -> FowlerOrbit:
    """
    Integrate the radial cylinder equation from ``(v0, v0_prime)`` over ``s_span``.

    The trajectory holds the accepted steps, or the points ``s_eval``. An
    orbit reaching ``v = 0`` or ``v = ESCAPE_VALUE`` is stopped there and
    flagged as escaped.
    """
    if v0 <= 0:
        raise ValueError(f'The initial value must be positive, got {v0}')
    v_star = fixed_point(ctx)

    def crossing(s, y):
        return y[0] - v_star

    solution = _solve(
        ctx, (v0, v0_prime), s_span, s_eval, rtol, atol, energy_tol, extra_events=[crossing]
    )
    if solution.status < 0:
        raise FowlerError(f'Integration failed: {solution.message}')

    s, v, v_prime = solution.t, solution.y[0], solution.y[1]
    energies = fowler_energy(ctx, v, v_prime)
    e0 = float(fowler_energy(ctx, v0, v0_prime))
    escaped = solution.status == 1 and any(len(t) for t in solution.t_events[:2])
    if escaped:
        warning(f'[yamabench] Orbit from ({v0!r}, {v0_prime!r}) left the positive well')

    speeds = [numpy.abs(v_prime)]
    if len(solution.y_events[2]):
        speeds.append(numpy.abs(solution.y_events[2][:, 1]))
    speeds = numpy.concatenate(speeds)

    frame = pd.DataFrame({'s': s, 'v': v, 'v_prime': v_prime, 'energy': energies})
    return FowlerOrbit(
        n=ctx.n,
        v0=v0,
        v0_prime=v0_prime,
        energy=e0,
        energy_drift=float(numpy.max(numpy.abs(energies - e0))) if len(s) else 0.0,
        trajectory=frame,
        escaped=bool(escaped),
        necksize=float(numpy.min(v)) if len(s) else None,
        v_max=float(numpy.max(v)) if len(s) else None,
        max_v_prime=float(numpy.max(speeds)) if speeds.size else None,
    )


def necksize_orbit(
    ctx: DimensionContext,
    eps: float,
    rtol: float = 1e-12,
    atol: float = 1e-14,
    s_max: float = 1000.0,
) -> FowlerOrbit:
    """
    One period of the orbit through the neck ``(eps, 0)``.

    The half period is the first return to :math:`v' = 0`, located by event
    detection on the dense output; the orbit is then integrated over the full
    period. At the fixed point the orbit is constant and has no period.

    Raises
    ------
    FowlerError
        If the orbit does not turn within ``s_max``.
    """
    v_star = fixed_point(ctx)
    if not 0.0 < eps <= v_star:
        raise ValueError(f'The necksize must lie in (0, {v_star!r}], got {eps!r}')

    if math.isclose(eps, v_star, rel_tol=1e-12):
        orbit = integrate_orbit(ctx, v_star, 0.0, (0.0, linearised_period(ctx.n)), rtol, atol)
        return orbit.model_copy(update={'degenerate': True, 'period': None, 'v_max': v_star})

    def turning(s, y):
        return y[1]

    turning.terminal = True
    turning.direction = -1
    solution = _solve(ctx, (eps, 0.0), (0.0, s_max), None, rtol, atol, 1e-11, [turning])
    if solution.status < 0 or not len(solution.t_events[2]):
        raise FowlerError(f'The orbit with necksize {eps!r} does not turn before s={s_max!r}')
    half = float(solution.t_events[2][0])
    period = 2.0 * half

    orbit = integrate_orbit(ctx, eps, 0.0, (0.0, period), rtol, atol)
    debug(f'[yamabench] Necksize {eps!r}: period {period!r}')
    return orbit.model_copy(
        update={'period': period, 'v_max': float(solution.y_events[2][0][0])}
    )


def necksize_family(ctx: DimensionContext, eps_grid: Sequence[float]) -> pd.DataFrame:
    """
    The columns ``eps``, ``period``, ``v_max``, ``max_v_prime`` and ``energy``
    for every necksize of the grid.
    """
    orbits = parallel_map(lambda eps: necksize_orbit(ctx, float(eps)), list(eps_grid))
    rows = [
        [
            float(eps),
            math.nan if orbit.period is None else orbit.period,
            orbit.v_max,
            orbit.max_v_prime,
            orbit.energy,
        ]
        for eps, orbit in zip(eps_grid, orbits)
    ]
    return pd.DataFrame(rows, columns=['eps', 'period', 'v_max', 'max_v_prime', 'energy'])


class DerivativeBound(NamedTuple):
    """The largest :math:`|v'|` on an orbit and its bound from the energy."""

    max_v_prime: float
    analytic_bound: float


def ode_residual_bounded_derivative(orbit: FowlerOrbit) -> DerivativeBound:
    """
    :math:`\\max |v'|` along the orbit and
    :math:`\\sqrt{2 \\max(0, E + \\frac{(n-2)^2}{8} \\sup (v^2 - v^{2n/(n-2)}))}`.

    The supremum is attained at the fixed point, where :math:`v'' = 0`.
    """
    ctx = make_context(orbit.n)
    v_star = fixed_point(ctx)
    peak = v_star * v_star - v_star**ctx.q
    bound = math.sqrt(2.0 * max(0.0, orbit.energy + 0.125 * (orbit.n - 2) ** 2 * peak))
    measured = 0.0 if orbit.max_v_prime is None else orbit.max_v_prime
    return DerivativeBound(measured, bound)
