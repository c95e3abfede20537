# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Domination of a bubble by the baseline bubble and the choice of its scale.

For a bubble :math:`\\bar u(|x - c|, \\lambda)` with :math:`|c| = r` and a
point at distance :math:`\\rho = |x - c|` from its centre,
:math:`|x| \\le \\rho + r` and :math:`u_o` is radially decreasing, so

.. math::

    \\frac{\\bar u(\\rho, \\lambda)}{u_o(x)} \\le
    h(\\rho) = \\left(\\frac{\\lambda (1 + (\\rho + r)^2)}{\\lambda^2 + \\rho^2}\\right)^{(n-2)/2}.

The base of :math:`h` increases up to the positive root :math:`\\rho_+` of
:math:`r\\rho^2 + (1 + r^2 - \\lambda^2)\\rho - r\\lambda^2` and decreases
towards :math:`\\lambda` afterwards, so the supremum over
:math:`\\rho \\ge \\rho_{min}` is attained at :math:`\\max(\\rho_{min}, \\rho_+)`.
The gradient :math:`(n-2)\\alpha_n \\lambda^{(n-2)/2} \\rho
(\\lambda^2 + \\rho^2)^{-n/2}` peaks at :math:`\\rho = \\lambda/\\sqrt{n-1}`.
"""

import math
from typing import NamedTuple

from scipy import optimize

from yamabench.core import DimensionContext
from yamabench.logging import debug

__all__ = [
    'LambdaSelectionError',
    'DominationSups',
    'value_ratio_sup',
    'gradient_sup',
    'domination_sups',
    'select_lambda',
]


class LambdaSelectionError(RuntimeError):
    """
    Raised when no admissible bubble scale is found within the iteration budget.
    """


class DominationSups(NamedTuple):
    """Suprema over :math:`|x - c| \\ge \\rho_{min}`."""

    #: :math:`\\sup \\bar u / u_o`.
    value_ratio: float
    #: :math:`\\sup |\\nabla \\bar u|`.
    gradient: float


def _stationary_radius(lam: float, distance: float) -> float:
    if distance == 0.0:
        return 0.0
    b = 1.0 + distance * distance - lam * lam
    root = math.sqrt(b * b + 4.0 * distance * distance * lam * lam)
    if b > 0.0:
        return 2.0 * distance * lam * lam / (b + root)
    return (root - b) / (2.0 * distance)


def value_ratio_sup(ctx: DimensionContext, lam: float, distance: float, rho_min: float) -> float:
    """
    :math:`\\sup_{|x-c| \\ge \\rho_{min}} \\bar u(|x-c|, \\lambda) / u_o(x)` for
    :math:`|c| =` ``distance``.
    """
    rho = max(rho_min, _stationary_radius(lam, distance))
    log_base = (
        math.log(lam) + math.log1p((rho + distance) ** 2) - math.log(lam * lam + rho * rho)
    )
    # the limit rho -> infinity is lambda**m
    return math.exp(ctx.m * max(log_base, math.log(lam)))


def gradient_sup(ctx: DimensionContext, lam: float, rho_min: float) -> float:
    """
    :math:`\\sup_{\\rho \\ge \\rho_{min}} |\\partial_\\rho \\bar u(\\rho, \\lambda)|`.
    """
    rho = max(rho_min, lam / math.sqrt(ctx.n - 1))
    log_grad = (
        math.log(ctx.n - 2)
        + ctx.log_alpha
        + ctx.m * math.log(lam)
        + math.log(rho)
        - (ctx.m + 1.0) * math.log(lam * lam + rho * rho)
    )
    return math.exp(log_grad)


def domination_sups(
    ctx: DimensionContext, lam: float, distance: float, rho_min: float
) -> DominationSups:
    return DominationSups(
        value_ratio_sup(ctx, lam, distance, rho_min), gradient_sup(ctx, lam, rho_min)
    )


def _admissible(sups: DominationSups, eps: float) -> bool:
    return sups.value_ratio <= eps and sups.gradient < eps


def select_lambda(
    ctx: DimensionContext,
    eps: float,
    distance: float,
    rho_min: float,
    lam_max: float,
    max_iter: int = 400,
) -> float:
    """
    Largest scale (up to bisection accuracy) in ``(0, lam_max]`` for which the
    bubble at ``distance`` from the origin satisfies

    * :math:`\\bar u \\le \\epsilon\\, u_o` and
    * :math:`|\\nabla \\bar u| < \\epsilon`

    at every point farther than ``rho_min`` from its centre.

    Raises
    ------
    LambdaSelectionError
        If halving the scale ``max_iter`` times does not reach an admissible value.
    """
    if not 0.0 < eps <= 1.0:
        raise ValueError(f'The domination factor must lie in (0, 1], got {eps}')
    if lam_max <= 0.0 or rho_min <= 0.0:
        raise ValueError(f'Need lam_max > 0 and rho_min > 0, got {lam_max}, {rho_min}')

    def margin(log_lam):
        sups = domination_sups(ctx, math.exp(log_lam), distance, rho_min)
        return min(eps - sups.value_ratio, eps - sups.gradient)

    lam = lam_max
    if _admissible(domination_sups(ctx, lam, distance, rho_min), eps):
        debug(f'[yamabench] Scale {lam!r} admissible at the upper bound')
        return lam

    for _ in range(max_iter):
        lower = 0.5 * lam
        if _admissible(domination_sups(ctx, lower, distance, rho_min), eps):
            break
        lam = lower
    else:
        raise LambdaSelectionError(
            f'No admissible scale below {lam_max!r} for eps={eps!r}, distance={distance!r}'
        )

    root = optimize.brentq(margin, math.log(lower), math.log(lam), xtol=1e-13, rtol=1e-15)
    candidate = math.exp(root)
    # step below the root until the strict inequality holds
    for _ in range(64):
        if candidate <= lower or _admissible(
            domination_sups(ctx, candidate, distance, rho_min), eps
        ):
            break
        candidate *= 1.0 - 1e-9
    else:
        candidate = lower
    candidate = max(candidate, lower)
    debug(
        f'[yamabench] Selected scale {candidate!r} for eps={eps!r}, distance={distance!r}, '
        f'rho_min={rho_min!r}'
    )
    return candidate
