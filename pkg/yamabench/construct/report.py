# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Verification of the inequalities each construction promises.
"""

import math
from typing import List, Optional, Sequence

import numpy
import pandas as pd
from pydantic import Field

from yamabench.construct.domination import domination_sups
from yamabench.construct.growth import ConstructionBParams, ring_layout
from yamabench.construct.unbounded import ConstructionAParams
from yamabench.core import bubble_mass_fraction, make_context
from yamabench.fields import CurvatureBounds, SamplingPlan, SolutionField, curvature_bounds
from yamabench.logging import header
from yamabench.pydantic_utils import PydanticDataFrame
from yamabench.results import CheckResult, all_passed
from yamabench.serialisation_mixin import SerialisationMixin

__all__ = [
    'ConstructionReport',
    'completeness_checks',
    'curvature_check',
    'verify_unbounded',
    'verify_prescribed_growth',
]

#: Radii of the completeness proxy :math:`u^{4/(n-2)} \\ge |x|^{-2}/2`.
COMPLETENESS_RADII = (10.0, 100.0, 1000.0)


class ConstructionReport(SerialisationMixin):
    """
    Every verified inequality of a construction with its margin, and the
    table of bubbles or rings.
    """

    construction: str
    checks: List[CheckResult] = Field(default_factory=list)
    bubbles: Optional[PydanticDataFrame] = None

    @property
    def passed(self) -> bool:
        return all_passed(self.checks)


def completeness_checks(
    field: SolutionField, radii: Sequence[float] = COMPLETENESS_RADII
) -> List[CheckResult]:
    """
    :math:`|x|^2 u^{4/(n-2)}(x) \\ge 1/2` along every coordinate half-axis.
    """
    n = field.n
    checks = []
    directions = numpy.concatenate([numpy.eye(n), -numpy.eye(n)])
    for r in radii:
        points = r * directions
        measured = float(numpy.min(r * r * field.metric_factor(points)))
        checks.append(CheckResult.at_least(f'completeness[r={r:g}]', measured, 0.5))
    return checks


def curvature_check(
    field: SolutionField,
    sampling: Optional[SamplingPlan],
    bounds: Optional[CurvatureBounds] = None,
) -> List[CheckResult]:
    """Induced curvature positive with a finite maximum over the sampling plan."""
    if bounds is None:
        bounds = curvature_bounds(field, sampling)
    finite = CheckResult(
        name='curvature_max_finite', passed=math.isfinite(bounds.b2), measured=bounds.b2
    )
    finite.log()
    return [
        CheckResult.at_least('curvature_min_positive', bounds.a2, 0.0, note='a^2 > 0 required'),
        finite,
    ]


def _peak_value(field: SolutionField, center) -> float:
    origin = numpy.asarray(center, dtype=float)
    return float(field.value(numpy.zeros((1, field.n)), origin)[0])


def verify_unbounded(
    field: SolutionField,
    params: ConstructionAParams,
    sampling: Optional[SamplingPlan] = None,
) -> ConstructionReport:
    """
    Check domination, peak heights, the series budget, completeness, the
    failure of slow decay and the curvature bracket for construction A.
    """
    header(f'[yamabench] Verifying construction A with K_max={params.K_max}')
    ctx = make_context(params.n)
    eps, radii, heights = params.eps(), params.radii(), params.heights()
    checks = []
    rows = []
    decay = []
    for k, (term, e, r, height) in enumerate(zip(field.bubbles, eps, radii, heights), start=1):
        sups = domination_sups(ctx, term.lam, r, params.domination_radius)
        peak = term.peak_value(ctx)
        u_center = _peak_value(field, term.center)
        checks += [
            CheckResult.at_most(f'value_domination[k={k}]', sups.value_ratio, e),
            CheckResult.below(f'gradient_domination[k={k}]', sups.gradient, e),
            CheckResult.at_least(f'bubble_peak[k={k}]', peak, height),
            CheckResult.at_least(f'field_peak[k={k}]', u_center, height),
        ]
        decay.append(r**ctx.m * u_center)
        rows.append([k, r, term.lam, e, height, sups.value_ratio, sups.gradient, peak, u_center])

    checks.append(
        CheckResult.at_most(
            'eps_budget', math.fsum(eps) + params.tail(), 1.0, note='retained + tail'
        )
    )
    for k in range(1, len(decay)):
        checks.append(
            CheckResult.below(
                f'slow_decay_fails[k={k + 1}]',
                decay[k - 1],
                decay[k],
                note='r_k^{(n-2)/2} u(x_k) increases',
            )
        )
    checks += completeness_checks(field)
    checks += curvature_check(field, sampling)

    frame = pd.DataFrame(
        rows,
        columns=[
            'k',
            'r_k',
            'lambda_k',
            'eps_k',
            'M_k',
            'value_ratio_sup',
            'gradient_sup',
            'bubble_peak',
            'field_peak',
        ],
    )
    return ConstructionReport(construction='A', checks=checks, bubbles=frame)


def verify_prescribed_growth(
    field: SolutionField,
    params: ConstructionBParams,
    sampling: Optional[SamplingPlan] = None,
) -> ConstructionReport:
    """
    Check ring counts, domination, half mass, the series budget, completeness
    and the curvature bracket for construction B.
    """
    header(f'[yamabench] Verifying construction B with k_max={params.k_max}')
    ctx = make_context(params.n)
    phi = params.growth(ctx)
    rings = ring_layout(params)
    checks = [
        CheckResult.at_least(
            'phi_normalisation',
            params.phi(0.0),
            10.0 * ctx.V_n,
            note='phi(0) >= 10 V_n',
            required=False,
        )
    ]
    rows = []
    for ring in rings:
        k = ring.k
        sups = domination_sups(ctx, ring.lam, float(k), ring.radius)
        fraction = float(bubble_mass_fraction(ctx.n, ring.radius / ring.lam))
        checks += [
            CheckResult.at_least(
                f'ring_count[k={k}]', ring.count, 2.0 * phi(k + 2) / ctx.V_n * (1.0 - 1e-12)
            ),
            CheckResult.at_least(f'ring_mass[k={k}]', ring.count * ctx.V_n / 2.0, phi(k + 2)),
            CheckResult.at_most(f'value_domination[k={k}]', sups.value_ratio, ring.eps),
            CheckResult.below(f'gradient_domination[k={k}]', sups.gradient, ring.eps),
            CheckResult.at_least(f'half_mass[k={k}]', fraction, 0.5),
        ]
        rows.append(
            [
                k,
                ring.count,
                ring.lam,
                ring.eps,
                ring.radius,
                phi(k + 2),
                sups.value_ratio,
                sups.gradient,
                fraction,
            ]
        )

    # N_k eps_k is the base sequence itself
    budget = math.fsum(params.eps_rule.values(params.k_max)) + params.eps_rule.tail_sum(
        params.k_max + 1
    )
    checks.append(CheckResult.at_most('eps_budget', budget, 1.0, note='sum N_k eps_k'))
    checks += completeness_checks(field)
    checks += curvature_check(field, sampling)

    frame = pd.DataFrame(
        rows,
        columns=[
            'k',
            'N_k',
            'lambda_k',
            'eps_k',
            'mass_radius',
            'phi_k_plus_2',
            'value_ratio_sup',
            'gradient_sup',
            'mass_fraction',
        ],
    )
    return ConstructionReport(construction='B', checks=checks, bubbles=frame)
