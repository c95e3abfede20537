# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Construction A: a solution with bounded curvature that is itself unbounded.

Bubbles :math:`u_k` with centres :math:`(r_k, 0, \\dots, 0)` are added to the
flat bubble and the baseline bubble :math:`u_o`. Each scale
:math:`\\lambda_k` is chosen so that, away from :math:`B(x^{1,k}, 1/4)`,

* :math:`u_k \\le \\epsilon_k u_o` and :math:`|\\nabla u_k| < \\epsilon_k`,

while the peak height :math:`\\alpha_n \\lambda_k^{(2-n)/2}` is at least
:math:`M_k`.
"""

import math
from typing import List

from pydantic import Field, model_validator
from typing_extensions import Literal

from yamabench.construct.domination import select_lambda
from yamabench.construct.sequences import (
    ExponentialSequence,
    GeometricSequence,
    LinearSequence,
    SequenceRule,
)
from yamabench.core import DimensionContext, make_context
from yamabench.fields import BubbleTerm, FlatBubbleTerm, SolutionField
from yamabench.logging import info
from yamabench.serialisation_mixin import SerialisationMixin

__all__ = ['ConstructionAParams', 'choose_lambda_unbounded', 'build_unbounded']


class ConstructionAParams(SerialisationMixin):
    """
    Parameters of construction A.
    """

    construction: Literal['A'] = 'A'

    n: int = Field(ge=3)

    #: Number of off-centre bubbles retained.
    K_max: int = Field(ge=0)

    eps_rule: SequenceRule = Field(default_factory=GeometricSequence)

    r_rule: SequenceRule = Field(default_factory=ExponentialSequence)

    M_rule: SequenceRule = Field(default_factory=LinearSequence)

    flat_b: float = Field(default=1.0, gt=0)

    #: Domination holds outside this distance from each centre.
    domination_radius: float = Field(default=0.25, gt=0)

    def eps(self) -> List[float]:
        return self.eps_rule.values(self.K_max)

    def radii(self) -> List[float]:
        return self.r_rule.values(self.K_max)

    def heights(self) -> List[float]:
        return self.M_rule.values(self.K_max)

    def tail(self) -> float:
        """:math:`\\sum_{k > K_{max}} \\epsilon_k`."""
        return self.eps_rule.tail_sum(self.K_max + 1)

    @model_validator(mode='after')
    def _check_sequences(self):
        eps, radii, heights = self.eps(), self.radii(), self.heights()
        if any(not 0.0 < e < 1.0 for e in eps):
            raise ValueError(f'eps_k must lie in (0, 1), got {eps}')
        if any(b >= a for a, b in zip(eps, eps[1:])):
            raise ValueError(f'eps_k must be decreasing, got {eps}')
        if not math.isfinite(self.tail()):
            raise ValueError('The tail of the eps_k series must be finite')
        total = math.fsum(eps) + self.tail()
        if total > 1.0:
            raise ValueError(f'The eps_k series sums to {total!r} > 1')
        if radii and radii[0] < 1.0:
            raise ValueError(f'r_1 must be at least 1, got {radii[0]}')
        if any(b - a < 1.0 for a, b in zip(radii, radii[1:])):
            raise ValueError(f'Consecutive r_k must be at least 1 apart, got {radii}')
        if any(h <= 0.0 for h in heights) or any(b <= a for a, b in zip(heights, heights[1:])):
            raise ValueError(f'M_k must be positive and increasing, got {heights}')
        return self


def choose_lambda_unbounded(
    ctx: DimensionContext, eps_k: float, r_k: float, M_k: float, rho_min: float = 0.25
) -> float:
    """
    Scale of the ``k``-th bubble of construction A.

    The result satisfies :math:`\\alpha_n \\lambda^{(2-n)/2} \\ge M_k` and the
    value and gradient domination by :math:`u_o` outside
    :math:`B(x^{1,k}, \\rho_{min})`.
    """
    if not 0.0 < eps_k <= 1.0:
        raise ValueError(f'eps_k must lie in (0, 1], got {eps_k}')
    if r_k < 1.0 or M_k <= 0.0:
        raise ValueError(f'Need r_k >= 1 and M_k > 0, got r_k={r_k}, M_k={M_k}')
    # alpha_n lambda^{-m} >= M_k
    lam_peak = math.exp((ctx.log_alpha - math.log(M_k)) / ctx.m)
    return select_lambda(ctx, eps_k, r_k, rho_min, min(lam_peak, 1.0))


def build_unbounded(params: ConstructionAParams) -> SolutionField:
    """
    :math:`u = \\tilde u_b + u_o + \\sum_{k=1}^{K_{max}} u_k`.

    With ``K_max = 0`` the field is the flat bubble alone.
    """
    ctx = make_context(params.n)
    bubbles = []
    for k, (eps, r, height) in enumerate(
        zip(params.eps(), params.radii(), params.heights()), start=1
    ):
        lam = choose_lambda_unbounded(ctx, eps, r, height, params.domination_radius)
        center = (r,) + (0.0,) * (params.n - 1)
        bubbles.append(BubbleTerm(center=center, lam=lam))
        info(f'[yamabench] Bubble {k}: r_k={r!r}, lambda_k={lam!r}')

    return SolutionField(
        n=params.n,
        flat=FlatBubbleTerm(b=params.flat_b),
        baseline=params.K_max > 0,
        bubbles=bubbles,
        tail_bound_coeff=params.tail(),
    )
