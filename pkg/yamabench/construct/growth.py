# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Construction B: a solution whose conformal volume grows at least like a
prescribed function :math:`\\phi`.

Ring ``k`` carries :math:`N_k \\ge 2\\phi(k+2)/V_n` bubbles equally spaced on
the circle of radius ``k`` in the :math:`(x_1, x_2)` plane. Each of them
keeps half of its mass :math:`V_n` inside the ball of radius
:math:`\\pi/(10 N_k)` around its centre, so :math:`B_o(k+1)` holds at least
:math:`N_k V_n/2 \\ge \\phi(k+2)`.
"""

import math
from typing import Callable, List, Tuple

import numpy
from pydantic import Field, field_validator, model_validator
from typing_extensions import Literal

from yamabench.construct.domination import select_lambda
from yamabench.construct.sequences import GeometricSequence, SequenceRule
from yamabench.core import DimensionContext, bubble_mass_median, make_context
from yamabench.fields import BubbleTerm, FlatBubbleTerm, SolutionField
from yamabench.logging import info, warning
from yamabench.serialisation_mixin import SerialisationMixin
from yamabench.util import parallel_map

__all__ = [
    'GrowthTable',
    'ConstructionBParams',
    'RingLayout',
    'ring_count',
    'ring_radius_min',
    'choose_lambda_ring',
    'ring_centers',
    'ring_layout',
    'build_prescribed_growth',
]


class GrowthTable(SerialisationMixin):
    """
    Tabulated growth target :math:`\\phi`, linearly interpolated and constant
    beyond the first and last entries.
    """

    points: List[Tuple[float, float]] = Field(min_length=1)

    @field_validator('points')
    @classmethod
    def _check_points(cls, points):
        radii = [r for r, _ in points]
        values = [v for _, v in points]
        if any(r < 0.0 for r in radii):
            raise ValueError('phi is defined on [0, inf), got a negative radius')
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError(f'phi radii must be strictly increasing, got {radii}')
        if any(b < a for a, b in zip(values, values[1:])):
            raise ValueError(f'phi must be nondecreasing, got {values}')
        if any(not math.isfinite(v) or v < 0.0 for v in values):
            raise ValueError('phi values must be finite and nonnegative')
        return points

    def __call__(self, r):
        radii, values = zip(*self.points)
        result = numpy.interp(r, radii, values)
        return float(result) if numpy.ndim(result) == 0 else result

    def normalised(self, floor: float) -> 'GrowthTable':
        """:math:`\\max(\\phi, floor)`."""
        return GrowthTable(points=[(r, max(v, floor)) for r, v in self.points])

    @classmethod
    def from_function(cls, phi: Callable[[float], float], radii) -> 'GrowthTable':
        return cls(points=[(float(r), float(phi(r))) for r in radii])


class ConstructionBParams(SerialisationMixin):
    """
    Parameters of construction B.
    """

    construction: Literal['B'] = 'B'

    n: int = Field(ge=3)

    #: Number of rings.
    k_max: int = Field(ge=0)

    phi: GrowthTable

    flat_b: float = Field(default=1.0, gt=0)

    #: :math:`N_k \\epsilon_k` per ring; :math:`\\epsilon_k` is this value over :math:`N_k`.
    eps_rule: SequenceRule = Field(default_factory=GeometricSequence)

    #: Replace :math:`\\phi` by :math:`\\max(\\phi, 10 V_n)` before counting bubbles.
    normalize_phi: bool = False

    @model_validator(mode='after')
    def _check_eps(self):
        base = self.eps_rule.values(self.k_max)
        if any(not 0.0 < b < 1.0 for b in base):
            raise ValueError(f'N_k eps_k must lie in (0, 1), got {base}')
        if any(b > a for a, b in zip(base, base[1:])):
            raise ValueError(f'N_k eps_k must be nonincreasing, got {base}')
        tail = self.eps_rule.tail_sum(self.k_max + 1)
        if not math.isfinite(tail):
            raise ValueError('The tail of the N_k eps_k series must be finite')
        if math.fsum(base) + tail > 1.0:
            raise ValueError(f'sum N_k eps_k = {math.fsum(base) + tail!r} exceeds 1')
        return self

    def growth(self, ctx: DimensionContext) -> GrowthTable:
        floor = 10.0 * ctx.V_n
        if self.normalize_phi:
            return self.phi.normalised(floor)
        if self.phi(0.0) < floor:
            warning(f'[yamabench] phi(0) = {self.phi(0.0)!r} is below 10 V_n = {floor!r}')
        return self.phi


class RingLayout(SerialisationMixin):
    """Ring ``k`` of construction B."""

    k: int
    count: int
    eps: float
    lam: float
    #: :math:`\\pi/(10 N_k)`.
    radius: float


def ring_count(ctx: DimensionContext, phi: Callable[[float], float], k: int) -> int:
    """
    :math:`N_k = \\lceil 2\\phi(k+2)/V_n \\rceil`, at least one.
    """
    # absorb rounding in the quotient, e.g. phi = 10 V_n must give 20
    target = 2.0 * phi(k + 2) / ctx.V_n * (1.0 - 1e-12)
    return max(1, int(math.ceil(target)))


def ring_radius_min(count: int) -> float:
    """Radius :math:`\\pi/(10 N_k)` of the mass ball around each ring bubble."""
    return math.pi / (10.0 * count)


def choose_lambda_ring(ctx: DimensionContext, eps_k: float, N_k: int, ring_radius: float) -> float:
    """
    Scale of the bubbles of a ring of ``N_k`` bubbles at distance
    ``ring_radius`` from the origin.

    Outside :math:`B(x_{k,j}, \\pi/(10 N_k))` the bubble is dominated by
    :math:`\\epsilon_k u_o` with gradient below :math:`\\epsilon_k`, and at least
    half of its mass lies inside that ball.
    """
    if N_k < 1:
        raise ValueError(f'A ring needs at least one bubble, got {N_k}')
    rho_min = ring_radius_min(N_k)
    # half mass inside rho_min iff rho_min / lambda >= median radius
    lam_mass = rho_min / bubble_mass_median(ctx.n) * (1.0 - 1e-12)
    return select_lambda(ctx, eps_k, ring_radius, rho_min, min(lam_mass, 1.0))


def ring_centers(n: int, k: int, count: int) -> List[Tuple[float, ...]]:
    """
    :math:`x_{k,j} = (k \\sin j\\theta_k, k \\cos j\\theta_k, 0, \\dots, 0)` for
    :math:`j = 1, \\dots, N_k`.
    """
    theta = 2.0 * math.pi / count
    return [
        (k * math.sin(j * theta), k * math.cos(j * theta)) + (0.0,) * (n - 2)
        for j in range(1, count + 1)
    ]


def ring_layout(params: ConstructionBParams) -> List[RingLayout]:
    ctx = make_context(params.n)
    phi = params.growth(ctx)
    counts = [ring_count(ctx, phi, k) for k in range(1, params.k_max + 1)]
    eps = [b / c for b, c in zip(params.eps_rule.values(params.k_max), counts)]

    lams = parallel_map(
        lambda item: choose_lambda_ring(ctx, item[1], item[2], float(item[0])),
        list(zip(range(1, params.k_max + 1), eps, counts)),
    )
    return [
        RingLayout(k=k, count=c, eps=e, lam=lam, radius=ring_radius_min(c))
        for k, c, e, lam in zip(range(1, params.k_max + 1), counts, eps, lams)
    ]


def build_prescribed_growth(params: ConstructionBParams) -> SolutionField:
    """
    :math:`u = \\tilde u_b + u_o + \\sum_k \\sum_{j=1}^{N_k} u_{k,j}`, ordered by ``(k, j)``.
    """
    ctx = make_context(params.n)
    bubbles = []
    for ring in ring_layout(params):
        for center in ring_centers(params.n, ring.k, ring.count):
            bubbles.append(BubbleTerm(center=center, lam=ring.lam))
        info(f'[yamabench] Ring {ring.k}: N_k={ring.count}, lambda_k={ring.lam!r}')

    tail = params.eps_rule.tail_sum(params.k_max + 1)
    phi = params.growth(ctx)
    return SolutionField(
        n=params.n,
        flat=FlatBubbleTerm(b=params.flat_b),
        baseline=True,
        bubbles=bubbles,
        tail_bound_coeff=tail,
        phi=[tuple(p) for p in phi.points],
    )
