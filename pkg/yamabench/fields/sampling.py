# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Deterministic point sets on which the induced curvature is bracketed.
"""

import math
from typing import List, NamedTuple, Optional, Tuple

import numpy
from pydantic import Field

from yamabench.fields.solution import SolutionField
from yamabench.logging import debug
from yamabench.quadrature.sphere import local_frame, sphere_rule
from yamabench.serialisation_mixin import SerialisationMixin
from yamabench.util import parallel_map


__all__ = ['SampleBlock', 'SamplingPlan', 'CurvatureBounds', 'curvature_bounds']


class SampleBlock(NamedTuple):
    """Points ``origin + offsets``."""

    origin: numpy.ndarray
    offsets: numpy.ndarray


class SamplingPlan(SerialisationMixin):
    """
    Union of a uniform grid on a ball, rays through every bubble centre,
    dense shells around every centre and far-field rays along the axes.
    """

    #: Radius of the ball covered by the uniform grid.
    grid_radius: float = Field(default=20.0, gt=0)
    #: Grid points per axis (rounded down to an odd number).
    grid_resolution: int = Field(default=41, ge=3)
    #: Upper bound for the total number of grid nodes before clipping to the ball.
    max_grid_points: int = Field(default=200_000, ge=27)
    #: Points per ray through a bubble centre.
    ray_samples: int = Field(default=201, ge=3)
    #: Radius of the dense ball sampled around each centre.
    local_radius: float = Field(default=0.25, gt=0)
    #: Number of shells inside each local ball.
    local_shells: int = Field(default=16, ge=1)
    #: Sphere rule order for the directions of the local shells.
    local_order: int = Field(default=4, ge=1)
    #: Outermost radius of the far-field rays.
    far_radius: float = Field(default=1e6, gt=1)
    #: Points per far-field ray.
    far_samples: int = Field(default=61, ge=2)

    def grid_points(self, n: int) -> numpy.ndarray:
        per_axis = min(self.grid_resolution, int(math.floor(self.max_grid_points ** (1.0 / n))))
        per_axis = max(3, per_axis - (1 - per_axis % 2))
        axis = numpy.linspace(-self.grid_radius, self.grid_radius, per_axis)
        mesh = numpy.stack(numpy.meshgrid(*([axis] * n), indexing='ij'), axis=-1).reshape(-1, n)
        return mesh[numpy.linalg.norm(mesh, axis=-1) <= self.grid_radius * (1 + 1e-12)]

    def far_points(self, n: int) -> numpy.ndarray:
        radii = numpy.geomspace(1.0, self.far_radius, self.far_samples)
        axes = numpy.concatenate([numpy.eye(n), -numpy.eye(n)])
        return (radii[None, :, None] * axes[:, None, :]).reshape(-1, n)

    def ray_points(self, field: SolutionField) -> numpy.ndarray:
        rays = []
        for term in field.bubbles:
            norm = term.center_norm
            if norm == 0.0:
                continue
            direction = term.center_array / norm
            t = numpy.linspace(0.0, 2.0 * norm, self.ray_samples)
            rays.append(t[:, None] * direction[None, :])
        if not rays:
            return numpy.zeros((0, field.n))
        return numpy.concatenate(rays)

    def local_blocks(self, field: SolutionField) -> List[SampleBlock]:
        """
        Shells around each centre, given as offsets from that centre.
        """
        rule = sphere_rule(field.n, self.local_order)
        blocks = []
        for term in field.standard_terms():
            inner = min(0.01 * term.lam, 0.5 * self.local_radius)
            radii = numpy.geomspace(inner, self.local_radius, self.local_shells)
            nodes = rule.nodes
            if term.center_norm > 0.0:
                nodes = nodes @ local_frame(term.center_array, field.n).T
            offsets = (radii[:, None, None] * nodes[None, :, :]).reshape(-1, field.n)
            offsets = numpy.concatenate([numpy.zeros((1, field.n)), offsets])
            blocks.append(SampleBlock(term.center_array, offsets))
        return blocks

    def blocks(self, field: SolutionField) -> List[SampleBlock]:
        """All sample points of the plan for ``field``."""
        origin = numpy.zeros(field.n)
        absolute = numpy.concatenate(
            [
                numpy.zeros((1, field.n)),
                self.grid_points(field.n),
                self.ray_points(field),
                self.far_points(field.n),
            ]
        )
        blocks = [SampleBlock(origin, absolute)] + self.local_blocks(field)
        debug(
            f'[yamabench] Sampling plan with {sum(len(b.offsets) for b in blocks)} points '
            f'in {len(blocks)} blocks'
        )
        return blocks


class CurvatureBounds(SerialisationMixin):
    """
    Empirical bracket :math:`a^2 \\le K \\le b^2` over a sampling plan.
    """

    a2: float
    b2: float
    argmin: Tuple[float, ...]
    argmax: Tuple[float, ...]
    #: Constant :math:`3^{p-1}` of the bound chain for three-term sums.
    c1: float
    #: :math:`\\max u^p / (-\\Delta u) = 1 / \\min K` over the plan.
    c2_empirical: float
    n_points: int

    @property
    def positive(self) -> bool:
        return math.isfinite(self.a2) and math.isfinite(self.b2) and self.a2 > 0.0


def curvature_bounds(
    field: SolutionField, sampling: Optional[SamplingPlan] = None
) -> CurvatureBounds:
    """
    Minimum and maximum of the induced curvature over ``sampling``.

    Non-positive or non-finite values are reported as they are, so a broken
    field shows up as ``a2 <= 0`` rather than as an exception.
    """
    sampling = SamplingPlan() if sampling is None else sampling
    blocks = sampling.blocks(field)

    def _extremes(block):
        k = field.curvature(block.offsets, block.origin, check=False)
        k = numpy.where(numpy.isnan(k), -numpy.inf, k)
        lo, hi = int(numpy.argmin(k)), int(numpy.argmax(k))
        return (
            float(k[lo]),
            block.origin + block.offsets[lo],
            float(k[hi]),
            block.origin + block.offsets[hi],
            len(k),
        )

    results = parallel_map(_extremes, blocks)
    k_min, x_min, _, _, _ = min(results, key=lambda r: r[0])
    _, _, k_max, x_max, _ = max(results, key=lambda r: r[2])
    ctx = field.context

    return CurvatureBounds(
        a2=k_min,
        b2=k_max,
        argmin=tuple(float(v) for v in x_min),
        argmax=tuple(float(v) for v in x_max),
        c1=3.0 ** (ctx.p - 1.0),
        c2_empirical=1.0 / k_min if k_min > 0 else math.inf,
        n_points=sum(r[4] for r in results),
    )
