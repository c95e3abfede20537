# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Finite superpositions of bubbles and their induced curvature.
"""

from typing import Iterator, List, NamedTuple, Optional, Tuple

import numpy
from pydantic import Field, model_validator

from yamabench.core import DimensionContext, make_context
from yamabench.fields.terms import BubbleTerm, FlatBubbleTerm
from yamabench.serialisation_mixin import SerialisationMixin


__all__ = [
    'CurvatureError',
    'FieldValues',
    'Peak',
    'SolutionField',
    'field_value',
    'field_gradient',
    'field_laplacian',
    'induced_curvature',
]

# Points are processed in blocks of this size to bound memory use.
_BLOCK = 4096


class CurvatureError(ValueError):
    """
    Raised when the induced curvature is not finite and positive.
    """


class FieldValues(NamedTuple):
    """
    Everything the analysis needs at an array of points.
    """

    value: numpy.ndarray
    gradient: numpy.ndarray
    laplacian: numpy.ndarray
    curvature: numpy.ndarray
    curvature_gradient: numpy.ndarray


class Peak(NamedTuple):
    """
    A bubble away from the origin, with the radius of the ball that is
    integrated around its centre.
    """

    center: numpy.ndarray
    lam: float
    radius: float


class SolutionField(SerialisationMixin):
    """
    The superposition :math:`u = \\tilde u_b + u_o + \\sum_k u_k`.

    Parameters
    ----------
    n : int
        Space dimension.
    flat : FlatBubbleTerm, optional
        The flat bubble :math:`\\tilde u_b`.
    baseline : bool
        Whether the baseline bubble :math:`u_o` (centre 0, scale 1) is included.
    bubbles : list of BubbleTerm
        The remaining bubbles, summed in the stored order.
    tail_bound_coeff : float
        Certified bound :math:`\\tau` such that the dropped terms of the series
        are at most :math:`\\tau u_o` pointwise.
    phi : list of [r, phi(r)] pairs, optional
        Growth target the field was constructed for.
    """

    n: int = Field(ge=3)
    flat: Optional[FlatBubbleTerm] = None
    baseline: bool = False
    bubbles: List[BubbleTerm] = Field(default_factory=list)
    tail_bound_coeff: float = Field(default=0.0, ge=0)
    phi: Optional[List[Tuple[float, float]]] = None

    @model_validator(mode='after')
    def _check_terms(self):
        if self.flat is None and not self.baseline and not self.bubbles:
            raise ValueError('A solution field needs at least one term')
        for idx, term in enumerate(self.bubbles):
            if term.dim != self.n:
                raise ValueError(
                    f'Bubble {idx} has {term.dim} coordinates, the field has n={self.n}'
                )
        return self

    def dump_config(self, with_class: bool = False, exclude_none: bool = False):
        config = super().dump_config(with_class=with_class, exclude_none=exclude_none)
        if self.phi is None:
            config.pop('phi', None)
        return config

    @property
    def context(self) -> DimensionContext:
        return make_context(self.n)

    @property
    def baseline_term(self) -> BubbleTerm:
        return BubbleTerm(center=(0.0,) * self.n, lam=1.0)

    def standard_terms(self) -> Iterator[BubbleTerm]:
        """Baseline (if present) followed by the bubbles, in summation order."""
        if self.baseline:
            yield self.baseline_term
        yield from self.bubbles

    @property
    def active_dims(self) -> int:
        """
        Number of leading coordinates spanned by the bubble centres.

        The field is invariant under rotations and reflections acting on the
        remaining coordinates, which the quadrature uses to lump them.
        """
        active = 0
        for term in self.bubbles:
            nonzero = numpy.flatnonzero(term.center_array)
            if nonzero.size:
                active = max(active, int(nonzero[-1]) + 1)
        return active

    def peaks(self, radius_cap: float = 0.5) -> List[Peak]:
        """
        Bubbles away from the origin with disjoint isolation balls.

        Each radius is at most ``radius_cap`` and at most half the distance to
        the nearest other peak.
        """
        candidates = [t for t in self.bubbles if t.center_norm > 0.0]
        centers = [t.center_array for t in candidates]
        peaks = []
        for idx, term in enumerate(candidates):
            radius = radius_cap
            for jdx, other in enumerate(centers):
                if jdx == idx:
                    continue
                distance = float(numpy.linalg.norm(other - centers[idx]))
                if distance == 0.0:
                    raise ValueError(f'Bubbles {idx} and {jdx} share the centre {term.center}')
                radius = min(radius, 0.5 * distance)
            peaks.append(Peak(centers[idx], term.lam, radius))
        return peaks

    def radial_scales(self, radius_cap: float = 0.5) -> List[Tuple[float, float]]:
        """
        ``(radius, width)`` pairs of radial features seen from the origin.
        """
        scales = []
        if self.flat is not None:
            scales.append((0.0, self.flat.b))
        for term in self.standard_terms():
            if term.center_norm == 0.0:
                scales.append((0.0, term.lam))
        for peak in self.peaks(radius_cap):
            scales.append((float(numpy.linalg.norm(peak.center)), peak.radius))
        return scales

    def _sum_terms(self, y, origin, dominant=None):
        """
        Sum all terms at offsets ``y`` from ``origin``.

        If ``dominant`` holds, per point, the index of a standard bubble, the
        sums are split into that bubble and the rest.
        """
        ctx = self.context
        npts = y.shape[0]
        zero = numpy.zeros(npts)
        zero_vec = numpy.zeros((npts, self.n))
        total = [zero.copy(), zero_vec.copy(), zero.copy(), zero_vec.copy()]
        rest = [zero.copy(), zero_vec.copy(), zero.copy(), zero_vec.copy()]
        core = [zero.copy(), zero_vec.copy(), zero.copy(), zero_vec.copy()]

        if self.flat is not None:
            values = self.flat.evaluate(ctx, y + origin)
            for acc in (total, rest):
                for i in range(4):
                    acc[i] += values[i]

        for idx, term in enumerate(self.standard_terms()):
            values = term.evaluate(ctx, term.displacement(y, origin))
            for i in range(4):
                total[i] += values[i]
            if dominant is not None:
                mask = dominant == idx
                for i, (r_acc, c_acc) in enumerate(zip(rest, core)):
                    sel = mask if values[i].ndim == 1 else mask[:, None]
                    r_acc += numpy.where(sel, 0.0, values[i])
                    c_acc += numpy.where(sel, values[i], 0.0)
        return total, rest, core

    def _dominant(self, y, origin):
        ctx = self.context
        best = numpy.full(y.shape[0], -1)
        best_log = numpy.full(y.shape[0], -numpy.inf)
        for idx, term in enumerate(self.standard_terms()):
            log_u = term.log_value(ctx, term.displacement(y, origin))
            better = log_u > best_log
            best = numpy.where(better, idx, best)
            best_log = numpy.where(better, log_u, best_log)
        return best

    def _evaluate_block(self, y, origin, check):
        ctx = self.context
        p = ctx.p
        dominant = self._dominant(y, origin)
        total, rest, core = self._sum_terms(y, origin, dominant)
        u, grad, lap, _ = total
        positive = u > 0
        if check and not numpy.all(positive):
            bad = numpy.flatnonzero(~positive)[0]
            raise CurvatureError(
                f'Field value {u[bad]!r} at offset {y[bad]} from {origin} is not positive'
            )
        # Curvature and its gradient are NaN where u <= 0.
        u_safe = numpy.where(positive, u, 1.0)

        log_u = numpy.log(u_safe)
        u_p = numpy.exp(p * log_u)
        curvature = numpy.where(positive, -lap / u_p, numpy.nan)
        if check and not numpy.all(numpy.isfinite(curvature) & (curvature > 0)):
            bad = numpy.flatnonzero(~(numpy.isfinite(curvature) & (curvature > 0)))[0]
            raise CurvatureError(
                f'Induced curvature {curvature[bad]!r} at offset {y[bad]} from {origin} '
                'is not finite and positive'
            )

        # Quotient rule for K = -lap u / u^p, split around the dominant bubble B
        # (Delta B = -B^p) with the rest R:
        #   grad K = [p grad B (B^(p-1) R + Delta R)/u - grad Delta R - p K u^(p-1) grad R] / u^p
        r_val, r_grad, r_lap, r_lapgrad = rest
        b_val, b_grad = core[0], core[1]
        with numpy.errstate(divide='ignore', invalid='ignore'):
            b_pow = numpy.where(b_val > 0, numpy.exp((p - 1.0) * numpy.log(b_val)), 0.0)
        mixed = p * (b_pow * r_val + r_lap) / u_safe
        u_pm1 = numpy.exp((p - 1.0) * log_u)
        curvature_gradient = (
            mixed[:, None] * b_grad - r_lapgrad - (p * curvature * u_pm1)[:, None] * r_grad
        ) / u_p[:, None]
        curvature_gradient[~positive] = numpy.nan
        return FieldValues(u, grad, lap, curvature, curvature_gradient)

    def evaluate(self, x, origin=None, check: bool = True) -> FieldValues:
        """
        Value, gradient, Laplacian, induced curvature and its gradient at the
        points ``origin + x``.

        Raises
        ------
        CurvatureError
            If ``check`` is set and the field value or the induced curvature
            is not finite and positive somewhere. Without ``check``, points
            where the field is not positive get NaN curvature.
        """
        points = numpy.asarray(x, dtype=float)
        if points.shape[-1] != self.n:
            raise ValueError(f'Points must have {self.n} coordinates, got shape {points.shape}')
        shape = points.shape[:-1]
        flat_points = points.reshape(-1, self.n)
        origin = numpy.zeros(self.n) if origin is None else numpy.asarray(origin, dtype=float)

        parts = [
            self._evaluate_block(flat_points[start : start + _BLOCK], origin, check)
            for start in range(0, max(flat_points.shape[0], 1), _BLOCK)
        ]
        merged = [numpy.concatenate([part[i] for part in parts]) for i in range(5)]
        return FieldValues(
            merged[0].reshape(shape),
            merged[1].reshape(shape + (self.n,)),
            merged[2].reshape(shape),
            merged[3].reshape(shape),
            merged[4].reshape(shape + (self.n,)),
        )

    def _totals(self, x, origin):
        points = numpy.asarray(x, dtype=float)
        if points.shape[-1] != self.n:
            raise ValueError(f'Points must have {self.n} coordinates, got shape {points.shape}')
        origin = numpy.zeros(self.n) if origin is None else numpy.asarray(origin, dtype=float)
        shape = points.shape[:-1]
        total, _, _ = self._sum_terms(points.reshape(-1, self.n), origin)
        return total, shape

    def value(self, x, origin=None):
        total, shape = self._totals(x, origin)
        return total[0].reshape(shape)

    def gradient(self, x, origin=None):
        total, shape = self._totals(x, origin)
        return total[1].reshape(shape + (self.n,))

    def laplacian(self, x, origin=None):
        total, shape = self._totals(x, origin)
        return total[2].reshape(shape)

    def laplacian_gradient(self, x, origin=None):
        total, shape = self._totals(x, origin)
        return total[3].reshape(shape + (self.n,))

    def curvature(self, x, origin=None, check: bool = True):
        return self.evaluate(x, origin, check).curvature

    def curvature_gradient(self, x, origin=None):
        """Analytic gradient of the induced curvature."""
        return self.evaluate(x, origin, check=False).curvature_gradient

    def curvature_gradient_fd(self, x, origin=None, step: Optional[float] = None):
        """
        Central differences of the closed-form curvature.

        The default step is ``1e-6 * max(|x|, 1)``.
        """
        points = numpy.asarray(x, dtype=float)
        origin = numpy.zeros(self.n) if origin is None else numpy.asarray(origin, dtype=float)
        if step is None:
            radius = numpy.linalg.norm(points + origin, axis=-1)
            step = 1e-6 * numpy.maximum(radius, 1.0)
        step = numpy.broadcast_to(numpy.asarray(step, dtype=float), points.shape[:-1])
        result = numpy.zeros(points.shape)
        for i in range(self.n):
            shift = numpy.zeros(points.shape)
            shift[..., i] = step
            plus = self.curvature(points + shift, origin, check=False)
            minus = self.curvature(points - shift, origin, check=False)
            result[..., i] = (plus - minus) / (2.0 * step)
        return result

    def metric_factor(self, x, origin=None):
        """Conformal factor :math:`u^{4/(n-2)}` of the metric :math:`g = u^{4/(n-2)} g_o`."""
        return numpy.exp((4.0 / (self.n - 2)) * numpy.log(self.value(x, origin)))


def field_value(field: SolutionField, x, origin=None):
    return field.value(x, origin)


def field_gradient(field: SolutionField, x, origin=None):
    return field.gradient(x, origin)


def field_laplacian(field: SolutionField, x, origin=None):
    return field.laplacian(x, origin)


def induced_curvature(field: SolutionField, x, origin=None):
    """
    :math:`K = -\\Delta u / u^{(n+2)/(n-2)}`.

    Raises
    ------
    CurvatureError
        If the curvature is not finite and positive at some point.
    """
    return field.curvature(x, origin, check=True)
