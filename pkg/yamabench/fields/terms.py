# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Closed-form building blocks of the constructed solutions.

Two kinds of terms exist:

* :class:`BubbleTerm`, the standard bubble
  :math:`\\bar u(x) = \\alpha_n (\\lambda/(\\lambda^2+|x-c|^2))^{(n-2)/2}`,
  an exact solution with :math:`K \\equiv 1`,
* :class:`FlatBubbleTerm`, the flat bubble
  :math:`\\tilde u_b(x) = (|x|^2+b^2)^{(2-n)/4}` with bounded curvature
  :math:`K_b`.

Every term evaluates its value, gradient, Laplacian and the gradient of its
Laplacian in closed form for an array of points. Points are always given
as offsets from an ``origin`` so that the distance to a bubble centre stays
exact even when the bubble scale is far below the floating point spacing of
the absolute coordinates.
"""

from typing import NamedTuple, Optional, Tuple

import numpy
from pydantic import Field, field_validator

from yamabench.core import DimensionContext, make_context
from yamabench.serialisation_mixin import SerialisationMixin
from yamabench.util import as_tuple


__all__ = [
    'TermValues',
    'BubbleTerm',
    'FlatBubbleTerm',
    'bubble_value',
    'bubble_gradient',
    'bubble_laplacian',
    'flat_bubble_value',
    'flat_bubble_curvature',
    'LOG_SPACE_LAMBDA',
    'LOG_SPACE_RADIUS',
]

#: Below this scale, bubble denominators are evaluated in log space.
LOG_SPACE_LAMBDA = 1e-12

#: Beyond this distance, denominators are evaluated in log space.
LOG_SPACE_RADIUS = 1e8


class TermValues(NamedTuple):
    """
    Closed-form derivatives of one term at an array of points.

    ``value`` and ``laplacian`` have the shape of the point array without its
    last axis; ``gradient`` and ``laplacian_gradient`` keep it.
    """

    value: numpy.ndarray
    gradient: numpy.ndarray
    laplacian: numpy.ndarray
    laplacian_gradient: numpy.ndarray


def _log_sum_of_squares(scale: float, rho2: numpy.ndarray) -> numpy.ndarray:
    """
    ``log(scale**2 + rho2)``, switching to log space for tiny scales or far points.
    """
    if scale >= LOG_SPACE_LAMBDA and numpy.all(rho2 <= LOG_SPACE_RADIUS**2):
        return numpy.log(scale * scale + rho2)
    with numpy.errstate(divide='ignore'):
        return numpy.logaddexp(2.0 * numpy.log(scale), numpy.log(rho2))


def _as_points(x, n: int) -> numpy.ndarray:
    points = numpy.asarray(x, dtype=float)
    if points.shape[-1] != n:
        raise ValueError(f'Points must have {n} coordinates, got shape {points.shape}')
    return points


class BubbleTerm(SerialisationMixin):
    """
    A standard bubble with the given centre and scale.

    The scale is stored as ``lam`` and serialised as ``lambda``.
    """

    center: Tuple[float, ...]
    lam: float = Field(alias='lambda', gt=0)

    @field_validator('center', mode='before')
    @classmethod
    def _center_as_tuple(cls, value):
        return as_tuple(value)

    @field_validator('center')
    @classmethod
    def _center_dimension(cls, value):
        if len(value) < 3:
            raise ValueError(f'Bubble centres need at least 3 coordinates, got {len(value)}')
        return value

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def center_array(self) -> numpy.ndarray:
        return numpy.asarray(self.center, dtype=float)

    @property
    def center_norm(self) -> float:
        return float(numpy.linalg.norm(self.center_array))

    def displacement(self, x, origin=None) -> numpy.ndarray:
        """
        ``origin + x - center``, with the shift applied before adding offsets.
        """
        points = _as_points(x, self.dim)
        shift = -self.center_array if origin is None else numpy.asarray(origin) - self.center_array
        return points + shift

    def peak_value(self, ctx: DimensionContext) -> float:
        """Value at the centre, :math:`\\alpha_n \\lambda^{(2-n)/2}`."""
        return float(numpy.exp(ctx.log_alpha - ctx.m * numpy.log(self.lam)))

    def log_value(self, ctx: DimensionContext, d: numpy.ndarray) -> numpy.ndarray:
        """Logarithm of the bubble at displacements ``d`` from its centre."""
        rho2 = numpy.einsum('...i,...i->...', d, d)
        log_s = _log_sum_of_squares(self.lam, rho2)
        return ctx.log_alpha + ctx.m * (numpy.log(self.lam) - log_s)

    def evaluate(self, ctx: DimensionContext, d: numpy.ndarray) -> TermValues:
        """
        Value, gradient, Laplacian and gradient of the Laplacian at
        displacements ``d`` from the centre.

        The Laplacian is :math:`-\\bar u^p` exactly.
        """
        rho2 = numpy.einsum('...i,...i->...', d, d)
        log_s = _log_sum_of_squares(self.lam, rho2)
        log_u = ctx.log_alpha + ctx.m * (numpy.log(self.lam) - log_s)

        value = numpy.exp(log_u)
        # grad u = -(n-2) u (x-c) / (lambda^2 + rho^2)
        gradient = -(ctx.n - 2) * numpy.exp(log_u - log_s)[..., None] * d
        laplacian = -numpy.exp(ctx.p * log_u)
        laplacian_gradient = -ctx.p * numpy.exp((ctx.p - 1.0) * log_u)[..., None] * gradient
        return TermValues(value, gradient, laplacian, laplacian_gradient)


class FlatBubbleTerm(SerialisationMixin):
    """
    The flat bubble :math:`(|x|^2+b^2)^{(2-n)/4}` centred at the origin.
    """

    b: float = Field(gt=0)

    def evaluate(self, ctx: DimensionContext, x: numpy.ndarray) -> TermValues:
        """
        Value and derivatives at absolute positions ``x``.

        With :math:`S = |x|^2 + b^2` and :math:`a = (2-n)/4`,

        .. math::

            \\Delta \\tilde u_b = -\\frac{(n-2)^2}{4} S^{a-1} - \\frac{n^2-4}{4} b^2 S^{a-2},

        a sum of two negative terms.
        """
        a = ctx.flat_exponent
        n = ctx.n
        rho2 = numpy.einsum('...i,...i->...', x, x)
        log_s = _log_sum_of_squares(self.b, rho2)

        value = numpy.exp(a * log_s)
        gradient = (2.0 * a) * numpy.exp((a - 1.0) * log_s)[..., None] * x

        c1 = 0.25 * (n - 2) ** 2
        c2 = 0.25 * (n * n - 4) * self.b * self.b
        laplacian = -c1 * numpy.exp((a - 1.0) * log_s) - c2 * numpy.exp((a - 2.0) * log_s)
        # d/dS of the Laplacian, both contributions positive
        slope = c1 * (1.0 - a) * numpy.exp((a - 2.0) * log_s) + c2 * (2.0 - a) * numpy.exp(
            (a - 3.0) * log_s
        )
        laplacian_gradient = 2.0 * slope[..., None] * x
        return TermValues(value, gradient, laplacian, laplacian_gradient)

    def curvature(self, ctx: DimensionContext, x: numpy.ndarray) -> numpy.ndarray:
        """
        :math:`K_b(x) = (n-2)^2/4 + ((n^2-4)/4)\\, b^2/(|x|^2+b^2)`, which is the
        same as :math:`n(n-2)/2 \\cdot (1 - (n+2)/(2n) \\cdot |x|^2/(|x|^2+b^2))`.
        """
        n = ctx.n
        rho2 = numpy.einsum('...i,...i->...', x, x)
        ratio = numpy.exp(2.0 * numpy.log(self.b) - _log_sum_of_squares(self.b, rho2))
        return 0.25 * (n - 2) ** 2 + 0.25 * (n * n - 4) * ratio


def bubble_value(term: BubbleTerm, x, origin: Optional[numpy.ndarray] = None):
    """
    :math:`\\alpha_n (\\lambda/(\\lambda^2+|x-c|^2))^{(n-2)/2}`.
    """
    ctx = make_context(term.dim)
    return numpy.exp(term.log_value(ctx, term.displacement(x, origin)))


def bubble_gradient(term: BubbleTerm, x, origin: Optional[numpy.ndarray] = None):
    ctx = make_context(term.dim)
    return term.evaluate(ctx, term.displacement(x, origin)).gradient


def bubble_laplacian(term: BubbleTerm, x, origin: Optional[numpy.ndarray] = None):
    ctx = make_context(term.dim)
    return term.evaluate(ctx, term.displacement(x, origin)).laplacian


def flat_bubble_value(term: FlatBubbleTerm, x):
    x = numpy.asarray(x, dtype=float)
    ctx = make_context(x.shape[-1])
    return term.evaluate(ctx, x).value


def flat_bubble_curvature(term: FlatBubbleTerm, x):
    """
    Curvature :math:`K_b` of the flat bubble at ``x`` (dimension from ``x``).
    """
    x = numpy.asarray(x, dtype=float)
    return term.curvature(make_context(x.shape[-1]), x)
