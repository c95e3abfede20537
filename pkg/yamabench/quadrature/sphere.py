# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Product quadrature rules on the unit sphere :math:`S^{n-1}`.

A point of :math:`S^{k-1}` is written as :math:`(t, \\sqrt{1-t^2}\\,\\eta)`
with :math:`\\eta \\in S^{k-2}`, so that
:math:`d\\omega = (1-t^2)^{(k-3)/2}\\, dt\\, d\\eta`. The rule takes
Gauss-Jacobi nodes in ``t`` (Gauss-Legendre for ``k = 3``) and recurses
down to a trapezoid rule on :math:`S^1`.

Integrands that only depend on the first ``active_dims`` coordinates and on
the norm of the remaining ones are integrated exactly over the remaining
coordinates by lumping them into a symmetric pair of nodes.
"""

from dataclasses import dataclass
from functools import lru_cache
import math
from typing import Callable, NamedTuple, Optional, Sequence, Tuple

import numpy
from scipy import special

from yamabench.core import sphere_area
from yamabench.quadrature.settings import QuadratureSettings


__all__ = [
    'SphereRule',
    'sphere_rule',
    'sphere_node_count',
    'cap_rule',
    'local_frame',
    'sphere_integrate',
    'sphere_integrate_adaptive',
    'SphereIntegral',
]


@dataclass(frozen=True)
class SphereRule:
    """
    Nodes and weights on :math:`S^{n-1}`.

    Attributes
    ----------
    n : int
        Ambient dimension.
    order : int
        Number of nodes per polar coordinate.
    nodes : numpy.ndarray
        Unit vectors, shape ``(count, n)``.
    weights : numpy.ndarray
        Positive weights. For a full sphere they sum to :math:`\\omega_n`.
    active_dims : int
        Leading coordinates resolved by the rule.
    """

    n: int
    order: int
    nodes: numpy.ndarray
    weights: numpy.ndarray
    active_dims: int

    def __len__(self):
        return self.weights.shape[0]

    def rotated(self, frame: numpy.ndarray) -> 'SphereRule':
        """
        The rule with node ``e_i`` mapped to column ``i`` of the orthogonal
        matrix ``frame``.
        """
        return SphereRule(self.n, self.order, self.nodes @ frame.T, self.weights, self.active_dims)


def _polar_nodes(k: int, order: int) -> Tuple[numpy.ndarray, numpy.ndarray]:
    """Nodes in ``t`` for the weight :math:`(1-t^2)^{(k-3)/2}`."""
    if k == 3:
        return special.roots_legendre(order)
    alpha = 0.5 * (k - 3)
    return special.roots_jacobi(order, alpha, alpha)


def _combine(t, w_t, sub_nodes, sub_weights):
    sin_t = numpy.sqrt(numpy.maximum(0.0, 1.0 - t * t))
    count = t.shape[0] * sub_nodes.shape[0]
    nodes = numpy.empty((count, sub_nodes.shape[1] + 1))
    nodes[:, 0] = numpy.repeat(t, sub_nodes.shape[0])
    nodes[:, 1:] = (sin_t[:, None, None] * sub_nodes[None, :, :]).reshape(count, -1)
    weights = numpy.outer(w_t, sub_weights).ravel()
    return nodes, weights


@lru_cache(maxsize=None)
def _sphere_nodes(k: int, order: int, active: int) -> Tuple[numpy.ndarray, numpy.ndarray]:
    if k == 1:
        return numpy.array([[1.0], [-1.0]]), numpy.array([1.0, 1.0])

    if active <= 0:
        nodes = numpy.zeros((2, k))
        nodes[0, 0] = 1.0
        nodes[1, 0] = -1.0
        half = 0.5 * sphere_area(k)
        return nodes, numpy.array([half, half])

    if k == 2 and active >= 2:
        count = 2 * order
        angles = 2.0 * math.pi * numpy.arange(count) / count
        nodes = numpy.stack([numpy.cos(angles), numpy.sin(angles)], axis=-1)
        return nodes, numpy.full(count, 2.0 * math.pi / count)

    t, w_t = _polar_nodes(k, order)
    sub_nodes, sub_weights = _sphere_nodes(k - 1, order, active - 1)
    return _combine(t, w_t, sub_nodes, sub_weights)


def sphere_node_count(n: int, order: int, active_dims: Optional[int] = None) -> int:
    """Number of nodes of :func:`sphere_rule` without building it."""
    active = n if active_dims is None else max(0, min(int(active_dims), n))
    count = 1
    k = n
    while True:
        if k == 1 or active <= 0:
            return 2 * count
        if k == 2:
            return 2 * order * count
        count *= order
        k -= 1
        active -= 1


@lru_cache(maxsize=128)
def sphere_rule(n: int, order: int, active_dims: Optional[int] = None) -> SphereRule:
    """
    Product rule on :math:`S^{n-1}` with ``order`` nodes per polar angle.

    Parameters
    ----------
    n : int
        Ambient dimension (at least 2).
    order : int
        Number of nodes per polar coordinate; the final azimuth of a full rule
        uses ``2 * order`` equispaced nodes.
    active_dims : int, optional
        Only the first ``active_dims`` coordinates are resolved. The default
        resolves all of them.
    """
    if n < 2:
        raise ValueError(f'Sphere rules need n >= 2, got {n}')
    if order < 1:
        raise ValueError(f'The rule order must be positive, got {order}')
    active = n if active_dims is None else max(0, min(int(active_dims), n))
    nodes, weights = _sphere_nodes(n, int(order), active)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return SphereRule(n, int(order), nodes, weights, active)


def cap_rule(n: int, order: int, t_max: float, active_dims: Optional[int] = None) -> SphereRule:
    """
    Rule on the cap :math:`\\{\\omega \\in S^{n-1}: \\omega_1 \\le t_{max}\\}`.

    The first coordinate is parametrised by the polar angle
    :math:`\\varphi \\in [\\arccos t_{max}, \\pi]`, which turns the weight
    :math:`(1-t^2)^{(n-3)/2} dt` into the smooth :math:`\\sin^{n-2}\\varphi\\, d\\varphi`.
    """
    active = n if active_dims is None else max(1, min(int(active_dims), n))
    if t_max >= 1.0:
        return sphere_rule(n, order, active)
    if t_max <= -1.0:
        return SphereRule(n, order, numpy.zeros((0, n)), numpy.zeros(0), active)

    x, w = special.roots_legendre(order)
    phi_min = math.acos(t_max)
    half = 0.5 * (math.pi - phi_min)
    phi = phi_min + half * (x + 1.0)
    w_phi = half * w * numpy.sin(phi) ** (n - 2)

    sub_nodes, sub_weights = _sphere_nodes(n - 1, int(order), active - 1)
    nodes, weights = _combine(numpy.cos(phi), w_phi, sub_nodes, sub_weights)
    return SphereRule(n, int(order), nodes, weights, active)


def local_frame(center: numpy.ndarray, active_dims: int) -> numpy.ndarray:
    """
    Orthogonal matrix whose first column is the direction of ``center``.

    The next columns complete the span of the first ``active_dims`` unit
    vectors; the remaining columns are the unit vectors that follow them.
    ``center`` must lie in that span.
    """
    n = center.shape[0]
    active = max(1, min(active_dims, n))
    basis = [center / numpy.linalg.norm(center)]
    for i in range(n):
        if len(basis) == active:
            break
        vec = numpy.zeros(n)
        vec[i] = 1.0
        for other in basis:
            vec -= numpy.dot(other, vec) * other
        norm = numpy.linalg.norm(vec)
        if norm > 1e-8:
            basis.append(vec / norm)
    for i in range(active, n):
        vec = numpy.zeros(n)
        vec[i] = 1.0
        basis.append(vec)
    return numpy.stack(basis, axis=1)


def sphere_integrate(
    rule: SphereRule, f: Callable[[numpy.ndarray], numpy.ndarray], r: float
) -> float:
    """
    :math:`\\int_{S^{n-1}} f(r\\theta)\\, d\\theta` for a vectorised ``f``.

    The surface integral over the sphere of radius ``r`` is this value times
    :math:`r^{n-1}`.
    """
    if r <= 0:
        raise ValueError(f'The radius must be positive, got {r}')
    values = numpy.asarray(f(r * rule.nodes), dtype=float)
    return float(numpy.sum(rule.weights * values))


class SphereIntegral(NamedTuple):
    """Result of :func:`sphere_integrate_adaptive`."""

    value: numpy.ndarray
    error_estimate: float
    converged: bool
    order: int


def sphere_integrate_adaptive(
    f: Callable[[numpy.ndarray], numpy.ndarray],
    n: int,
    r: float,
    active_dims: Optional[int] = None,
    settings: Optional[QuadratureSettings] = None,
    widths: Sequence[float] = (),
) -> SphereIntegral:
    """
    :math:`\\int_{S^{n-1}} f(r\\theta)\\, d\\theta` with the sphere order
    doubled until two consecutive orders agree.

    ``f`` maps points of shape ``(N, n)`` to values of shape ``(N,)`` or
    ``(N, k)``; the latter integrates ``k`` functions at once. ``widths`` are
    the angular widths of features of ``f`` on this sphere; the first order
    tried resolves the narrowest of them.
    """
    settings = (QuadratureSettings() if settings is None else settings).resolved()
    if r <= 0:
        raise ValueError(f'The radius must be positive, got {r}')
    active = n if active_dims is None else max(0, min(int(active_dims), n))

    def integrate(order):
        rule = sphere_rule(n, order, active)
        values = numpy.asarray(f(r * rule.nodes), dtype=float)
        return numpy.tensordot(rule.weights, values, axes=(0, 0))

    def allowed(order):
        return (
            order <= settings.max_sphere_order
            and sphere_node_count(n, order, active) <= settings.max_sphere_nodes
        )

    order = settings.sphere_order
    target = max((2.0 * math.pi / w for w in widths if w > 0), default=0.0)
    while order < target and allowed(2 * order):
        order *= 2

    value = integrate(order)
    if active == 0:
        return SphereIntegral(value, 0.0, True, order)

    while True:
        scale = float(numpy.max(numpy.abs(value))) if numpy.size(value) else 0.0
        tol = max(settings.rtol * scale, settings.atol)
        if not allowed(2 * order):
            error = float(numpy.max(numpy.abs(value - integrate(max(order // 2, 1)))))
            return SphereIntegral(value, error, error <= tol, order)
        new_value = integrate(2 * order)
        error = float(numpy.max(numpy.abs(new_value - value)))
        order, value = 2 * order, new_value
        if error <= tol:
            return SphereIntegral(value, error, True, order)
