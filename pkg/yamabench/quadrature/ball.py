# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Integration over the ball :math:`B_o(R) \\subset \\mathbb{R}^n` for integrands
with sharp peaks.

The integrand is split with a smooth partition of unity. Every peak ``j``
(a bubble centre ``c_j`` with scale ``lambda_j``) owns a bump
:math:`\\psi_j`, equal to one on :math:`B(c_j, \\rho_j/2)` and zero outside
:math:`B(c_j, \\rho_j)`; the balls :math:`B(c_j, \\rho_j)` are disjoint.

* :math:`\\int f \\psi_j` is integrated in polar coordinates around ``c_j``
  with radial panels refined geometrically down to :math:`\\lambda_j/4`.
  Where the sphere :math:`|x| = R` cuts the local ball, each local sphere is
  restricted to the exact cap inside :math:`B_o(R)`.
* :math:`\\int f (1 - \\sum_j \\psi_j)` is integrated by the radial times
  sphere product rule around the origin.

All panels are independent. Each one raises its sphere order until two
orders agree and then bisects radially until the two halves agree with the
whole. Panel values are summed with :func:`math.fsum` in a fixed order, so
the result does not depend on the number of worker threads.
"""

import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy
from scipy import special

from yamabench.logging import debug, warning
from yamabench.quadrature.radial import (
    IntegrationResult,
    PanelRecord,
    bisect_panel,
    clean_breakpoints,
    geometric_breakpoints,
    octave_breakpoints,
    panel_nodes,
)
from yamabench.quadrature.sphere import (
    SphereRule,
    cap_rule,
    local_frame,
    sphere_node_count,
    sphere_rule,
)
from yamabench.quadrature.settings import QuadratureSettings
from yamabench.util import parallel_map


__all__ = ['BallIntegrand', 'partition_bump', 'ball_integrate']

#: ``f(offsets, origin)`` evaluated at the points ``origin + offsets``.
BallIntegrand = Callable[[numpy.ndarray, numpy.ndarray], numpy.ndarray]


def partition_bump(t):
    """
    Smooth step, one for ``t <= 1/2`` and zero for ``t >= 1``.
    """
    t = numpy.asarray(t, dtype=float)
    s = numpy.clip(2.0 * t - 1.0, 0.0, 1.0)
    inner = (s > 0.0) & (s < 1.0)
    safe = numpy.where(inner, s, 0.5)
    with numpy.errstate(over='ignore'):
        smooth = special.expit(1.0 / safe - 1.0 / (1.0 - safe))
    return numpy.where(s <= 0.0, 1.0, numpy.where(s >= 1.0, 0.0, smooth))


class _Peak:
    """Local frame and rules of one peak."""

    def __init__(self, center, lam, radius, active):
        self.center = numpy.asarray(center, dtype=float)
        self.lam = float(lam)
        self.radius = float(radius)
        self.distance = float(numpy.linalg.norm(self.center))
        self.active = max(1, active)
        self.frame = local_frame(self.center, self.active)

    def breakpoints(self, R: float) -> List[float]:
        points = [0.5 * self.radius]
        if self.lam < self.radius:
            scale = 0.25 * self.lam
            while scale < self.radius:
                points.append(scale)
                scale *= 2.0
        cut = abs(R - self.distance)
        if 0.0 < cut < self.radius:
            points.append(cut)
        return clean_breakpoints(points, 0.0, self.radius)


class _BallProblem:
    """
    All panels of one ball integral.
    """

    def __init__(self, f, R, n, peaks, scales, active, settings):
        self.f = f
        self.R = float(R)
        self.n = int(n)
        self.active = self.n if active is None else int(active)
        self.settings = settings
        self.peaks = [
            _Peak(c, lam, rad, self.active)
            for c, lam, rad in peaks
            # peaks entirely outside the ball contribute nothing
            if numpy.linalg.norm(c) - rad < R
        ]
        self.scales = list(scales)
        self.evals = 0

    # -- panel lists ---------------------------------------------------------

    def global_breakpoints(self) -> List[float]:
        points = octave_breakpoints(self.R)
        for center, width in self.scales:
            points += geometric_breakpoints(center, width, 0.0, self.R)
        for peak in self.peaks:
            points += geometric_breakpoints(peak.distance, 0.5 * peak.radius, 0.0, self.R, first=0)
        return clean_breakpoints(points, 0.0, self.R)

    def initial_panels(self) -> List[Tuple[int, float, float]]:
        """``(part, a, b)`` with ``part = -1`` for the global integral."""
        bps = self.global_breakpoints()
        panels = [(-1, a, b) for a, b in zip(bps, bps[1:])]
        for idx, peak in enumerate(self.peaks):
            bps = peak.breakpoints(self.R)
            panels += [(idx, a, b) for a, b in zip(bps, bps[1:])]
        return panels

    def sphere_count(self, order: int) -> int:
        return sphere_node_count(self.n, order, self.active)

    # -- panel evaluation ----------------------------------------------------

    def _global_panel(self, a, b, order) -> float:
        r, w = panel_nodes(a, b, self.settings.radial_order)
        rule = sphere_rule(self.n, order, self.active)
        points = (r[:, None, None] * rule.nodes[None, :, :]).reshape(-1, self.n)

        weight = numpy.ones(points.shape[0])
        for peak in self.peaks:
            dist = numpy.linalg.norm(points - peak.center, axis=-1)
            near = dist < peak.radius
            if numpy.any(near):
                weight[near] -= partition_bump(dist[near] / peak.radius)

        values = numpy.zeros(points.shape[0])
        keep = weight > 0.0
        if numpy.any(keep):
            origin = numpy.zeros(self.n)
            values[keep] = weight[keep] * self.f(points[keep], origin)
            self.evals += int(numpy.count_nonzero(keep))

        per_radius = values.reshape(r.shape[0], -1) @ rule.weights
        return float(numpy.sum(w * r ** (self.n - 1) * per_radius))

    def _local_rule(self, peak: _Peak, r: float, order: int) -> SphereRule:
        if peak.distance + r <= self.R:
            return sphere_rule(self.n, order, self.active).rotated(peak.frame)
        t_max = (self.R**2 - peak.distance**2 - r * r) / (2.0 * r * peak.distance)
        return cap_rule(self.n, order, t_max, self.active).rotated(peak.frame)

    def _local_panel(self, peak: _Peak, a, b, order) -> float:
        r, w = panel_nodes(a, b, self.settings.radial_order)
        bump = partition_bump(r / peak.radius)

        chunks, owners, node_weights = [], [], []
        for i, radius in enumerate(r):
            if bump[i] == 0.0:
                continue
            rule = self._local_rule(peak, radius, order)
            if len(rule) == 0:
                continue
            chunks.append(radius * rule.nodes)
            node_weights.append(rule.weights)
            owners.append(numpy.full(len(rule), i))
        if not chunks:
            return 0.0

        points = numpy.concatenate(chunks)
        values = self.f(points, peak.center) * numpy.concatenate(node_weights)
        self.evals += points.shape[0]
        per_radius = numpy.bincount(numpy.concatenate(owners), weights=values, minlength=r.shape[0])
        return float(numpy.sum(w * r ** (self.n - 1) * bump * per_radius))

    def evaluate(self, part: int, a: float, b: float, order: int) -> float:
        if part < 0:
            return self._global_panel(a, b, order)
        return self._local_panel(self.peaks[part], a, b, order)

    # -- adaptivity ----------------------------------------------------------

    def start_order(self, part: int, a: float, b: float) -> int:
        """
        Sphere order of a global panel that resolves the angular width of
        the features left by nearby peaks.
        """
        settings = self.settings
        order = settings.sphere_order
        if part >= 0:
            return order
        target = 0.0
        for peak in self.peaks:
            gap = max(0.0, a - peak.distance, peak.distance - b)
            width = max(0.5 * peak.radius, gap) / b
            target = max(target, 2.0 * math.pi / width)
        while (
            order < target
            and 2 * order <= settings.max_sphere_order
            and self.sphere_count(2 * order) <= settings.max_sphere_nodes
        ):
            order *= 2
        return order

    def refine(self, panel, coarse: float, abs_tol: float, n_panels: int) -> List[PanelRecord]:
        part, a, b = panel
        settings = self.settings
        label = 'global' if part < 0 else f'peak{part}'

        order = self.start_order(part, a, b)
        value = coarse if order == settings.sphere_order else self.evaluate(part, a, b, order)
        sphere_err = 0.0
        sphere_ok = True
        # a purely radial integrand is integrated exactly by any order
        if not (part < 0 and self.active == 0):
            while True:
                tol = max(settings.rtol * abs(value), abs_tol / n_panels)
                new_order = 2 * order
                if (
                    new_order > settings.max_sphere_order
                    or self.sphere_count(new_order) > settings.max_sphere_nodes
                ):
                    # no finer rule allowed, compare with the coarser one instead
                    sphere_err = abs(value - self.evaluate(part, a, b, max(order // 2, 1)))
                    sphere_ok = sphere_err <= tol
                    break
                new_value = self.evaluate(part, a, b, new_order)
                sphere_err = abs(new_value - value)
                order, value = new_order, new_value
                if sphere_err <= max(settings.rtol * abs(value), abs_tol / n_panels):
                    break

        share = max(settings.rtol * abs(value), abs_tol / n_panels)
        pieces = bisect_panel(
            lambda lo, hi: self.evaluate(part, lo, hi, order),
            a,
            b,
            value,
            share,
            settings.max_depth,
        )
        records = [
            PanelRecord(label, lo, hi, order, val, err, ok and sphere_ok)
            for lo, hi, val, err, ok in pieces
        ]
        records[0].error += sphere_err
        return records


def ball_integrate(
    f: BallIntegrand,
    R: float,
    n: int,
    peaks: Sequence[Tuple[numpy.ndarray, float, float]] = (),
    scales: Sequence[Tuple[float, float]] = (),
    active_dims: Optional[int] = None,
    settings: Optional[QuadratureSettings] = None,
) -> IntegrationResult:
    """
    :math:`\\int_{B_o(R)} f\\, dx`.

    Parameters
    ----------
    f : callable
        ``f(offsets, origin)`` returning the integrand at ``origin + offsets``
        for an array of offsets of shape ``(count, n)``.
    R : float
        Radius of the ball.
    n : int
        Space dimension.
    peaks : sequence of (center, lambda, radius)
        Peaks of the integrand with disjoint isolation balls, e.g. from
        :meth:`SolutionField.peaks`.
    scales : sequence of (radius, width)
        Radial features seen from the origin; panels are refined
        geometrically around each of them.
    active_dims : int, optional
        ``f`` only depends on the first ``active_dims`` coordinates and the
        norm of the others. Defaults to ``n``.
    settings : QuadratureSettings, optional
        Orders and tolerances.

    Returns
    -------
    IntegrationResult
        The value with its error estimate; ``converged`` is false if any
        panel hit the sphere order or bisection depth limits.
    """
    if R <= 0:
        raise ValueError(f'The radius must be positive, got {R}')
    settings = (QuadratureSettings() if settings is None else settings).resolved()
    problem = _BallProblem(f, R, n, peaks, scales, active_dims, settings)

    panels = problem.initial_panels()
    coarse = parallel_map(
        lambda p: problem.evaluate(p[0], p[1], p[2], settings.sphere_order), panels
    )
    abs_tol = max(settings.atol, settings.rtol * math.fsum(abs(c) for c in coarse))

    refined = parallel_map(
        lambda item: problem.refine(item[0], item[1], abs_tol, len(panels)),
        list(zip(panels, coarse)),
    )
    records = [record for group in refined for record in group]

    result = IntegrationResult(
        value=math.fsum(r.value for r in records),
        error_estimate=math.fsum(r.error for r in records),
        converged=all(r.converged for r in records),
        n_evals=problem.evals,
        panels=records,
    )
    debug(
        f'[yamabench] Ball integral over B(0, {R:g}): {result.value!r} '
        f'(error {result.error_estimate:.2e}, {len(records)} panels, '
        f'{len(problem.peaks)} peaks, {result.n_evals} evaluations)'
    )
    if not result.converged:
        warning(
            f'[yamabench] Ball integral over B(0, {R:g}) has unconverged panels, '
            f'error estimate {result.error_estimate:.2e}'
        )
    return result
