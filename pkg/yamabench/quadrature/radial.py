# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Composite Gauss-Legendre rules on radial panels and the integration result record.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import math
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy
import pandas as pd
from scipy import special

from yamabench.logging import debug, warning


__all__ = [
    'PanelRecord',
    'IntegrationResult',
    'QuadratureError',
    'RadialRule',
    'gauss_legendre',
    'panel_nodes',
    'clean_breakpoints',
    'radial_integrate',
    'bisect_panel',
    'geometric_breakpoints',
    'octave_breakpoints',
]


class QuadratureError(RuntimeError):
    """
    Raised when a caller demands convergence and the quadrature did not reach it.
    """


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> Tuple[numpy.ndarray, numpy.ndarray]:
    """Gauss-Legendre nodes and weights on ``[-1, 1]``."""
    x, w = special.roots_legendre(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_nodes(a: float, b: float, order: int) -> Tuple[numpy.ndarray, numpy.ndarray]:
    """Gauss-Legendre nodes and weights mapped to ``[a, b]``."""
    x, w = gauss_legendre(order)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def clean_breakpoints(points: Iterable[float], lower: float, upper: float) -> List[float]:
    """
    Sorted breakpoints inside ``[lower, upper]`` with both ends included and
    near-duplicates removed.
    """
    inside = sorted({float(p) for p in points if lower < p < upper})
    result = [float(lower)]
    for point in inside + [float(upper)]:
        if point - result[-1] > 1e-12 * max(abs(point), abs(result[-1]), 1e-300):
            result.append(point)
        elif point == upper:
            result[-1] = float(upper)
    return result


@dataclass
class PanelRecord:
    """One accepted panel of an adaptive integration."""

    #: Which part of the integral the panel belongs to, e.g. ``'global'`` or ``'peak3'``.
    part: str
    a: float
    b: float
    sphere_order: int
    value: float
    error: float
    converged: bool


@dataclass
class IntegrationResult:
    """
    Value of an integral together with its error estimate.
    """

    value: float
    error_estimate: float
    converged: bool
    n_evals: int
    panels: List[PanelRecord] = field(default_factory=list)

    def panel_table(self) -> pd.DataFrame:
        return pd.DataFrame(
            [vars(p) for p in self.panels],
            columns=['part', 'a', 'b', 'sphere_order', 'value', 'error', 'converged'],
        )

    def require_converged(self, what: str = 'integral') -> 'IntegrationResult':
        if not self.converged:
            raise QuadratureError(
                f'Quadrature for the {what} did not converge '
                f'(value {self.value!r}, error estimate {self.error_estimate:.3e})'
            )
        return self

    @classmethod
    def combine(cls, results: Sequence['IntegrationResult']) -> 'IntegrationResult':
        """Sum of independent integrals."""
        return cls(
            value=math.fsum(r.value for r in results),
            error_estimate=math.fsum(r.error_estimate for r in results),
            converged=all(r.converged for r in results),
            n_evals=sum(r.n_evals for r in results),
            panels=[p for r in results for p in r.panels],
        )


@dataclass(frozen=True)
class RadialRule:
    """
    Composite Gauss-Legendre rule on the panels between consecutive breakpoints.
    """

    breakpoints: Tuple[float, ...]
    order: int = 16

    def nodes(self) -> Tuple[numpy.ndarray, numpy.ndarray]:
        parts = [
            panel_nodes(a, b, self.order) for a, b in zip(self.breakpoints, self.breakpoints[1:])
        ]
        if not parts:
            return numpy.zeros(0), numpy.zeros(0)
        return numpy.concatenate([p[0] for p in parts]), numpy.concatenate([p[1] for p in parts])

    def integrate(self, g: Callable[[numpy.ndarray], numpy.ndarray]) -> float:
        r, w = self.nodes()
        return float(numpy.sum(w * numpy.asarray(g(r), dtype=float)))


def bisect_panel(
    evaluate: Callable[[float, float], float],
    a: float,
    b: float,
    whole: float,
    tol: float,
    max_depth: int,
) -> List[Tuple[float, float, float, float, bool]]:
    """
    Adaptive bisection of ``[a, b]``.

    ``evaluate(a, b)`` returns the rule value on a panel and ``whole`` is its
    value on ``[a, b]``. A panel is accepted when the sum over its two halves
    differs from the whole by at most the panel tolerance; the tolerance is
    split evenly between halves. Returns ``(a, b, value, error, converged)``
    tuples in increasing order of ``a``.
    """
    accepted = []
    stack = [(a, b, whole, tol, 0)]
    while stack:
        lo, hi, value, ptol, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left = evaluate(lo, mid)
        right = evaluate(mid, hi)
        err = abs(left + right - value)
        too_small = hi - lo <= 1e-14 * max(abs(hi), 1e-300)
        if err <= ptol or depth >= max_depth or too_small:
            accepted.append((lo, hi, left + right, err, err <= ptol))
        else:
            # right first so that the left half is processed next
            stack.append((mid, hi, right, 0.5 * ptol, depth + 1))
            stack.append((lo, mid, left, 0.5 * ptol, depth + 1))
    return accepted


def radial_integrate(
    g: Callable[[numpy.ndarray], numpy.ndarray],
    breakpoints: Sequence[float],
    order: int = 16,
    rtol: float = 1e-10,
    atol: float = 0.0,
    max_depth: int = 30,
) -> IntegrationResult:
    """
    Adaptive composite Gauss-Legendre integral of ``g`` over
    ``[breakpoints[0], breakpoints[-1]]``.

    Infinite upper limits are not supported; pass a finite cut-off and add
    the analytic tail.
    """
    points = clean_breakpoints(breakpoints, breakpoints[0], breakpoints[-1])
    evals = 0

    def evaluate(a, b):
        nonlocal evals
        r, w = panel_nodes(a, b, order)
        evals += r.shape[0]
        return float(numpy.sum(w * numpy.asarray(g(r), dtype=float)))

    coarse = [evaluate(a, b) for a, b in zip(points, points[1:])]
    abs_tol = max(atol, rtol * math.fsum(abs(c) for c in coarse))

    panels = []
    for (a, b), whole in zip(zip(points, points[1:]), coarse):
        share = max(rtol * abs(whole), abs_tol / max(len(coarse), 1))
        for lo, hi, value, err, ok in bisect_panel(evaluate, a, b, whole, share, max_depth):
            panels.append(PanelRecord('radial', lo, hi, 0, value, err, ok))

    result = IntegrationResult(
        value=math.fsum(p.value for p in panels),
        error_estimate=math.fsum(p.error for p in panels),
        converged=all(p.converged for p in panels),
        n_evals=evals,
        panels=panels,
    )
    debug(
        f'[yamabench] Radial integral {result.value!r} over {len(panels)} panels '
        f'(error {result.error_estimate:.2e})'
    )
    if not result.converged:
        warning(f'[yamabench] Radial integral did not converge, error {result.error_estimate:.2e}')
    return result


def geometric_breakpoints(
    center: float, width: float, lower: float, upper: float, first: int = -2
) -> List[float]:
    """
    ``center +- width * 2**k`` for ``k >= first`` that fall inside ``(lower, upper)``.
    """
    points = []
    if width <= 0:
        return points
    k = first
    while True:
        offset = width * 2.0**k
        for point in (center - offset, center + offset):
            if lower < point < upper:
                points.append(point)
        if center - offset <= lower and center + offset >= upper:
            break
        k += 1
    return points


def octave_breakpoints(upper: float, smallest: Optional[float] = None) -> List[float]:
    """Powers of two below ``upper``, down to ``smallest`` (default ``upper / 64``)."""
    smallest = upper / 64.0 if smallest is None else smallest
    points = []
    k = math.floor(math.log2(upper))
    while 2.0**k >= smallest:
        if 2.0**k < upper:
            points.append(2.0**k)
        k -= 1
    return points
