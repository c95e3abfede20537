# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Dimension-dependent constants shared by every other module.

For the conformal scalar curvature equation

.. math::

    \\Delta u + K u^{(n+2)/(n-2)} = 0 \\quad\\text{on } \\mathbb{R}^n

all exponents and normalisations only depend on the dimension ``n``. They are
collected in :class:`DimensionContext`, which is created (and cached) by
:func:`make_context`.
"""

from fractions import Fraction
from functools import lru_cache
import math

import numpy
from pydantic import ConfigDict, Field, model_validator
from scipy import integrate, optimize, special

from yamabench.logging import debug
from yamabench.serialisation_mixin import SerialisationMixin


__all__ = [
    'DimensionContext',
    'make_context',
    'sphere_area',
    'v_n_closed_form',
    'bubble_mass_fraction',
    'bubble_mass_median',
    'bubble_mass_tail',
    'positive_power',
]


def sphere_area(n: int) -> float:
    """
    Area of the unit sphere :math:`S^{n-1} \\subset \\mathbb{R}^n`,
    :math:`\\omega_n = 2\\pi^{n/2}/\\Gamma(n/2)`.

    ``n = 1`` gives the two-point sphere :math:`S^0` with counting measure 2.
    """
    if n < 1:
        raise ValueError(f'Sphere area needs n >= 1, got {n}')
    return math.exp(math.log(2.0) + 0.5 * n * math.log(math.pi) - special.gammaln(0.5 * n))


def positive_power(base, exponent):
    """
    ``base ** exponent`` for positive ``base``, evaluated as ``exp(exponent * log(base))``.
    """
    return numpy.exp(exponent * numpy.log(base))


class DimensionContext(SerialisationMixin):
    """
    Exponents and normalisation constants for dimension ``n``.

    Use :func:`make_context` rather than creating instances directly; it fills
    in every derived member and caches the result.

    Parameters
    ----------
    n : int
        Space dimension, at least 3.
    p : float
        Critical exponent :math:`(n+2)/(n-2)`.
    q : float
        :math:`2n/(n-2) = p + 1`, the exponent of the volume form.
    m : float
        Decay exponent :math:`(n-2)/2` of a bubble.
    alpha_n : float
        Bubble amplitude :math:`[n(n-2)]^{(n-2)/4}`.
    sphere_area : float
        :math:`\\omega_n`, area of the unit sphere :math:`S^{n-1}`.
    V_n : float
        Total mass :math:`\\int_{\\mathbb{R}^n} \\bar u^{2n/(n-2)}` of a bubble,
        obtained by radial quadrature.
    """

    model_config = ConfigDict(frozen=True, validate_assignment=False)

    n: int = Field(ge=3)
    p: float
    q: float
    m: float
    alpha_n: float = Field(gt=0)
    sphere_area: float = Field(gt=0)
    V_n: float = Field(gt=0)

    @property
    def p_exact(self) -> Fraction:
        return Fraction(self.n + 2, self.n - 2)

    @property
    def q_exact(self) -> Fraction:
        return Fraction(2 * self.n, self.n - 2)

    @property
    def log_alpha(self) -> float:
        return 0.25 * (self.n - 2) * math.log(self.n * (self.n - 2))

    @property
    def flat_exponent(self) -> float:
        """Exponent :math:`(2-n)/4` of the flat bubble."""
        return 0.25 * (2 - self.n)

    @model_validator(mode='after')
    def _check_exponents(self):
        # Exact statements, independent of the floating point members.
        if self.q_exact * (self.n - 2) != 2 * self.n or self.p_exact * (self.n - 2) != self.n + 2:
            raise ValueError(f'Inconsistent exponents for n={self.n}')
        if abs(self.p - float(self.p_exact)) > 1e-15 or abs(self.q - float(self.q_exact)) > 1e-15:
            raise ValueError(f'Exponents p={self.p}, q={self.q} do not match n={self.n}')
        return self


def _radial_mass(n: int) -> float:
    """
    :math:`\\int_0^\\infty t^{n-1} (1+t^2)^{-n} dt`.

    The substitution :math:`t \\mapsto 1/t` maps :math:`[1, \\infty)` onto
    :math:`(0, 1]` with the same integrand, so only the unit interval is
    integrated.
    """
    half, abserr = integrate.quad(
        lambda t: t ** (n - 1) / (1.0 + t * t) ** n, 0.0, 1.0, epsabs=1e-300, epsrel=1e-14, limit=200
    )
    debug(f'[yamabench] Radial bubble mass for n={n}: {2.0 * half!r} (error {2.0 * abserr:.2e})')
    return 2.0 * half


@lru_cache(maxsize=None)
def make_context(n: int) -> DimensionContext:
    """
    Create the :class:`DimensionContext` for dimension ``n``.

    Raises
    ------
    ValueError
        If ``n < 3``.
    """
    if int(n) != n or n < 3:
        raise ValueError(f'The dimension must be an integer n >= 3, got {n}')
    n = int(n)

    omega = sphere_area(n)
    log_nn = math.log(n * (n - 2))
    # alpha_n^q = (n(n-2))^(n/2)
    mass_factor = math.exp(0.5 * n * log_nn)

    return DimensionContext(
        n=n,
        p=(n + 2) / (n - 2),
        q=2 * n / (n - 2),
        m=0.5 * (n - 2),
        alpha_n=math.exp(0.25 * (n - 2) * log_nn),
        sphere_area=omega,
        V_n=omega * mass_factor * _radial_mass(n),
    )


def v_n_closed_form(n: int) -> float:
    """
    Bubble mass from the Beta function,
    :math:`V_n = \\omega_n (n(n-2))^{n/2} B(n/2, n/2) / 2`.
    """
    if n < 3:
        raise ValueError(f'The dimension must be n >= 3, got {n}')
    log_value = (
        math.log(sphere_area(n))
        + 0.5 * n * math.log(n * (n - 2))
        + special.betaln(0.5 * n, 0.5 * n)
        - math.log(2.0)
    )
    return math.exp(log_value)


def bubble_mass_fraction(n: int, t):
    """
    Fraction of the bubble mass inside the radius ``t * lambda``.

    This is :math:`F(t) = \\int_0^t s^{n-1}(1+s^2)^{-n} ds` normalised by its
    limit, which equals the regularised incomplete Beta function
    :math:`I_{t^2/(1+t^2)}(n/2, n/2)`.
    """
    t = numpy.asarray(t, dtype=float)
    t2 = t * t
    return special.betainc(0.5 * n, 0.5 * n, t2 / (1.0 + t2))


@lru_cache(maxsize=None)
def bubble_mass_median(n: int) -> float:
    """
    Radius ``t`` (in units of ``lambda``) with :math:`F(t) = 1/2`.

    The symmetry :math:`F(1/t) = 1 - F(t)` puts the median at ``t = 1`` for
    every ``n``; it is computed here by root finding so the value is an
    independent check of that statement.
    """
    return optimize.brentq(
        lambda t: bubble_mass_fraction(n, t) - 0.5, 1e-3, 1e3, xtol=1e-15, rtol=1e-15
    )


def bubble_mass_tail(ctx: DimensionContext, lam: float, radius: float) -> float:
    """
    Mass of a bubble of scale ``lam`` centred at the origin outside the ball of
    the given ``radius``.
    """
    if lam <= 0 or radius < 0:
        raise ValueError(f'Need lam > 0 and radius >= 0, got lam={lam}, radius={radius}')
    # 1 - F(R/lam) = F(lam/R), evaluated without cancellation.
    x = lam * lam / (lam * lam + radius * radius)
    return ctx.V_n * float(special.betainc(0.5 * ctx.n, 0.5 * ctx.n, x))
