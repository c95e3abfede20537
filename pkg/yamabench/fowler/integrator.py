# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Dormand-Prince 5(4) with a conserved-energy guard on every step.
"""

from typing import Callable, Optional

import numpy
from scipy.integrate import RK45

__all__ = ['FowlerError', 'EnergyGuardedRK45']


class FowlerError(RuntimeError):
    """
    Raised when a root of the energy equation or a period cannot be found.
    """


class EnergyGuardedRK45(RK45):
    """
    :class:`scipy.integrate.RK45` that also rejects a step whose change in a
    first integral exceeds ``energy_tol * |h| + energy_floor``.

    A rejected step is retried with half the step size from the same state.

    Parameters
    ----------
    fun, t0, y0, t_bound
        As for :class:`scipy.integrate.RK45`.
    energy : callable
        The first integral ``energy(y)``.
    energy_tol : float
        Largest energy change per unit of ``t``.
    energy_floor : float
        Energy change allowed on every step regardless of its size.
    **kwargs
        Passed on to :class:`scipy.integrate.RK45`.
    """

    def __init__(
        self,
        fun,
        t0,
        y0,
        t_bound,
        energy: Optional[Callable[[numpy.ndarray], float]] = None,
        energy_tol: float = 1e-11,
        energy_floor: float = 1e-15,
        **kwargs,
    ):
        super().__init__(fun, t0, y0, t_bound, **kwargs)
        if energy is None:
            raise ValueError('EnergyGuardedRK45 needs the first integral "energy"')
        self.energy = energy
        self.energy_tol = energy_tol
        self.energy_floor = energy_floor
        self.energy_rejections = 0

    def _step_impl(self):
        t, y, f = self.t, self.y.copy(), self.f.copy()
        start = self.energy(y)
        while True:
            success, message = super()._step_impl()
            if not success:
                return success, message
            h = abs(self.t - t)
            if abs(self.energy(self.y) - start) <= self.energy_tol * h + self.energy_floor:
                return True, None

            self.energy_rejections += 1
            min_step = 10 * numpy.abs(numpy.nextafter(t, self.direction * numpy.inf) - t)
            if 0.5 * h < min_step:
                return False, 'Required step size to conserve the energy is too small.'
            self.t, self.y, self.f = t, y.copy(), f.copy()
            self.h_abs = 0.5 * h
