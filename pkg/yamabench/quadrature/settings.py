# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

from typing import Optional

from pydantic import Field

from yamabench.serialisation_mixin import SerialisationMixin

__all__ = ['QuadratureSettings', 'SMALL_SCALE', 'SMALL_SCALE_RTOL']

#: Fields with a bubble scale below this default to the looser tolerance below.
SMALL_SCALE = 1e-4
SMALL_SCALE_RTOL = 1e-6


class QuadratureSettings(SerialisationMixin):
    """
    Orders and tolerances of the sphere and ball quadratures.
    """

    #: Gauss-Legendre nodes per radial panel.
    radial_order: int = Field(default=12, ge=2)
    #: Initial number of nodes per polar angle of the sphere rules.
    sphere_order: int = Field(default=8, ge=2)
    #: Largest sphere order that may be used.
    max_sphere_order: int = Field(default=8192, ge=2)
    #: Largest number of sphere nodes per radius.
    max_sphere_nodes: int = Field(default=400_000, ge=2)
    #: Relative tolerance. ``None`` selects 1e-8, or 1e-6 for fields with very sharp bubbles.
    rtol: Optional[float] = Field(default=None, gt=0)
    #: Absolute tolerance floor.
    atol: float = Field(default=1e-15, ge=0)
    #: Largest number of radial bisections of an initial panel.
    max_depth: int = Field(default=20, ge=0)
    #: Largest radius of the ball integrated around a peak.
    local_radius: float = Field(default=0.5, gt=0)

    def with_rtol(self, rtol: Optional[float]) -> 'QuadratureSettings':
        if rtol is None:
            return self
        return self.model_copy(update={'rtol': rtol})

    def resolved(self, smallest_scale: float = 1.0) -> 'QuadratureSettings':
        """
        Settings with a definite ``rtol`` for a field whose sharpest bubble
        has scale ``smallest_scale``.
        """
        if self.rtol is not None:
            return self
        rtol = SMALL_SCALE_RTOL if smallest_scale < SMALL_SCALE else 1e-8
        return self.model_copy(update={'rtol': rtol})
