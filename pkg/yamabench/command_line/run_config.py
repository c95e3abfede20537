# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
The configuration of a command line run.
"""

from typing import List, Optional, Union

from pydantic import Field, field_validator

try:
    from typing import Annotated
except ImportError:
    from typing_extensions import Annotated

from yamabench.analysis import DiagnosticsSettings
from yamabench.construct import ConstructionAParams, ConstructionBParams
from yamabench.fields import SamplingPlan
from yamabench.quadrature import QuadratureSettings
from yamabench.serialisation_mixin import SerialisationMixin
from yamabench.util import config_hash

__all__ = ['GridSettings', 'RunConfig', 'ConstructionParams']

#: Either construction, selected by its ``construction`` key.
ConstructionParams = Annotated[
    Union[ConstructionAParams, ConstructionBParams], Field(discriminator='construction')
]


def _increasing(values: List[float], what: str) -> List[float]:
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f'{what} must be increasing, got {values}')
    return values


class GridSettings(SerialisationMixin):
    """
    Radii, cylinder times and necksizes the suites are evaluated on.
    """

    #: Radii of the growth tables.
    r_list: List[float] = Field(default_factory=lambda: [2.0, 3.0, 4.0, 5.0, 6.0, 10.0])
    #: Radii of the Pohozaev and energy identity checks.
    pohozaev_radii: List[float] = Field(default_factory=lambda: [1.0, 5.0, 10.0, 50.0])
    #: Values of :math:`s = \\ln r` of the cylinder checks and diagnostics.
    s_grid: List[float] = Field(default_factory=lambda: [0.0, 1.0, 2.0])
    #: Necksizes of the Fowler family.
    eps_grid: List[float] = Field(default_factory=lambda: [0.05, 0.1, 0.2, 0.4])

    @field_validator('r_list', 'pohozaev_radii')
    @classmethod
    def _check_radii(cls, values, info):
        if any(r <= 0 for r in values):
            raise ValueError(f'{info.field_name} must hold positive radii, got {values}')
        return _increasing(values, info.field_name)

    @field_validator('s_grid')
    @classmethod
    def _check_s_grid(cls, values):
        return _increasing(values, 's_grid')


class RunConfig(SerialisationMixin):
    """
    Everything a run depends on. Its JSON schema is printed by
    ``yamabench schema``.
    """

    #: Parameters of construction A or B; only ``construct`` requires them.
    construction: Optional[ConstructionParams] = None

    quadrature: QuadratureSettings = Field(default_factory=QuadratureSettings)

    sampling: SamplingPlan = Field(default_factory=SamplingPlan)

    diagnostics: DiagnosticsSettings = Field(default_factory=DiagnosticsSettings)

    grids: GridSettings = Field(default_factory=GridSettings)

    out_dir: str = 'yamabench-out'

    #: Overrides the relative tolerance of the quadrature.
    rtol: Optional[float] = Field(default=None, gt=0)

    #: Tolerances of ``verify --baseline``.
    baseline_atol: float = Field(default=0.0, ge=0)
    baseline_rtol: float = Field(default=1e-10, ge=0)

    def quadrature_settings(self) -> QuadratureSettings:
        return self.quadrature.with_rtol(self.rtol)

    def digest(self) -> str:
        """
        Hash of the configuration without the output directory, so the same
        run written to two places has the same hash.
        """
        config = self.dump_config()
        config.pop('out_dir', None)
        return config_hash(config)
