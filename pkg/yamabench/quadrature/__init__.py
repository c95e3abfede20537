# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Quadrature on balls and spheres for integrands with localised peaks.
"""

from yamabench.quadrature.radial import *  # noqa
from yamabench.quadrature.sphere import *  # noqa
from yamabench.quadrature.ball import *  # noqa
from yamabench.quadrature.settings import *  # noqa
