# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
The radial cylinder ODE: fixed point, homoclinic orbit and necksize family.
"""

from yamabench.fowler.integrator import *  # noqa
from yamabench.fowler.orbit import *  # noqa
