# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Measured functionals of a solution field: Pohozaev functional, growth,
cylinder transform and hypothesis diagnostics.
"""

from yamabench.analysis.integrals import *  # noqa
from yamabench.analysis.pohozaev import *  # noqa
from yamabench.analysis.cylinder import *  # noqa
from yamabench.analysis.growth import *  # noqa
from yamabench.analysis.diagnostics import *  # noqa
