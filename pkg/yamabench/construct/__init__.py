# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

from yamabench.construct.sequences import *  # noqa
from yamabench.construct.domination import *  # noqa
from yamabench.construct.unbounded import *  # noqa
from yamabench.construct.growth import *  # noqa
from yamabench.construct.report import *  # noqa
