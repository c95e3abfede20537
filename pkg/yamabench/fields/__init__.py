# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

from yamabench.fields.terms import *  # noqa
from yamabench.fields.solution import *  # noqa
from yamabench.fields.sampling import *  # noqa
