# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Comparison of result tables with recorded baselines.
"""

from yamabench.validation.frame_close_validation import *  # noqa
