# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Command line interface of yamabench.
"""

from yamabench.command_line.run_config import *  # noqa
from yamabench.command_line.cli import *  # noqa
from yamabench.command_line.suites import *  # noqa
from yamabench.command_line.commands import *  # noqa
