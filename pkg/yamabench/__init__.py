# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
yamabench: numerical verification of explicit solutions of the conformal
scalar curvature equation

This package builds superpositions of bubbles, evaluates their induced
curvature in closed form and checks integral identities, growth rates and
the radial cylinder equation on them.
"""

from importlib.metadata import version, PackageNotFoundError

from yamabench.core import *  # noqa
from yamabench.fields import *  # noqa
from yamabench.quadrature import *  # noqa
from yamabench.construct import *  # noqa
from yamabench.analysis import *  # noqa
from yamabench.fowler import *  # noqa
from yamabench.results import *  # noqa
from yamabench.validation import *  # noqa
from yamabench.command_line import *  # noqa
from yamabench.logging import *  # noqa
from yamabench.pydantic_utils import *  # noqa
from yamabench.serialisation_mixin import *  # noqa
from yamabench.util import *  # noqa
from yamabench.yaml import *  # noqa

try:
    __version__ = version('yamabench')
except PackageNotFoundError:
    # package is not installed
    pass
