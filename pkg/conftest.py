# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

import numpy
import pytest

from yamabench import BubbleTerm, FlatBubbleTerm, SolutionField


@pytest.fixture(name='rng')
def fixture_rng():
    """Seeded random generator for reproducible sample points."""
    return numpy.random.default_rng(42)


@pytest.fixture(name='flat_field')
def fixture_flat_field():
    """The flat bubble with ``b = 1`` in three dimensions."""
    return SolutionField(n=3, flat=FlatBubbleTerm(b=1.0))


@pytest.fixture(name='baseline_field')
def fixture_baseline_field():
    """The baseline bubble :math:`u_o` in three dimensions."""
    return SolutionField(n=3, baseline=True)


@pytest.fixture(name='offset_field')
def fixture_offset_field():
    """A single bubble away from the origin, an exact solution with ``K = 1``."""
    return SolutionField(n=3, bubbles=[BubbleTerm(center=(2.0, 0.0, 0.0), lam=0.5)])
