# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Rules for the sequences :math:`\\epsilon_k`, :math:`r_k` and :math:`M_k` that
parametrise the constructions.

A rule is selected in a configuration by its ``class_name``:

.. code-block:: json

    {"class_name": "GeometricSequence", "scale": 1.0, "ratio": 0.5}
"""

from abc import abstractmethod
import math
from typing import List

from pydantic import Field, model_validator

from yamabench.serialisation_mixin import SubclassableSerialisationMixin


__all__ = [
    'SequenceRule',
    'GeometricSequence',
    'ExponentialSequence',
    'LinearSequence',
    'TabulatedSequence',
]


class SequenceRule(SubclassableSerialisationMixin):
    """
    A real sequence indexed by ``k >= 1``.
    """

    @abstractmethod
    def value(self, k: int) -> float:
        """The ``k``-th term."""
        return NotImplemented

    def values(self, count: int) -> List[float]:
        """Terms ``1, ..., count``."""
        return [self.value(k) for k in range(1, count + 1)]

    def tail_sum(self, start: int) -> float:
        """
        :math:`\\sum_{k \\ge start} a_k`, or ``inf`` if the series diverges.
        """
        return math.inf


class GeometricSequence(SequenceRule):
    """``scale * ratio**k``."""

    scale: float = 1.0
    ratio: float = Field(default=0.5, gt=0)

    def value(self, k: int) -> float:
        return self.scale * self.ratio**k

    def tail_sum(self, start: int) -> float:
        if self.ratio >= 1.0:
            return math.inf if self.scale > 0 else 0.0
        return self.scale * self.ratio**start / (1.0 - self.ratio)


class ExponentialSequence(SequenceRule):
    """``scale * exp(rate * k)``."""

    scale: float = 1.0
    rate: float = 1.0

    def value(self, k: int) -> float:
        return self.scale * math.exp(self.rate * k)

    def tail_sum(self, start: int) -> float:
        if self.rate >= 0.0:
            return math.inf if self.scale > 0 else 0.0
        ratio = math.exp(self.rate)
        return self.scale * ratio**start / (1.0 - ratio)


class LinearSequence(SequenceRule):
    """``slope * k + offset``."""

    slope: float = 1.0
    offset: float = 0.0

    def value(self, k: int) -> float:
        return self.slope * k + self.offset

    def tail_sum(self, start: int) -> float:
        if self.slope == 0.0 and self.offset == 0.0:
            return 0.0
        return math.inf


class TabulatedSequence(SequenceRule):
    """
    Explicit terms ``values[k-1]``; terms beyond the table equal ``tail``.
    """

    values_: List[float] = Field(alias='values', min_length=1)
    tail: float = 0.0

    @model_validator(mode='after')
    def _check_values(self):
        if not all(math.isfinite(v) for v in self.values_):
            raise ValueError('Tabulated sequence values must be finite')
        return self

    def value(self, k: int) -> float:
        if k < 1:
            raise ValueError(f'Sequences are indexed from 1, got k={k}')
        if k <= len(self.values_):
            return self.values_[k - 1]
        return self.tail

    def tail_sum(self, start: int) -> float:
        if self.tail != 0.0:
            return math.inf
        return math.fsum(self.values_[max(start, 1) - 1 :])
