# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

import math
from typing import Iterable, List, Optional

from yamabench.logging import check
from yamabench.serialisation_mixin import SerialisationMixin

__all__ = ['CheckResult', 'all_passed']


class CheckResult(SerialisationMixin):
    """
    Outcome of one verified inequality or identity.
    """

    #: Short identifier, e.g. ``'peak_height[k=3]'``.
    name: str

    #: Whether the check holds.
    passed: bool

    #: The measured quantity.
    measured: Optional[float] = None

    #: The bound it is compared with.
    bound: Optional[float] = None

    #: Signed distance to the bound; nonnegative iff the check holds.
    margin: Optional[float] = None

    #: Numerical error estimate of ``measured``.
    error_estimate: Optional[float] = None

    #: Free-form remark.
    note: str = ''

    #: Informational checks do not change the overall verdict.
    required: bool = True

    @classmethod
    def at_least(
        cls, name: str, measured: float, bound: float, error_estimate=None, note='', required=True
    ) -> 'CheckResult':
        """``measured >= bound``."""
        margin = measured - bound
        return cls._make(name, margin >= 0, measured, bound, margin, error_estimate, note, required)

    @classmethod
    def at_most(
        cls, name: str, measured: float, bound: float, error_estimate=None, note='', required=True
    ) -> 'CheckResult':
        """``measured <= bound``."""
        margin = bound - measured
        return cls._make(name, margin >= 0, measured, bound, margin, error_estimate, note, required)

    @classmethod
    def below(
        cls, name: str, measured: float, bound: float, error_estimate=None, note='', required=True
    ) -> 'CheckResult':
        """``measured < bound``."""
        margin = bound - measured
        return cls._make(name, margin > 0, measured, bound, margin, error_estimate, note, required)

    @classmethod
    def _make(cls, name, passed, measured, bound, margin, error_estimate, note, required):
        passed = bool(passed) and math.isfinite(measured)
        result = cls(
            name=name,
            passed=passed,
            measured=float(measured),
            bound=float(bound),
            margin=float(margin),
            error_estimate=None if error_estimate is None else float(error_estimate),
            note=note,
            required=required,
        )
        result.log()
        return result

    def log(self):
        detail = ''
        if self.measured is not None:
            detail = f'measured={self.measured:.10g}'
        if self.bound is not None:
            detail += f' bound={self.bound:.10g}'
        if self.note:
            detail += f' ({self.note})'
        check(self.name, self.passed or not self.required, detail)


def all_passed(checks: Iterable[CheckResult]) -> bool:
    """True if every required check passed."""
    results: List[CheckResult] = list(checks)
    return all(c.passed for c in results if c.required)
