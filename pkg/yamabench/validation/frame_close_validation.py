# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

from dataclasses import dataclass
from pathlib import Path
from typing import Any, List, Tuple, Union

import numpy
import pandas as pd

from yamabench.logging import debug, error, info
from yamabench.results import CheckResult, read_table

__all__ = ['FrameCloseValidation', 'validate_against_baseline']


@dataclass
class FrameCloseValidation:
    """
    Compare result tables with :func:`numpy.isclose`.

    Only the float columns of both tables are compared; the tables must
    have the same shape and column names. NaN entries match each other.
    """

    #: The absolute tolerance that is used.
    atol: float = 0

    #: The relative tolerance that is used.
    rtol: float = 0

    def compare(
        self, frame1: pd.DataFrame, frame2: pd.DataFrame
    ) -> Tuple[bool, List[Tuple[Any, Any]]]:
        """
        Compare two tables.

        Returns
        -------
        bool:
          Whether the float columns agree up to the tolerances.
        List[Tuple[Any, Any]]:
          The (row, column) positions where they do not. The list is empty
          if the tables differ in shape or columns.
        """
        frame1 = frame1.select_dtypes(include='float')
        frame2 = frame2.select_dtypes(include='float')

        if not frame1.index.equals(frame2.index):
            return False, []

        if not frame1.columns.equals(frame2.columns):
            return False, []

        close = numpy.isclose(
            frame1.values, frame2.values, rtol=self.rtol, atol=self.atol, equal_nan=True
        )
        mismatch = [(frame1.index[i], frame1.columns[j]) for i, j in numpy.argwhere(~close)]
        return bool(numpy.all(close)), mismatch


def validate_against_baseline(
    run_dir: Union[str, Path],
    baseline_dir: Union[str, Path],
    atol: float = 0,
    rtol: float = 1e-10,
) -> List[CheckResult]:
    """
    Compare every CSV table of ``baseline_dir`` with the table of the same
    name in ``run_dir``.

    Returns
    -------
    list of CheckResult
        One check ``baseline[<table>]`` per baseline table, measuring the
        number of mismatching entries.
    """
    run_dir, baseline_dir = Path(run_dir), Path(baseline_dir)
    validator = FrameCloseValidation(atol=atol, rtol=rtol)
    baselines = sorted(baseline_dir.glob('*.csv'))
    if not baselines:
        raise ValueError(f'No baseline tables in {baseline_dir}')

    info(f'[yamabench] Validating {len(baselines)} tables against {baseline_dir}')
    checks = []
    for reference_path in baselines:
        name = f'baseline[{reference_path.stem}]'
        path = run_dir / reference_path.name
        if not path.exists():
            error(f'[yamabench] Table {path} is missing')
            result = CheckResult(name=name, passed=False, note=f'{path.name} not produced')
            result.log()
            checks.append(result)
            continue

        frame, reference = read_table(path), read_table(reference_path)
        equal, mismatch = validator.compare(frame, reference)
        if not equal and not mismatch:
            error(
                f'[yamabench] Tables {path.name} differ in shape or columns: '
                f'{frame.shape} {list(frame.columns)} != '
                f'{reference.shape} {list(reference.columns)}'
            )
            result = CheckResult(name=name, passed=False, note='shape or columns differ')
            result.log()
            checks.append(result)
            continue

        if mismatch:
            idx, col = mismatch[0]
            error(
                f'[yamabench] First mismatch in {path.name} at ({idx}, {col}): '
                f'{frame.loc[idx, col]!r} != {reference.loc[idx, col]!r}'
            )
            with pd.option_context('display.max_rows', None, 'display.max_columns', None):
                debug(f'result data:\n{frame}')
                debug(f'reference data:\n{reference}')
        checks.append(CheckResult.at_most(name, len(mismatch), 0, note=f'atol={atol}, rtol={rtol}'))
    return checks
