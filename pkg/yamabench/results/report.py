# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd
from pydantic import Field

from yamabench.logging import info
from yamabench.pydantic_utils import PydanticDataFrame
from yamabench.results.checks import CheckResult, all_passed
from yamabench.serialisation_mixin import SerialisationMixin

__all__ = ['VerificationReport', 'write_table', 'read_table', 'CSV_FLOAT_FORMAT', 'tool_version']

#: Seventeen significant digits round-trip every double.
CSV_FLOAT_FORMAT = '%.17g'


def tool_version() -> str:
    # pylint: disable=import-outside-toplevel
    from importlib.metadata import PackageNotFoundError, version

    try:
        return version('yamabench')
    except PackageNotFoundError:
        return 'unknown'


def write_table(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    """
    Write a table as CSV with '.' decimals and 17 significant digits.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')
    return path


def read_table(path: Union[str, Path]) -> pd.DataFrame:
    return pd.read_csv(path, float_precision='round_trip')


class VerificationReport(SerialisationMixin):
    """
    Result of one CLI command: checks, tables and free-form sections.

    Reports contain no time stamps, so identical inputs give identical files.
    """

    #: The producing command, e.g. ``'verify'``.
    command: str

    tool: str = 'yamabench'

    version: str = Field(default_factory=tool_version)

    #: SHA-256 of the canonical configuration.
    config_hash: str = ''

    checks: List[CheckResult] = Field(default_factory=list)

    #: Named result sections, e.g. curvature bounds or the Fowler fixed point.
    data: Dict[str, Any] = Field(default_factory=dict)

    #: Numerical tables, also written as CSV files next to the report.
    frames: Dict[str, PydanticDataFrame] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all_passed(self.checks)

    def add(self, *checks: CheckResult) -> 'VerificationReport':
        self.checks = self.checks + list(checks)
        return self

    def summary(self) -> Dict[str, Any]:
        failed = [c.name for c in self.checks if c.required and not c.passed]
        return {
            'command': self.command,
            'passed': self.passed,
            'n_checks': len(self.checks),
            'failed': failed,
        }

    def write(self, out_dir: Union[str, Path], name: Optional[str] = None) -> Path:
        """
        Write ``<name>.json`` and one CSV file per table into ``out_dir``.
        """
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        name = name or self.command
        for key, frame in self.frames.items():
            write_table(frame, out_dir / f'{key}.csv')
        path = out_dir / f'{name}.json'
        path.write_text(json.dumps(self.dump_config(), indent=2) + '\n', encoding='utf-8')
        info(f'[yamabench] Wrote {path} ({len(self.checks)} checks, {len(self.frames)} tables)')
        return path
