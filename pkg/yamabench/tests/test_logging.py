# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

import logging

import pytest

from yamabench.logging import add_file_handler, check, colors, logger


@pytest.fixture(name='plain_colors')
def fixture_plain_colors():
    colors.disable()
    yield
    colors.disable()


@pytest.mark.parametrize('passed,prefix', [(True, '[PASS]'), (False, '[FAIL]')])
def test_check_line(caplog, plain_colors, passed, prefix):  # pylint: disable=unused-argument
    with caplog.at_level(logging.INFO, logger='yamabench'):
        check('pohozaev_forms[r=5]', passed, '1.0e-09 <= 1.0e-07')
    assert caplog.records[-1].getMessage() == f'{prefix} pohozaev_forms[r=5] 1.0e-09 <= 1.0e-07'
    expected = logging.INFO if passed else logging.ERROR
    assert caplog.records[-1].levelno == expected


def test_colors_enable():
    colors.enable()
    try:
        assert colors.FAIL % 'x' == '\033[91mx\033[0m'
    finally:
        colors.disable()
    assert colors.FAIL % 'x' == 'x'


def test_file_handler(tmp_path, plain_colors):  # pylint: disable=unused-argument
    path = tmp_path / 'run.log'
    handler = add_file_handler(path)
    try:
        check('round_trip[s=0]', True)
    finally:
        logger.removeHandler(handler)
        handler.close()
    assert path.read_text().strip() == '[PASS] round_trip[s=0]'
