# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
The package logger, colour templates and the PASS/FAIL line of a check.
"""

import logging
import sys


__all__ = [
    'debug',
    'header',
    'info',
    'warning',
    'success',
    'error',
    'check',
    'logger',
    'colors',
    'add_file_handler',
    'DEBUG',
    'INFO',
    'WARNING',
    'ERROR',
]

#: ANSI codes of the templates in :class:`colors`.
_ANSI = {
    'HEADER': '95',
    'OKBLUE': '94',
    'OKGREEN': '92',
    'WARNING': '93',
    'FAIL': '91',
    'BOLD': '1',
}


class colors:
    """
    Formatting templates for log messages, e.g. ``colors.FAIL % msg``

    Attributes
    ----------
    HEADER : str
        Section headers of a verification run
    OKBLUE : str
        Progress messages
    OKGREEN : str
        Passed checks
    WARNING : str
        Non-fatal numerical conditions such as unconverged panels
    FAIL : str
        Failed checks and errors
    BOLD : str
        Emphasis
    """

    @staticmethod
    def enable():
        """
        Wrap messages in ANSI escape sequences
        """
        for name, code in _ANSI.items():
            setattr(colors, name, f'\033[{code}m%s\033[0m')

    @staticmethod
    def disable():
        """
        Leave messages unformatted
        """
        for name in _ANSI:
            setattr(colors, name, '%s')


if sys.stdout.isatty():
    colors.enable()
else:
    colors.disable()


logger = logging.getLogger('yamabench')
logger.addHandler(logging.StreamHandler())
logger.setLevel(logging.INFO)

INFO = logging.INFO
DEBUG = logging.DEBUG
WARNING = logging.WARNING
ERROR = logging.ERROR


def add_file_handler(path, level=DEBUG):
    """
    Attach a :any:`logging.FileHandler` writing to ``path`` to the package logger.
    """
    file_handler = logging.FileHandler(path, mode='w')
    file_handler.setLevel(level)
    logger.addHandler(file_handler)
    return file_handler


def _log(level, style, msg, *args, **kwargs):
    logger.log(level, getattr(colors, style) % msg, *args, **kwargs)


def debug(msg, *args, **kwargs):
    _log(DEBUG, 'OKBLUE', msg, *args, **kwargs)


def header(msg, *args, **kwargs):
    _log(INFO, 'HEADER', msg, *args, **kwargs)


def info(msg, *args, **kwargs):
    _log(INFO, 'OKBLUE', msg, *args, **kwargs)


def success(msg, *args, **kwargs):
    _log(INFO, 'OKGREEN', msg, *args, **kwargs)


def warning(msg, *args, **kwargs):
    _log(WARNING, 'WARNING', msg, *args, **kwargs)


def error(msg, *args, **kwargs):
    _log(ERROR, 'FAIL', msg, *args, **kwargs)


def check(name, passed, detail=''):
    """
    Log the outcome of a single verification check as a PASS/FAIL line.

    Passed checks go out at ``INFO``, failed ones at ``ERROR``.
    """
    line = f'{name} {detail}'.rstrip()
    if passed:
        success(f'[PASS] {line}')
    else:
        error(f'[FAIL] {line}')
