# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
The ``yamabench`` command group and the options shared by its commands.
"""

from functools import wraps
from pathlib import Path
import sys

import click

from yamabench.command_line.run_config import RunConfig
from yamabench.logging import DEBUG, add_file_handler, logger
from yamabench.util import auto_post_mortem_debugger, set_max_threads
from yamabench.yaml import read_config

__all__ = ['cli', 'RunOptions', 'run_options', 'EXIT_PASS', 'EXIT_CHECK_FAILED', 'EXIT_CONFIG']

#: Exit codes: all checks passed, a check failed, configuration or I/O error.
EXIT_PASS = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2


@click.group()
@click.option(
    '--debug/--no-debug',
    'debug_',
    default=False,
    show_default=True,
    help='Enable / disable debug mode with verbose logging.',
)
@click.option(
    '--log', type=click.Path(writable=True), help='Write debug-level information to a log file.'
)
@click.option(
    '--pdb',
    'pdb_',
    default=False,
    is_flag=True,
    show_default=True,
    help='Attach Python debugger when exceptions occur.',
)
@click.pass_context
def cli(ctx, debug_, log, pdb_):
    """
    Numerical verification of explicit solutions of the conformal scalar
    curvature equation.

    Specify one of the commands to see a usage description.
    """
    if ctx.obj is None:
        ctx.obj = {}
    ctx.obj['DEBUG'] = debug_
    if debug_:
        logger.setLevel(DEBUG)
    if log:
        add_file_handler(log, DEBUG)
    if pdb_:
        sys.excepthook = auto_post_mortem_debugger


class RunOptions:
    """
    Storage object for the options added by :any:`run_options`.

    Parameters
    ----------
    config : str or None
        Path of a JSON or YAML configuration file.
    preset : str or None
        Name of a shipped preset; entries of ``config`` override it.
    out : str or None
        Output directory, overriding the configuration.
    threads : int
        Number of worker threads.
    rtol : float or None
        Quadrature tolerance, overriding the configuration.
    """

    def __init__(self, config=None, preset=None, out=None, threads=1, rtol=None):
        self.config = config
        self.preset = preset
        self.out = out
        self.threads = threads
        self.rtol = rtol

    def load(self) -> RunConfig:
        """
        The validated run configuration; defaults when neither a file nor a
        preset is given.

        Raises
        ------
        ValueError
            If the configuration does not validate (pydantic's
            ``ValidationError`` names the offending entry).
        """
        set_max_threads(self.threads)
        data = {}
        if self.config is not None or self.preset is not None:
            data = read_config(self.config, self.preset)
        config = RunConfig.from_config(data)
        updates = {}
        if self.out is not None:
            updates['out_dir'] = self.out
        if self.rtol is not None:
            updates['rtol'] = self.rtol
        if updates:
            config = RunConfig.from_config({**config.dump_config(), **updates})
        return config

    def out_dir(self, config: RunConfig) -> Path:
        return Path(self.out if self.out is not None else config.out_dir)


def run_options(func):
    """
    Decorator adding the options of a run to a sub-command:

    * ``--config``: configuration file (JSON or YAML)
    * ``--preset``: name of a shipped preset
    * ``--out``: output directory
    * ``--threads``: number of worker threads
    * ``--rtol``: quadrature tolerance

    The options are stored in a :any:`RunOptions` object that is passed to
    the sub-command as ``runopts``.
    """

    @click.option(
        '--config',
        type=click.Path(exists=True, dir_okay=False),
        default=None,
        help='Configuration file (JSON or YAML)',
    )
    @click.option('--preset', default=None, help='Name of a shipped configuration preset')
    @click.option('--out', type=click.Path(file_okay=False), default=None, help='Output directory')
    @click.option(
        '--threads', type=click.IntRange(min=1), default=1, show_default=True, help='Worker threads'
    )
    @click.option(
        '--rtol',
        type=click.FloatRange(min=0, min_open=True),
        default=None,
        help='Quadrature tolerance',
    )
    @click.pass_context
    @wraps(func)
    def process_run_options(ctx, *args, **kwargs):
        """
        Wrapper function to parse options into a utility object
        """
        runopts = RunOptions(
            config=kwargs.pop('config'),
            preset=kwargs.pop('preset'),
            out=kwargs.pop('out'),
            threads=kwargs.pop('threads'),
            rtol=kwargs.pop('rtol'),
        )
        return ctx.invoke(func, *args, **kwargs, runopts=runopts)

    return process_run_options
