# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
The sub-commands of ``yamabench``.
"""

import json
from pathlib import Path

import click
import numpy
import pandas as pd
import yaml

from yamabench.analysis import CylinderField, diagnostics, pohozaev_number
from yamabench.command_line.cli import EXIT_CHECK_FAILED, EXIT_CONFIG, cli, run_options
from yamabench.command_line.run_config import RunConfig
from yamabench.command_line.suites import SUITE_NAMES, run_suites
from yamabench.construct import (
    ConstructionAParams,
    LambdaSelectionError,
    build_prescribed_growth,
    build_unbounded,
    verify_prescribed_growth,
    verify_unbounded,
)
from yamabench.core import make_context
from yamabench.fields import SolutionField
from yamabench.fowler import (
    fixed_point,
    fowler_energy,
    homoclinic,
    integrate_orbit,
    linearised_period,
    necksize_family,
    necksize_orbit,
    ode_residual_bounded_derivative,
    to_fowler_normalisation,
    turning_points,
)
from yamabench.logging import error, info, success
from yamabench.results import CheckResult, VerificationReport
from yamabench.util import config_hash, parse_float_list
from yamabench.validation import validate_against_baseline

# Commands register with ``cli``; exporting ``construct`` would shadow the subpackage.
__all__ = ['CONFIG_ERRORS', 'CHECK_NECKSIZE']

#: Errors that mean the input could not be read or did not validate.
CONFIG_ERRORS = (ValueError, OSError, yaml.YAMLError)

#: Necksize of the orbit used by ``fowler --check``.
CHECK_NECKSIZE = 0.3


def _load_config(ctx, runopts) -> RunConfig:
    try:
        return runopts.load()
    except CONFIG_ERRORS as exc:
        error(f'[yamabench] Invalid configuration: {exc}')
        ctx.exit(EXIT_CONFIG)


def _load_field(ctx, field_file) -> SolutionField:
    try:
        return SolutionField.from_json_file(field_file)
    except CONFIG_ERRORS as exc:
        error(f'[yamabench] Cannot read the field {field_file}: {exc}')
        ctx.exit(EXIT_CONFIG)


def _finish(ctx, result: VerificationReport):
    if result.passed:
        success(f'[yamabench] {result.command}: all {len(result.checks)} checks passed')
        return
    failed = result.summary()['failed']
    error(f'[yamabench] {result.command}: {len(failed)} checks failed: {", ".join(failed)}')
    ctx.exit(EXIT_CHECK_FAILED)


@cli.command()
@run_options
@click.pass_context
def construct(ctx, runopts):
    """
    Build construction A or B and verify its inequalities.

    Writes ``field.json``, ``construct.json`` and ``bubbles.csv`` to the
    output directory.
    """
    config = _load_config(ctx, runopts)
    params = config.construction
    if params is None:
        error('[yamabench] The configuration has no "construction" block')
        ctx.exit(EXIT_CONFIG)

    try:
        if isinstance(params, ConstructionAParams):
            field = build_unbounded(params)
            verified = verify_unbounded(field, params, config.sampling)
        else:
            field = build_prescribed_growth(params)
            verified = verify_prescribed_growth(field, params, config.sampling)
    except LambdaSelectionError as exc:
        error(f'[yamabench] Construction {params.construction} failed: {exc}')
        ctx.exit(EXIT_CHECK_FAILED)

    out_dir = runopts.out_dir(config)
    out_dir.mkdir(parents=True, exist_ok=True)
    field_path = out_dir / 'field.json'
    field_path.write_text(json.dumps(field.dump_config(), indent=2) + '\n', encoding='utf-8')
    info(f'[yamabench] Wrote {field_path} with {len(field.bubbles)} bubbles')

    result = VerificationReport(
        command='construct',
        config_hash=config.digest(),
        checks=verified.checks,
        data={'construction': verified.construction, 'n': field.n},
        frames={'bubbles': verified.bubbles},
    )
    result.write(out_dir)
    _finish(ctx, result)


@cli.command()
@click.argument('field_file', type=click.Path(exists=True, dir_okay=False))
@click.option(
    '--suite',
    type=click.Choice(SUITE_NAMES),
    default='all',
    show_default=True,
    help='Verification suite to run',
)
@click.option(
    '--baseline',
    type=click.Path(exists=True, file_okay=False),
    default=None,
    help='Directory of CSV tables to compare the results with',
)
@run_options
@click.pass_context
def verify(ctx, field_file, suite, baseline, runopts):
    """
    Run verification suites on the field in FIELD_FILE.

    The report is written even when a suite fails part way.
    """
    config = _load_config(ctx, runopts)
    field = _load_field(ctx, field_file)
    out_dir = runopts.out_dir(config)

    result = VerificationReport(
        command='verify',
        config_hash=config_hash(
            {'config': config.digest(), 'field': field.dump_config(), 'suite': suite}
        ),
        data={'suite': suite, 'n': field.n},
    )
    try:
        run_suites(field, config, suite, result)
    finally:
        result.write(out_dir)

    if baseline is not None:
        result.add(
            *validate_against_baseline(
                out_dir, baseline, atol=config.baseline_atol, rtol=config.baseline_rtol
            )
        )
        result.write(out_dir)
    _finish(ctx, result)


def _homoclinic_section(n: int, s_max: float, result: VerificationReport):
    ctx = make_context(n)
    s = numpy.linspace(0.0, s_max, 201)
    orbit = integrate_orbit(ctx, 1.0, 0.0, (0.0, s_max), s_eval=s)
    exact = homoclinic(ctx.n, orbit.trajectory['s'].to_numpy())
    v = orbit.trajectory['v'].to_numpy()
    deviation = numpy.abs(v - exact)
    result.frames['homoclinic'] = pd.DataFrame(
        {'s': orbit.trajectory['s'], 'v': v, 'closed_form': exact, 'error': deviation}
    )
    result.add(
        CheckResult.at_most('homoclinic_error', float(numpy.max(deviation)), 1e-8),
        CheckResult.at_most('homoclinic_energy_drift', orbit.energy_drift, 1e-9),
    )

    # u_o in cylinder coordinates, rescaled, is the homoclinic orbit
    baseline = CylinderField(SolutionField(n=ctx.n, baseline=True))
    theta = numpy.eye(ctx.n)[:1].repeat(len(s), axis=0)
    v_bubble = to_fowler_normalisation(ctx.n, baseline.v(s, theta))
    exact = homoclinic(ctx.n, s)
    result.add(
        CheckResult.at_most(
            'bubble_is_homoclinic', float(numpy.max(numpy.abs(v_bubble - exact) / exact)), 1e-12
        )
    )


def _family_checks(ctx, family: pd.DataFrame, result: VerificationReport):
    orbit = necksize_orbit(ctx, CHECK_NECKSIZE)
    low, high = turning_points(ctx, CHECK_NECKSIZE)
    long_orbit = integrate_orbit(ctx, CHECK_NECKSIZE, 0.0, (0.0, 50.0))
    bound = ode_residual_bounded_derivative(orbit)
    result.add(
        CheckResult.at_most('necksize_recovery', abs(orbit.necksize - CHECK_NECKSIZE), 1e-6),
        CheckResult.at_most('turning_point_low', abs(low - CHECK_NECKSIZE), 1e-12),
        CheckResult.at_most('turning_point_high', abs(orbit.v_max - high), 1e-7),
        CheckResult.at_most('energy_drift', long_orbit.energy_drift, 1e-9),
        CheckResult.at_most(
            'derivative_bound', bound.max_v_prime, bound.analytic_bound * (1.0 + 1e-9)
        ),
    )

    ordered = family.sort_values('eps')
    periods = ordered['period'].to_numpy()
    eps = ordered['eps'].to_numpy()
    for idx in range(1, len(periods)):
        name = f'period_decreasing[eps={eps[idx]:g}]'
        result.add(CheckResult.below(name, periods[idx], periods[idx - 1]))
    if len(periods):
        result.add(
            CheckResult.at_least(
                'period_above_linearised',
                float(numpy.min(periods)),
                linearised_period(ctx.n),
                required=False,
            )
        )


@cli.command()
@click.option(
    '--n', 'n', type=click.IntRange(min=3), default=3, show_default=True, help='Dimension'
)
@click.option('--eps', default=None, help='Comma-separated necksizes of the orbit family')
@click.option(
    '--homoclinic',
    'homoclinic_',
    is_flag=True,
    default=False,
    help='Integrate the homoclinic orbit',
)
@click.option(
    '--fixed-point', 'fixed_point_', is_flag=True, default=False, help='Print the fixed point'
)
@click.option('--check', is_flag=True, default=False, help='Verify against the closed forms')
@click.option(
    '--s-max', type=click.FloatRange(min=0, min_open=True), default=10.0, show_default=True,
    help='Length of the homoclinic trajectory',
)
@run_options
@click.pass_context
def fowler(ctx, n, eps, homoclinic_, fixed_point_, check, s_max, runopts):
    """
    Orbits of the radial cylinder equation: the fixed point, the homoclinic
    orbit and the family of periodic orbits indexed by their necksize.
    """
    config = _load_config(ctx, runopts)
    context = make_context(n)
    v_star = fixed_point(context)
    if fixed_point_:
        click.echo(f'{v_star:.6f}')
        if not (homoclinic_ or eps or check):
            return

    try:
        eps_grid = parse_float_list(eps)
    except ValueError as exc:
        error(f'[yamabench] Invalid necksizes: {exc}')
        ctx.exit(EXIT_CONFIG)
    if eps_grid is None:
        eps_grid = config.grids.eps_grid

    result = VerificationReport(
        command='fowler',
        config_hash=config_hash(
            {'n': n, 'eps': eps_grid, 'homoclinic': homoclinic_, 's_max': s_max}
        ),
        data={
            'n': n,
            'fixed_point': v_star,
            'fixed_point_energy': float(fowler_energy(context, v_star, 0.0)),
            'linearised_period': linearised_period(n),
        },
    )
    if homoclinic_:
        _homoclinic_section(n, s_max, result)
    if eps is not None or not homoclinic_:
        try:
            family = necksize_family(context, eps_grid)
        except ValueError as exc:
            error(f'[yamabench] Invalid necksizes: {exc}')
            ctx.exit(EXIT_CONFIG)
        result.frames['fowler_family'] = family
        if check:
            _family_checks(context, family, result)

    result.write(runopts.out_dir(config))
    _finish(ctx, result)


@cli.command()
@click.argument('field_file', type=click.Path(exists=True, dir_okay=False))
@run_options
@click.pass_context
def diagnose(ctx, field_file, runopts):
    """
    Measure the hypotheses of the classification results on the field in
    FIELD_FILE over ``grids.s_grid``, and estimate its Pohozaev number.
    """
    config = _load_config(ctx, runopts)
    field = _load_field(ctx, field_file)
    settings = config.quadrature_settings()

    measured = diagnostics(field, config.grids.s_grid, config.diagnostics, settings)
    number = pohozaev_number(field, max(config.grids.pohozaev_radii), settings=settings)
    result = VerificationReport(
        command='diagnose',
        config_hash=config_hash({'config': config.digest(), 'field': field.dump_config()}),
        data={
            'settings': measured.settings.dump_config(),
            'pohozaev_inf': measured.pohozaev_inf,
            'delta_candidate': measured.delta_candidate,
            'pohozaev_number': number.dump_config(),
        },
        frames={'diagnostics': measured.table},
    )
    result.write(runopts.out_dir(config))
    _finish(ctx, result)


@cli.command()
@click.argument('directory', type=click.Path(exists=True, file_okay=False))
@click.pass_context
def report(ctx, directory):
    """
    Merge the reports in DIRECTORY into ``summary.json``.
    """
    directory = Path(directory)
    reports = {}
    for path in sorted(directory.glob('*.json')):
        if path.name == 'summary.json':
            continue
        try:
            data = json.loads(path.read_text(encoding='utf-8'))
        except (OSError, ValueError) as exc:
            error(f'[yamabench] Cannot read {path}: {exc}')
            ctx.exit(EXIT_CONFIG)
        if not isinstance(data, dict) or 'command' not in data:
            continue
        reports[path.stem] = VerificationReport.from_config(data)

    if not reports:
        error(f'[yamabench] No reports in {directory}')
        ctx.exit(EXIT_CONFIG)

    summary = {
        'tool': 'yamabench',
        'passed': all(r.passed for r in reports.values()),
        'reports': {name: r.summary() for name, r in reports.items()},
        'tables': {
            name: sorted(r.frames) for name, r in reports.items() if r.frames
        },
    }
    path = directory / 'summary.json'
    path.write_text(json.dumps(summary, indent=2) + '\n', encoding='utf-8')
    info(f'[yamabench] Wrote {path} from {len(reports)} reports')
    if not summary['passed']:
        ctx.exit(EXIT_CHECK_FAILED)


@cli.command()
def schema():
    """
    Print the JSON schema of the run configuration.
    """
    click.echo(json.dumps(RunConfig.model_json_schema(), indent=2))
