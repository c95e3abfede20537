# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Test the ``yamabench`` command group, its common options and the exit codes
of the sub-commands.
"""

import json
import re

from click.testing import CliRunner
import pytest
import yaml

from yamabench import CheckResult, SolutionField, VerificationReport
from yamabench.command_line.cli import (
    EXIT_CHECK_FAILED,
    EXIT_CONFIG,
    EXIT_PASS,
    RunOptions,
    cli,
    run_options,
)
from yamabench.util import set_max_threads


@pytest.fixture(scope='module', name='runner')
def fixture_runner():
    """Provides a :any:`CliRunner` instance"""
    return CliRunner()


@pytest.fixture(name='single_thread', autouse=True)
def fixture_single_thread():
    yield
    set_max_threads(1)


@pytest.fixture(scope='module', name='runopts_cmd')
def fixture_runopts_cmd():
    """
    Instantiate a helper command that prints :any:`RunOptions`
    """

    @cli.command('runopts-cmd')
    @run_options
    def _runopts_cmd(runopts):
        print(f'config = {runopts.config}')
        print(f'preset = {runopts.preset}')
        print(f'out = {runopts.out}')
        print(f'threads = {runopts.threads}')
        print(f'rtol = {runopts.rtol}')

    return _runopts_cmd


_output_pattern = re.compile(r'^(\w+) = (.+)$', re.MULTILINE)


def parse_output(string):
    """Utility routine to parse the output of the test commands"""
    return {match[1]: match[2] for match in _output_pattern.finditer(string)}


def _write_yaml(path, data):
    path.write_text(yaml.safe_dump(data), encoding='utf-8')
    return path


@pytest.fixture(name='construction_config')
def fixture_construction_config(tmp_path):
    """A small construction A with a coarse sampling plan."""
    return _write_yaml(
        tmp_path / 'unbounded.yaml',
        {
            'construction': {
                'construction': 'A',
                'n': 3,
                'K_max': 3,
                'eps_rule': {'class_name': 'GeometricSequence', 'scale': 1.0, 'ratio': 0.5},
                'r_rule': {'class_name': 'ExponentialSequence', 'scale': 1.0, 'rate': 1.0},
                'M_rule': {'class_name': 'LinearSequence', 'slope': 1.0, 'offset': 0.0},
            },
            'sampling': {
                'grid_radius': 30.0,
                'grid_resolution': 15,
                'ray_samples': 41,
                'local_shells': 6,
            },
        },
    )


@pytest.fixture(name='baseline_file')
def fixture_baseline_file(tmp_path):
    path = tmp_path / 'baseline.json'
    path.write_text(json.dumps(SolutionField(n=3, baseline=True).dump_config()))
    return path


@pytest.fixture(name='small_grids')
def fixture_small_grids(tmp_path):
    return _write_yaml(
        tmp_path / 'grids.yaml',
        {'grids': {'pohozaev_radii': [1.0, 2.0], 's_grid': [0.0, 0.5], 'r_list': [2.0, 3.0]}},
    )


@pytest.mark.usefixtures('runopts_cmd')
@pytest.mark.parametrize(
    'options,expected',
    [
        ([], {'config': 'None', 'preset': 'None', 'out': 'None', 'threads': '1', 'rtol': 'None'}),
        (['--preset', 'unbounded-n3'], {'preset': 'unbounded-n3'}),
        (['--out', 'results', '--threads', '4'], {'out': 'results', 'threads': '4'}),
        (['--rtol', '1e-6'], {'rtol': '1e-06'}),
    ],
)
def test_run_options(runner, options, expected):
    result = runner.invoke(cli, ['runopts-cmd', *options])
    assert result.exit_code == 0, result.output
    output = parse_output(result.output)
    for key, value in expected.items():
        assert output[key] == value


@pytest.mark.usefixtures('runopts_cmd')
@pytest.mark.parametrize('options', [['--threads', '0'], ['--rtol', '0'], ['--rtol', '-1']])
def test_run_options_invalid(runner, options):
    result = runner.invoke(cli, ['runopts-cmd', *options])
    assert result.exit_code == 2


def test_run_options_load(tmp_path, small_grids):
    config = RunOptions(config=str(small_grids), out=str(tmp_path / 'out'), rtol=1e-7).load()

    assert config.grids.pohozaev_radii == [1.0, 2.0]
    assert config.out_dir == str(tmp_path / 'out')
    assert config.rtol == 1e-7
    assert config.quadrature_settings().rtol == 1e-7


def test_run_options_defaults():
    options = RunOptions()
    config = options.load()

    assert config.construction is None
    assert str(options.out_dir(config)) == 'yamabench-out'


def test_schema(runner):
    result = runner.invoke(cli, ['schema'])

    assert result.exit_code == EXIT_PASS
    schema = json.loads(result.output)
    for key in ['construction', 'quadrature', 'sampling', 'diagnostics', 'grids', 'rtol']:
        assert key in schema['properties']


@pytest.mark.parametrize('n, expected', [(3, '0.759836'), (4, '0.707107')])
def test_fowler_fixed_point(runner, n, expected):
    result = runner.invoke(cli, ['fowler', '--fixed-point', '--n', str(n)])

    assert result.exit_code == EXIT_PASS, result.output
    assert expected in result.output.split()


@pytest.mark.slow
def test_fowler_family(runner, tmp_path):
    out = tmp_path / 'fowler'
    result = runner.invoke(
        cli, ['fowler', '--eps', '0.2,0.4', '--check', '--homoclinic', '--out', str(out)]
    )

    assert result.exit_code == EXIT_PASS, result.output
    report = json.loads((out / 'fowler.json').read_text())
    assert report['data']['fixed_point'] == pytest.approx(3.0**-0.25)
    names = [check['name'] for check in report['checks']]
    expected = ['necksize_recovery', 'homoclinic_error', 'bubble_is_homoclinic']
    for name in expected + ['period_decreasing[eps=0.4]']:
        assert name in names
    assert (out / 'fowler_family.csv').exists()
    assert (out / 'homoclinic.csv').exists()


def test_fowler_invalid_eps(runner, tmp_path):
    result = runner.invoke(cli, ['fowler', '--eps', '0.2,abc', '--out', str(tmp_path)])
    assert result.exit_code == EXIT_CONFIG

    result = runner.invoke(cli, ['fowler', '--eps', '0.9', '--out', str(tmp_path)])
    assert result.exit_code == EXIT_CONFIG


def test_malformed_config(runner, tmp_path):
    path = _write_yaml(tmp_path / 'bad.yaml', {'grids': {'r_list': [2.0, 1.0]}})
    result = runner.invoke(cli, ['fowler', '--fixed-point', '--config', str(path)])
    assert result.exit_code == EXIT_CONFIG

    path = _write_yaml(tmp_path / 'typo.yaml', {'quadrature': {'radial_order': 'many'}})
    result = runner.invoke(cli, ['fowler', '--fixed-point', '--config', str(path)])
    assert result.exit_code == EXIT_CONFIG


def test_unknown_preset(runner):
    result = runner.invoke(cli, ['fowler', '--fixed-point', '--preset', 'unbounded-n9'])
    assert result.exit_code == EXIT_CONFIG


def test_construct_without_construction(runner, tmp_path):
    result = runner.invoke(cli, ['construct', '--out', str(tmp_path)])
    assert result.exit_code == EXIT_CONFIG


@pytest.mark.slow
def test_construct_verify_report(runner, tmp_path, construction_config):
    out = tmp_path / 'run'
    result = runner.invoke(
        cli, ['construct', '--config', str(construction_config), '--out', str(out)]
    )

    assert result.exit_code == EXIT_PASS, result.output
    for name in ['field.json', 'construct.json', 'bubbles.csv']:
        assert (out / name).exists()
    field = SolutionField.from_json_file(out / 'field.json')
    assert len(field.bubbles) == 3

    result = runner.invoke(
        cli,
        [
            'verify',
            str(out / 'field.json'),
            '--suite',
            'curvature',
            '--config',
            str(construction_config),
            '--out',
            str(out),
        ],
    )
    assert result.exit_code == EXIT_PASS, result.output
    verified = json.loads((out / 'verify.json').read_text())
    assert verified['data']['suite'] == 'curvature'
    assert 'curvature' in verified['data']

    result = runner.invoke(cli, ['report', str(out)])
    assert result.exit_code == EXIT_PASS, result.output
    summary = json.loads((out / 'summary.json').read_text())
    assert summary['passed']
    assert sorted(summary['reports']) == ['construct', 'verify']
    assert summary['tables']['construct'] == ['bubbles']


def test_verify_against_baseline(runner, tmp_path, baseline_file, small_grids):
    first, second = tmp_path / 'first', tmp_path / 'second'
    command = ['verify', str(baseline_file), '--suite', 'pohozaev', '--config', str(small_grids)]

    result = runner.invoke(cli, [*command, '--out', str(first)])
    assert result.exit_code == EXIT_PASS, result.output
    assert (first / 'pohozaev.csv').exists()

    result = runner.invoke(cli, [*command, '--out', str(second), '--baseline', str(first)])
    assert result.exit_code == EXIT_PASS, result.output
    names = [c['name'] for c in json.loads((second / 'verify.json').read_text())['checks']]
    assert 'baseline[pohozaev]' in names
    assert 'energy_identity[r=2]' in names


@pytest.mark.slow
def test_verify_cylinder_round_trip(runner, tmp_path, baseline_file, small_grids):
    out = tmp_path / 'cylinder'
    result = runner.invoke(
        cli,
        [
            'verify',
            str(baseline_file),
            '--suite',
            'cylinder',
            '--config',
            str(small_grids),
            '--out',
            str(out),
        ],
    )

    assert result.exit_code in (EXIT_PASS, EXIT_CHECK_FAILED), result.output
    checks = json.loads((out / 'verify.json').read_text())['checks']
    round_trips = [c for c in checks if c['name'].startswith('round_trip[')]
    assert [c['name'] for c in round_trips] == ['round_trip[s=0]', 'round_trip[s=0.5]']
    for entry in round_trips:
        assert entry['bound'] == 1e-11
        assert entry['note'] == 'relaxed from 1e-13'
        assert entry['measured'] < 1e-13


def test_verify_unreadable_field(runner, tmp_path):
    path = tmp_path / 'field.json'
    path.write_text('{"n": 2, "baseline": true}')
    result = runner.invoke(cli, ['verify', str(path), '--out', str(tmp_path / 'out')])
    assert result.exit_code == EXIT_CONFIG


def test_diagnose(runner, tmp_path, baseline_file, small_grids):
    out = tmp_path / 'diagnose'
    result = runner.invoke(
        cli, ['diagnose', str(baseline_file), '--config', str(small_grids), '--out', str(out)]
    )

    assert result.exit_code == EXIT_PASS, result.output
    report = json.loads((out / 'diagnose.json').read_text())
    assert report['data']['delta_candidate'] == pytest.approx(0.0, abs=1e-6)
    assert report['data']['pohozaev_number']['r_max'] == 2.0
    assert (out / 'diagnostics.csv').exists()


def test_report_failed(runner, tmp_path):
    report = VerificationReport(command='verify')
    report.add(CheckResult.at_most('value_domination[k=1]', 2.0, 1.0))
    report.write(tmp_path)

    result = runner.invoke(cli, ['report', str(tmp_path)])
    assert result.exit_code == EXIT_CHECK_FAILED
    summary = json.loads((tmp_path / 'summary.json').read_text())
    assert summary['reports']['verify']['failed'] == ['value_domination[k=1]']


def test_report_empty(runner, tmp_path):
    result = runner.invoke(cli, ['report', str(tmp_path)])
    assert result.exit_code == EXIT_CONFIG
