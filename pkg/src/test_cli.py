# test_cli.py
import json
from fractions import Fraction

import pytest

import cli
from errors import ResourceError


def test_r_of_p_text(capsys):
    assert cli.run(['r-of-p', '3']) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith('# r-of-p')
    assert out[1] == '151285/157456 ≈ 0.960808'


def test_r_of_p_plain_at_two(capsys):
    assert cli.run(['r-of-p', '2', '--model', 'quartic', '--json']) == 0
    data = json.loads(capsys.readouterr().out)
    assert data['rho'] == '23087/24528'
    assert data['command'] == 'r-of-p'
    assert data['parameters']['model'] == 'quartic'


@pytest.mark.parametrize("argv", [
    ['r-of-p', '1'],
    ['r-of-p', '4'],
    ['r-of-p', '3', '--bogus'],
    ['recursion'],
    ['padic-decide', '3', '1', '0', '0'],
    ['rho', '--real-interval', 'oops', '--pmax', '100', '--quiet'],
    ['rho', '--real-interval', '0.8,0.9', '--pmax', '2', '--quiet'],
])
def test_usage_errors_exit_with_two(argv, capsys):
    assert cli.run(argv) == 2
    assert 'error' in capsys.readouterr().err


def test_json_output_is_deterministic(capsys):
    argv = ['recursion', '2', '3', '5', '--json']
    assert cli.run(argv) == 0
    first = capsys.readouterr().out
    assert cli.run(argv) == 0
    assert capsys.readouterr().out == first
    rows = json.loads(first)['rows']
    assert [row['p'] for row in rows] == [2, 3, 5]


def test_fp_counts_falls_back_to_formulas(capsys):
    assert cli.run(['fp-counts', '11', '--model', 'quartic', '--json']) == 0
    data = json.loads(capsys.readouterr().out)
    assert data['total'] == 11**4 + 11**3 + 11**2 + 11 + 1


def test_fp_counts_enumeration_cap_is_an_error(capsys):
    assert cli.run(['fp-counts', '11', '--model', 'quartic', '--mode', 'enumerate']) == 1


def test_padic_decide(capsys):
    assert cli.run(['padic-decide', '3', '3', '0', '0', '0', '3', '--json']) == 0
    assert json.loads(capsys.readouterr().out)['verdict'] == 'insoluble'
    assert cli.run(['padic-decide', '5', '1', '0', '0', '0', '1']) == 0
    assert capsys.readouterr().out.splitlines()[1].startswith('soluble at')


def test_rho_with_trusted_real_part(capsys):
    argv = ['rho', '--real-interval', '0.873954,0.874124', '--pmax', '100', '--quiet', '--json']
    assert cli.run(argv) == 0
    data = json.loads(capsys.readouterr().out)
    for key in ('schema', 'command', 'parameters', 'model', 'real_part', 'finite_product', 'tail', 'rho',
                'rigorous', 'P', 'provenance'):
        assert key in data
    assert data['rigorous'] is True
    assert data['provenance']['real_source'] == 'trusted-input'


def test_rho_gbq_honours_real_interval(monkeypatch, capsys):
    def no_sampling(*args, **kwargs):
        raise AssertionError("a given real interval must not be resampled")

    monkeypatch.setattr(cli, 'monte_carlo_real', no_sampling)
    argv = ['rho', '--model', 'gbq', '--real-interval', '0.9,0.92', '--pmax', '100', '--quiet', '--json']
    assert cli.run(argv) == 0
    data = json.loads(capsys.readouterr().out)
    assert data['rigorous'] is False
    assert data['provenance']['real_source'] == 'trusted-input'
    assert Fraction('0.8999') <= Fraction(data['real_part']['lo_decimal']) <= Fraction('0.9')
    assert Fraction('0.92') <= Fraction(data['real_part']['hi_decimal']) <= Fraction('0.9201')


def test_real_bounds_text(capsys):
    assert cli.run(['real-bounds', '--depth', '4', '--quiet']) == 0
    assert 'rho(inf)' in capsys.readouterr().out


def test_resource_errors_exit_with_three(monkeypatch, capsys):
    def exhausted(*args, **kwargs):
        raise ResourceError("Work queue too large", checkpoint_path='partial.ckpt')

    monkeypatch.setattr(cli, 'run_bounds', exhausted)
    assert cli.run(['real-bounds', '--depth', '30', '--quiet']) == 3
    assert 'partial.ckpt' not in capsys.readouterr().out


def test_help_exits_cleanly(capsys):
    assert cli.run(['--help']) == 0
    assert 'r-of-p' in capsys.readouterr().out


def test_runslow_option_help():
    import conftest

    options = {}

    class Recorder:
        def addoption(self, name, **kwargs):
            options[name] = kwargs

    conftest.pytest_addoption(Recorder())
    assert options['--runslow']['help'] == "run the slow statistical and bounds runs"
