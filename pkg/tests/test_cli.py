import json

import pytest

from src.cli.config import RunConfig, read_config_file, read_environment, resolve
from src.cli.report_io import dumps_report, emit_report, flatten, loads_report, parse_report
from src.cli.runner import SUITES, main, parse_args, run
from src.const import EXIT_ASSERTION, EXIT_BUDGET, EXIT_OK, EXIT_USAGE, SCHEMA_VERSION
from src.errors import KernelRangeError, UsageError
from src.suites.arithmetic import GSumSuite
from src.types import OmegaConvention, OutputFormat

SMALL_GSUM = ['gsum-verify', '--cmax', '6', '--x-max', '2', '--moment-kmax', '6']


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / 'run.cfg'
    path.write_text('# desk run\nc_max = 10\nseed = 5\nomega = unit  # trailing comment\n\nthreads=2\n')
    return str(path)


class TestConfig:
    def test_defaults(self):
        config = resolve(environ={})
        assert config == RunConfig()
        assert config.precision_bits == 128 and config.c_max == 50

    def test_file(self, config_file):
        values = read_config_file(config_file)
        assert values == {'c_max': 10, 'seed': 5, 'omega_convention': OmegaConvention.unit, 'threads': 2}

    def test_precedence(self, config_file):
        environ = {'MIXEDMOMENTS_C_MAX': '20', 'MIXEDMOMENTS_SEED': '7'}
        config = resolve({'c_max': 30}, config_file, environ)
        assert config.c_max == 30
        assert config.seed == 7
        assert config.threads == 2
        assert config.omega_convention == OmegaConvention.unit

    def test_config_path_from_environment(self, config_file):
        config = resolve(environ={'MIXEDMOMENTS_CONFIG': config_file})
        assert config.c_max == 10

    def test_environment_names(self):
        values = read_environment({'MIXEDMOMENTS_FORMAT': 'csv', 'MIXEDMOMENTS_ABS_TOL': '1e-6', 'HOME': '/root'})
        assert values == {'output_format': OutputFormat.csv, 'abs_tol': 1e-6}

    @pytest.mark.parametrize('flags', [
        {'threads': 0},
        {'precision_bits': 32},
        {'abs_tol': 0.0},
        {'c_max': 0},
        {'truncation_multiplier': -1.0},
        {'c_constant_form': 'neither'},
        {'omega_convention': 'half'},
        {'log_level': 'chatty'},
        {'c_max': 'many'},
        {'no_such_key': 1},
    ])
    def test_rejects(self, flags):
        with pytest.raises(UsageError):
            resolve(flags, environ={})

    def test_bad_file_line(self, tmp_path):
        path = tmp_path / 'bad.cfg'
        path.write_text('c_max 10\n')
        with pytest.raises(UsageError):
            read_config_file(str(path))

    def test_as_dict(self):
        out = RunConfig().as_dict()
        assert out['output_format'] == 'json'
        assert 'out' not in out and 'log_level' not in out


class TestParseArgs:
    def test_subcommand_and_params(self):
        subcommand, config, params = parse_args(SMALL_GSUM + ['--csv', '--seed', '3'], environ={})
        assert subcommand == 'gsum-verify'
        assert config.c_max == 6 and config.seed == 3
        assert config.output_format == OutputFormat.csv
        assert params == {'x-max': 2, 'moment-kmax': 6}

    def test_common_flags_before_subcommand(self):
        _, config, _ = parse_args(['--cmax', '9', 'kloosterman'], environ={})
        assert config.c_max == 9

    def test_flags_beat_environment(self):
        _, config, _ = parse_args(['kloosterman', '--cmax', '9'], environ={'MIXEDMOMENTS_C_MAX': '4'})
        assert config.c_max == 9

    def test_every_suite_registered(self):
        assert len(SUITES) == 14
        assert {'specialfn-test', 'kloosterman', 'gsum-verify', 'poisson-verify', 'sieve-test', 'petersson-verify',
                'kuznetsov-rhs', 'moment-holo', 'mainterm', 'mainterm-holo'} <= set(SUITES)


class TestExitCodes:
    def test_unknown_subcommand(self):
        assert main(['no-such-suite'], environ={}) == EXIT_USAGE

    def test_unknown_subcommand_in_run(self):
        assert run('no-such-suite', RunConfig()) == EXIT_USAGE

    def test_missing_subcommand(self):
        assert main([], environ={}) == EXIT_USAGE

    def test_invalid_value(self):
        assert main(['gsum-verify', '--cmax', '0'], environ={}) == EXIT_USAGE

    def test_bad_environment(self):
        assert main(['gsum-verify'], environ={'MIXEDMOMENTS_THREADS': 'lots'}) == EXIT_USAGE

    def test_help(self, capsys):
        assert main(['--help'], environ={}) == EXIT_OK
        assert 'gsum-verify' in capsys.readouterr().out

    def test_pass(self, capsys):
        assert main(SMALL_GSUM, environ={}) == EXIT_OK
        report = loads_report(capsys.readouterr().out)
        assert report['pass'] is True
        assert report['suite'] == 'gsum-verify'

    def test_budget(self, tmp_path):
        out = tmp_path / 'report.json'
        argv = ['poisson-verify', '--block', '128,8,2', '--kernels', 'gaussian', '--out', str(out)]
        assert main(argv, environ={}) == EXIT_BUDGET
        report = parse_report(str(out))
        assert report['pass'] is False
        assert report['error']['type'] == 'BudgetError'

    def test_failed_check(self, monkeypatch, capsys):
        def failing(suite):
            suite.check('always', 1.0, 0.0)
        monkeypatch.setattr(GSumSuite, 'solve', failing)
        assert run('gsum-verify', RunConfig()) == EXIT_ASSERTION
        report = json.loads(capsys.readouterr().out)
        assert report['checks'] == [{'name': 'always', 'value': 1.0, 'bound': 0.0, 'pass': False}]

    def test_domain_error_reported(self, monkeypatch, tmp_path):
        def out_of_range(suite):
            raise KernelRangeError('x outside the kernel range')
        monkeypatch.setattr(GSumSuite, 'solve', out_of_range)
        out = tmp_path / 'report.json'
        assert run('gsum-verify', RunConfig(out=str(out))) == EXIT_ASSERTION
        report = parse_report(str(out))
        assert report['pass'] is False
        assert report['suite'] == 'gsum-verify'
        assert report['error'] == {'type': 'KernelRangeError', 'message': 'x outside the kernel range'}

    def test_parameter_error_is_usage(self, monkeypatch, tmp_path):
        def bad_window(suite):
            raise ValueError('T must be >= 10')
        monkeypatch.setattr(GSumSuite, 'solve', bad_window)
        out = tmp_path / 'report.json'
        assert run('gsum-verify', RunConfig(out=str(out))) == EXIT_USAGE
        assert not out.exists()


class TestReports:
    @pytest.fixture(scope='class')
    def report(self):
        return GSumSuite(RunConfig(c_max=6), **{'x-max': 2, 'moment-kmax': 6}).run()

    def test_layout(self, report):
        assert list(report)[:8] == ['schema_version', 'suite', 'pass', 'parameters', 'config', 'checks', 'terms',
                                    'flags']
        assert report['schema_version'] == SCHEMA_VERSION
        assert report['parameters'] == {'x-max': 2, 'moment-kmax': 6}

    def test_csv_round_trip(self, report):
        assert loads_report(dumps_report(report, OutputFormat.csv)) == report

    def test_csv_keeps_every_term(self, report):
        paths = [row[0] for row in flatten(report)]
        for name in report['terms']:
            assert 'terms/' + name in paths

    def test_json_round_trip(self, report):
        assert loads_report(dumps_report(report)) == report

    def test_awkward_keys(self):
        report = {
            'schema_version': SCHEMA_VERSION,
            'terms': {'a/b': 1.5, '[0]': None, '100%': True, 'z': [0.25, -2.0]},
            'checks': [{'name': 'x', 'pass': False}, {'name': 'y', 'pass': True}],
            'flags': [],
            'moment': {},
        }
        assert loads_report(dumps_report(report, OutputFormat.csv)) == report

    def test_schema_mismatch(self, report):
        other = dict(report, schema_version=SCHEMA_VERSION + 1)
        with pytest.raises(UsageError):
            loads_report(dumps_report(other))
        with pytest.raises(UsageError):
            loads_report(dumps_report(other, OutputFormat.csv))

    def test_not_a_report(self):
        with pytest.raises(UsageError):
            loads_report('a,b,c\n1,2,3\n')

    def test_emit_to_file(self, report, tmp_path):
        path = tmp_path / 'r.csv'
        text = emit_report(report, OutputFormat.csv, str(path))
        assert path.read_text() == text
        assert parse_report(str(path)) == report

    def test_deterministic(self, tmp_path):
        first, second = tmp_path / 'a.json', tmp_path / 'b.json'
        assert main(SMALL_GSUM + ['--out', str(first)], environ={}) == EXIT_OK
        assert main(SMALL_GSUM + ['--out', str(second)], environ={}) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()
