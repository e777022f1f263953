import argparse
import math

import pytest

from src.cli.config import RunConfig
from src.cli.report_io import loads_report
from src.cli.runner import main
from src.const import EXIT_OK
from src.suites.arithmetic import KloostermanSuite
from src.suites.modforms import FormsSuite
from src.suites.suite import Suite, int_list, number_list
from src.suites.tracecheck import MomentHoloSuite, PeterssonSuite


class Toy(Suite):
    """two fixed checks"""
    name = 'toy'
    parameters = (
        ('size', int, 3, 'problem size'),
        ('ts', number_list, [1.0, 2.0], 'points'),
    )

    def getName(self):
        return 'Toy suite'

    def solve(self):
        self.check('small', 1e-12, 1e-10)
        self.check('explicit', 5.0, 1.0, passed=True)
        self.note('size', self.params['size'])
        self.note('complex', 1 + 2j)
        self.flag('seen')
        self.flag('seen')


class FakeMoment:
    def __init__(self, passed):
        self.passed = passed

    def as_dict(self):
        return {'value': 1.5, 'missing': float('nan'), 'grid': (1, 2.5)}


class TestSuiteBase:
    def test_parameters(self):
        suite = Toy(RunConfig(), size=None, ts=[4.0])
        assert suite.params == {'size': 3, 'ts': [4.0]}

    def test_report(self):
        report = Toy(RunConfig(), size=7).run()
        assert report['pass'] is True
        assert report['suite'] == 'toy'
        assert report['parameters'] == {'size': 7, 'ts': [1.0, 2.0]}
        assert [c['name'] for c in report['checks']] == ['small', 'explicit']
        assert report['terms'] == {'size': 7, 'complex': [1.0, 2.0]}
        assert report['flags'] == ['seen']
        assert 'moment' not in report

    def test_failed_check(self):
        suite = Toy(RunConfig())
        suite.run()
        assert suite.check('too big', 2.0, 1.0) is False
        assert suite.passed is False

    def test_rerun_restarts(self):
        suite = Toy(RunConfig())
        suite.run()
        assert len(suite.run()['checks']) == 2

    def test_moment(self):
        suite = Toy(RunConfig())
        suite.run()
        suite.moment = FakeMoment(False)
        report = suite.report()
        assert report['pass'] is False
        assert report['moment'] == {'value': 1.5, 'missing': None, 'grid': [1, 2.5]}
        suite.moment = FakeMoment(None)
        assert suite.report()['pass'] is True

    def test_arguments(self):
        parser = argparse.ArgumentParser()
        Toy.addArguments(parser)
        namespace = vars(parser.parse_args(['--ts', '5,6.5']))
        assert namespace == {'size': None, 'ts': [5.0, 6.5]}

    def test_str(self):
        assert str(Toy(None)) == 'Toy suite two fixed checks'

    def test_lists(self):
        assert number_list('20,50, 1e3') == [20.0, 50.0, 1000.0]
        assert int_list('12,16,') == [12, 16]


class TestFastSuites:
    def test_kloosterman(self):
        report = KloostermanSuite(RunConfig(c_max=8), **{'ab-max': 4}).run()
        assert report['pass'] is True
        assert len(report['checks']) == 5

    def test_forms(self):
        report = FormsSuite(RunConfig(), **{'n-max': 60}).run()
        assert report['pass'] is True
        assert report['terms']['a(2) w=12'] == -24

    def test_specialfn_through_runner(self, capsys):
        assert main(['specialfn-test', '--points', '4'], environ={}) == EXIT_OK
        report = loads_report(capsys.readouterr().out)
        assert report['terms']['zeta(3/2)'] == pytest.approx(2.612375348685488, rel=1e-14)

    def test_threads_same_report(self):
        one = KloostermanSuite(RunConfig(c_max=6, threads=1), **{'ab-max': 3}).run()
        four = KloostermanSuite(RunConfig(c_max=6, threads=4), **{'ab-max': 3}).run()
        assert one['checks'] == four['checks']


@pytest.mark.slow
class TestSlowSuites:
    def test_petersson(self):
        report = PeterssonSuite(RunConfig(), weights=[12, 16], **{'n-max': 4}).run()
        assert report['pass'] is True

    def test_moment_holo(self):
        report = MomentHoloSuite(RunConfig(), K=12, Delta=2.0).run()
        assert report['pass'] is True
        assert not math.isnan(report['moment']['difference'])

    @pytest.mark.parametrize('argv', [['sieve-test'], ['gsum-verify'], ['poisson-verify', '--blocks', '2']])
    def test_defaults_pass(self, argv):
        assert main(argv, environ={}) == EXIT_OK
