"""End-to-end runs of the command-line interface."""
import csv
import io
import json
import math

import pytest

from cli import main
from state_io import write_state_file


@pytest.fixture
def state_files(tmp_path, commuting_pair, plus_pair):
    rho, sigma = commuting_pair
    return {
        'rho': str(write_state_file(rho, tmp_path / "rho.json")),
        'sigma': str(write_state_file(sigma, tmp_path / "sigma.json")),
        'plus': str(write_state_file(plus_pair[0], tmp_path / "plus.json")),
    }


def _pair(files, rho='rho'):
    return ['--rho', files[rho], '--sigma', files['sigma']]


def _json_out(capsys):
    return json.loads(capsys.readouterr().out.strip())


def _csv_out(capsys):
    return list(csv.DictReader(io.StringIO(capsys.readouterr().out)))


class TestCompute:

    def test_renyi(self, state_files, capsys):
        code = main(['compute', *_pair(state_files), '--divergence', 'renyi', '--alpha', '2'])
        assert code == 0
        out = _json_out(capsys)
        assert out['value'] == pytest.approx(0.223144, abs=1e-6)
        assert out['q_alpha'] == pytest.approx(1.25, abs=1e-8)
        assert out['unit'] == 'nats'
        assert out['divergence'] == 'renyi'

    def test_renyi_in_bits(self, state_files, capsys):
        main(['--bits', 'compute', *_pair(state_files), '--divergence', 'renyi', '--alpha', '2'])
        out = _json_out(capsys)
        assert out['value'] == pytest.approx(math.log2(1.25), abs=1e-6)
        assert out['unit'] == 'bits'

    @pytest.mark.parametrize("method", ['hs_integral', 'onesided', 'trace', 'rs'])
    def test_renyi_methods(self, state_files, capsys, method):
        main(['compute', *_pair(state_files), '--divergence', 'renyi', '--alpha', '2',
              '--method', method])
        assert _json_out(capsys)['value'] == pytest.approx(0.223144, abs=1e-5)

    def test_alpha_one_needs_limit(self, state_files, capsys):
        code = main(['compute', *_pair(state_files), '--divergence', 'renyi', '--alpha', '1'])
        assert code == 2
        err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert err['error'] == 'BadArgument'
        assert 'renyi_limit' in err['message']

    def test_alpha_one_limit(self, state_files, capsys):
        main(['compute', *_pair(state_files), '--divergence', 'renyi', '--alpha', '1',
              '--method', 'renyi_limit'])
        assert _json_out(capsys)['value'] == pytest.approx(0.130812, abs=1e-5)

    @pytest.mark.parametrize("method", ['projection', 'frenkel', 'layercake', 'rs'])
    def test_relative_entropy(self, state_files, capsys, method):
        main(['compute', *_pair(state_files), '--divergence', 'relent', '--method', method])
        assert _json_out(capsys)['value'] == pytest.approx(0.130812, abs=1e-6)

    def test_relative_entropy_pure_state(self, state_files, capsys):
        main(['compute', *_pair(state_files, 'plus'), '--divergence', 'relent'])
        assert _json_out(capsys)['value'] == pytest.approx(math.log(2.0), abs=1e-7)

    @pytest.mark.parametrize("name,method,expected", [
        ('kl', 'layercake', 0.130812),
        ('chi2', 'duality', 0.25),
        ('tv', 'rs', 0.25),
        ('hellinger:2', 'hs_integral', 0.25),
    ])
    def test_f_divergence(self, state_files, capsys, name, method, expected):
        main(['compute', *_pair(state_files), '--divergence', 'f', '--f', name, '--method', method])
        out = _json_out(capsys)
        assert out['value'] == pytest.approx(expected, abs=1e-6)
        assert 'unit' not in out

    def test_missing_f(self, state_files, capsys):
        assert main(['compute', *_pair(state_files), '--divergence', 'f']) == 2

    def test_missing_file(self, state_files, tmp_path, capsys):
        code = main(['compute', '--rho', str(tmp_path / "none.json"), '--sigma', state_files['sigma'],
                     '--divergence', 'relent'])
        assert code == 2
        err = capsys.readouterr().err.strip().splitlines()
        assert json.loads(err[-1])['error'] == 'ParseError'
        assert any("File does not exist" in line for line in err[:-1])


class TestTables:

    def test_sweep_skips_alpha_one(self, state_files, capsys):
        code = main(['sweep', *_pair(state_files), '--alpha-range', '0.5:2:0.5',
                     '--methods', 'layercake,swapped'])
        assert code == 0
        rows = _csv_out(capsys)
        assert [(float(r['alpha']), r['method']) for r in rows] == [
            (0.5, 'layercake'), (0.5, 'swapped'), (1.5, 'layercake'), (2.0, 'layercake')]
        assert float(rows[-1]['q_alpha']) == pytest.approx(1.25, abs=1e-8)
        assert rows[-1]['converged'] == 'true'

    def test_sweep_logs_method_spread(self, state_files, capsys):
        main(['sweep', *_pair(state_files), '--alpha-range', '2:2:1', '--methods', 'layercake,onesided'])
        assert "Largest Q_alpha spread across methods" in capsys.readouterr().err

    def test_trace_sweep_near_one(self, full_rank_pairs, tmp_path, capsys):
        rho, sigma = full_rank_pairs[1]
        files = {'rho': str(write_state_file(rho, tmp_path / "r3.json")),
                 'sigma': str(write_state_file(sigma, tmp_path / "s3.json"))}
        code = main(['sweep', *_pair(files), '--alpha-range', '0.8:0.95:0.05',
                     '--methods', 'layercake,trace'])
        assert code == 0
        rows = _csv_out(capsys)
        assert len(rows) == 8
        by_alpha = {}
        for row in rows:
            by_alpha.setdefault(row['alpha'], {})[row['method']] = float(row['q_alpha'])
        for values in by_alpha.values():
            assert values['trace'] == pytest.approx(values['layercake'], abs=1e-4)

    def test_sweep_to_file(self, state_files, tmp_path, capsys):
        out = tmp_path / "sweeps" / "sweep.csv"
        main(['sweep', *_pair(state_files), '--alpha-range', '2:2:1', '--out', str(out)])
        assert capsys.readouterr().out == ''
        assert out.read_text().splitlines()[0] == 'alpha,method,q_alpha,d_alpha,err_estimate,converged'

    def test_bad_range(self, state_files, capsys):
        assert main(['sweep', *_pair(state_files), '--alpha-range', '2:1:0.5']) == 2

    def test_rs_dist(self, state_files, capsys):
        main(['rs-dist', *_pair(state_files), '--grid', '20'])
        rows = _csv_out(capsys)
        assert list(rows[0]) == ['gamma', 'P', 'Q', 'jump_P', 'jump_Q']
        assert float(rows[-1]['Q']) == pytest.approx(1.0)

    def test_exponents(self, state_files, capsys):
        main(['exponents', *_pair(state_files), '--n', '1', '--a', '0.3', '--alpha', '2'])
        rows = _csv_out(capsys)
        assert len(rows) == 1
        assert float(rows[0]['bound2']) == pytest.approx(0.686, abs=1e-3)
        assert float(rows[0]['type2']) == pytest.approx(0.5)
        assert rows[0]['bound1e'] == ''
        assert rows[0]['holds'] == 'true'


class TestVerify:

    def test_selected_checks(self, tmp_path, capsys):
        report = tmp_path / "report.json"
        code = main(['--no-progress', 'verify', '--trials', '2', '--dims', '2', '--seed', '1',
                     '--only', 'e_gamma_shape,markov_inequality', '--json', str(report)])
        assert code == 0
        out = capsys.readouterr().out
        assert 'e_gamma_shape' in out
        assert out.strip().splitlines()[-1] == "2/2 properties passed"
        saved = json.loads(report.read_text())
        assert saved['seed'] == 1
        assert saved['all_passed'] is True

    def test_global_seed(self, tmp_path, capsys):
        report = tmp_path / "report.json"
        main(['--seed', '9', '--no-progress', 'verify', '--trials', '1', '--dims', '2',
              '--only', 'channels', '--json', str(report)])
        assert json.loads(report.read_text())['seed'] == 9

    def test_trials_override_acceptance(self, tmp_path, capsys):
        report = tmp_path / "report.json"
        main(['--no-progress', 'verify', '--acceptance', '--trials', '1', '--dims', '2',
              '--only', 'channels', '--json', str(report)])
        assert json.loads(report.read_text())['trials'] == 1

    def test_unknown_check(self, capsys):
        code = main(['--no-progress', 'verify', '--trials', '1', '--only', 'no_such_check'])
        assert code == 2
