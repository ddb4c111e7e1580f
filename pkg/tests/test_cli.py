import json
import os
import subprocess
import sys

import numpy as np
import pandas as pd
import pytest
from dotmap import DotMap
from numpy.testing import assert_allclose

from cig.misc.errors import InvalidInputError
from cig.misc.io_util import read_counts_csv, read_observations_csv, write_table
from cigexp import main

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def _run(tmp_path, preset, subcommand=None, overrides=(), input_path=None, name='result.json'):
    output = str(tmp_path / name)
    exp_args = DotMap(input=input_path, output=output, logdir=str(tmp_path / 'log'), seed=None)
    main(subcommand, preset, list(overrides), [], exp_args)
    with open(output, encoding='utf-8') as f:
        payload = json.load(f)
    tables = {key: pd.read_csv(tmp_path / path) for key, path in payload['tables'].items()}
    return payload, tables


class TestSubcommands:

    def test_spectrum(self, tmp_path):
        payload, tables = _run(tmp_path, 'uniform')
        assert payload['subcommand'] == 'spectrum'
        assert payload['result']['near_replicate_pairs'] == []
        assert list(tables['eigenvalues'].columns) == ['order', 'eigenvalue', 'log10_eigenvalue']
        # four copies of 1/6 and one secular root at 1/6 - 5/36
        assert_allclose(tables['eigenvalues']['eigenvalue'], [1 / 6., 1 / 6., 1 / 6., 1 / 6., 1 / 36.], rtol=1e-12)

    def test_singular_spectrum(self, tmp_path):
        payload, _ = _run(tmp_path, 'singular_spectrum')
        assert payload['result']['singular']
        assert payload['result']['rank'] == 2

    def test_limits(self, tmp_path):
        payload, tables = _run(tmp_path, 'example5')
        assert payload['result']['reachable'] == [0, 2, 3]
        assert payload['result']['envelope']['redundant'] == [1]
        assert tables['vertices']['reachable'].tolist() == [True, False, True, True]

    def test_logistic_limits(self, tmp_path):
        payload, _ = _run(tmp_path, 'logistic7')
        assert payload['result']['n_reachable'] == 14
        first, second = payload['result']['mle']
        assert first['exists'] and not second['exists']
        assert second['face_labels'] == ['1100000']

    def test_embed_logistic(self, tmp_path):
        payload, tables = _run(tmp_path, 'logistic7', subcommand='embed-logistic')
        assert payload['result']['n_vertices'] == 128
        assert payload['result']['n_reachable'] == 14
        assert tables['embedding'].shape[0] == 128

    def test_single_binomial(self, tmp_path):
        payload, tables = _run(tmp_path, 'single_binomial')
        assert payload['result']['max_dd'] <= payload['result']['dd_tol']
        assert_allclose(tables['fitted']['fitted'], [25, 50, 25], atol=1e-2)

    def test_null_discrepancy(self, tmp_path):
        payload, tables = _run(tmp_path, 'truncated_normal_null')
        assert payload['result']['likelihood']['sup'] == 0.0
        assert tables['likelihood']['difference'].tolist() == [0.0]

    def test_edgeworth(self, tmp_path):
        payload, tables = _run(tmp_path, 'skewed_lattice')
        assert payload['result']['sup_error_edgeworth'] < payload['result']['sup_error_normal']
        assert set(tables) == {'density', 'exact'}

    def test_saddlepoint(self, tmp_path):
        payload, tables = _run(tmp_path, 'bernoulli')
        center = payload['result']['center']
        assert_allclose(center['tbar'], 0.5)
        assert_allclose(center['saddlepoint'], 2.523, atol=1e-3)
        assert_allclose(center['exact'], 2.4609375)
        assert payload['result']['total_variation'] <= 0.02
        assert list(tables['density'].columns) == ['tbar', 'saddlepoint', 'exact']

    @pytest.mark.slow
    def test_table1(self, tmp_path):
        payload, tables = _run(tmp_path, 'table1')
        assert payload['result']['deviance'] < 3.0
        assert len(tables['support']) <= 7

    @pytest.mark.slow
    def test_censored_discretize(self, tmp_path):
        payload, _ = _run(tmp_path, 'censored_exponential')
        assert payload['result']['mle_gap_in_se'] < 0.1
        assert payload['result']['likelihood']['relative'] < 0.05

    @pytest.mark.slow
    def test_censored_saddlepoint(self, tmp_path):
        payload, tables = _run(tmp_path, 'censored_exponential', subcommand='saddlepoint')
        assert payload['result']['skipped'] == 0
        assert payload['result']['projection']['scale'] == 'mean_lifetime'
        assert list(tables['density'].columns) == ['mu', 'saddlepoint', 'monte_carlo']


class TestRunArtifacts:

    def test_runs_are_byte_identical(self, tmp_path):
        contents = []
        for _ in range(2):
            _run(tmp_path, 'example5')
            with open(tmp_path / 'result.json', 'rb') as f, open(tmp_path / 'result_vertices.csv', 'rb') as g:
                contents.append((f.read(), g.read()))
        assert contents[0] == contents[1]

    def test_seeded_runs_repeat(self, tmp_path):
        first, _ = _run(tmp_path, 'truncated_normal_null', name='a.json')
        second, _ = _run(tmp_path, 'truncated_normal_null', name='b.json')
        assert first['result'] == second['result']

    def test_provenance_records_defaults(self, tmp_path):
        payload, _ = _run(tmp_path, 'uniform', overrides=[('spectrum_cfg.near_replicate_tol', '0.5')])
        config = payload['provenance']['config']
        assert config['spectrum_cfg']['near_replicate_tol'] == 0.5
        assert config['tol_cfg']['dd'] == 1e-6
        assert payload['provenance']['version'] == '0.1.0'
        assert os.path.exists(tmp_path / 'result_eigenvalues.csv')

    def test_json_input(self, tmp_path):
        path = tmp_path / 'pi.json'
        path.write_text(json.dumps([0.5, 0.25, 0.25]))
        payload, _ = _run(tmp_path, 'uniform', input_path=str(path))
        assert_allclose(payload['result']['spectrum']['eigenvalues'], [0.25, 0.125])

    def test_unknown_json_field(self, tmp_path):
        path = tmp_path / 'bad.json'
        path.write_text(json.dumps(dict(colour='blue')))
        with pytest.raises(ValueError):
            _run(tmp_path, 'uniform', input_path=str(path))

    def test_counts_csv_input(self, tmp_path):
        path = tmp_path / 'counts.csv'
        path.write_text("count\n25\n50\n25\n")
        payload, _ = _run(tmp_path, 'single_binomial', input_path=str(path))
        assert payload['result']['counts'] == [25, 50, 25]


class TestExitCodes:

    def _call(self, *args):
        return subprocess.run([sys.executable, os.path.join(ROOT, 'cigexp.py')] + list(args),
                              cwd=ROOT, capture_output=True, text=True)

    def test_unknown_preset(self, tmp_path):
        result = self._call('spectrum', '-preset', 'no_such_preset', '-logdir', str(tmp_path))
        assert result.returncode == 2

    def test_bad_override(self, tmp_path):
        result = self._call('-preset', 'uniform', '-logdir', str(tmp_path), '-o', 'spectrum_cfg.nope', '1')
        assert result.returncode == 2

    def test_invalid_probability_vector(self, tmp_path):
        result = self._call('-preset', 'uniform', '-logdir', str(tmp_path), '-o', 'spectrum_cfg.pi', '[0.5,0.6]')
        assert result.returncode == 2

    def test_success(self, tmp_path):
        output = str(tmp_path / 'out.json')
        result = self._call('-preset', 'example5', '-logdir', str(tmp_path), '-output', output)
        assert result.returncode == 0
        assert os.path.exists(output)


class TestIoUtil:

    def test_counts_column_or_row(self, tmp_path):
        column, row = tmp_path / 'column.csv', tmp_path / 'row.csv'
        column.write_text("n\n1\n2\n3\n")
        row.write_text("a,b,c\n1,2,3\n")
        assert read_counts_csv(str(column)).tolist() == [1, 2, 3]
        assert read_counts_csv(str(row)).tolist() == [1, 2, 3]

    def test_counts_must_be_integers(self, tmp_path):
        path = tmp_path / 'float.csv'
        path.write_text("n\n1.5\n2\n")
        with pytest.raises(InvalidInputError):
            read_counts_csv(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(InvalidInputError):
            read_counts_csv(str(tmp_path / 'absent.csv'))

    def test_observations(self, tmp_path):
        path = tmp_path / 'obs.csv'
        path.write_text("id,days\na,7\nb,47\n")
        assert_allclose(read_observations_csv(str(path)), [7.0, 47.0])

    def test_table_round_trip_keeps_precision(self, tmp_path):
        path = tmp_path / 'table.csv'
        write_table(str(path), pd.DataFrame(dict(x=[1 / 3.])))
        assert pd.read_csv(path)['x'][0] == 1 / 3.
