"""CSV and summary formatting."""
import io
import math

import pytest

from divergences import DivergenceResult
from report import (SWEEP_HEADER, format_cell, format_check_table, method_spread,
                    save_suite_report, sweep_rows, write_csv, write_csv_file)
from utils import load_json
from verify_suite import CheckResult


class TestCells:

    @pytest.mark.parametrize("value,text", [
        (None, ''), (True, 'true'), (False, 'false'), (0.1, '0.1'), (3, '3'),
        (float('inf'), 'inf'), (float('-inf'), '-inf'), (float('nan'), 'nan'), ('x', 'x'),
    ])
    def test_format_cell(self, value, text):
        assert format_cell(value) == text

    def test_repr_precision(self):
        assert float(format_cell(math.pi)) == math.pi


class TestCsv:

    def test_write_csv_text(self):
        text = write_csv([{'a': 1.5, 'b': None}], ('a', 'b'))
        assert text == "a,b\n1.5,\n"

    def test_write_to_stream(self):
        out = io.StringIO()
        assert write_csv([{'a': True}], ('a',), out) == ''
        assert out.getvalue() == "a\ntrue\n"

    def test_write_file_is_deterministic(self, tmp_path):
        rows = [{'gamma': 0.5, 'P': 0.25, 'Q': 0.5, 'jump_P': 0.25, 'jump_Q': 0.5}]
        first = write_csv_file(rows, ('gamma', 'P', 'Q', 'jump_P', 'jump_Q'), tmp_path / "a" / "x.csv")
        second = write_csv_file(rows, ('gamma', 'P', 'Q', 'jump_P', 'jump_Q'), tmp_path / "y.csv")
        assert first.read_bytes() == second.read_bytes()

    def test_sweep_rows(self):
        results = [(2.0, 'layercake', DivergenceResult(1.25, 'layercake', 1e-12)),
                   (2.0, 'onesided', DivergenceResult(1.25 + 1e-9, 'onesided', 1e-12)),
                   (0.5, 'layercake', DivergenceResult(0.0, 'layercake', 0.0, converged=False))]
        rows = sweep_rows(results)
        assert list(rows[0]) == list(SWEEP_HEADER)
        assert rows[0]['d_alpha'] == pytest.approx(math.log(1.25))
        assert rows[2]['d_alpha'] is None
        assert rows[2]['converged'] is False
        assert method_spread(rows)[2.0] == pytest.approx(1e-9)

    def test_sweep_rows_in_bits(self):
        rows = sweep_rows([(2.0, 'layercake', DivergenceResult(1.25, 'layercake', 0.0))], '2')
        assert rows[0]['d_alpha'] == pytest.approx(math.log2(1.25))


class TestSuiteSummary:

    def test_check_table(self):
        results = [CheckResult('e1_trace_distance', 'hockey_stick', True, 1e-15, 1e-10, 4, 0.1, ''),
                   CheckResult('orderings', 'divergences', False, 2e-3, 1e-9, 4, 0.2, 'worst 2e-3')]
        table = format_check_table(results)
        assert 'e1_trace_distance' in table
        assert 'FAIL' in table
        assert table.splitlines()[-1] == "1/2 properties passed"

    def test_save_report(self, tmp_path):
        path = save_suite_report({'all_passed': True}, tmp_path / "r" / "report.json")
        assert load_json(path) == {'all_passed': True}
