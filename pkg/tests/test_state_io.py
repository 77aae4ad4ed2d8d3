"""JSON state files."""
import json

import numpy as np
import pytest

from create_demo_states import create_demo_states
from errors import NotHermitian, ParseError, TraceMismatch
from state_io import (StateFileValidator, decode_matrix, encode_matrix, parse_state_file,
                      quick_validate, write_state_file)


def _write(path, payload):
    path.write_text(json.dumps(payload))
    return path


class TestParse:

    def test_maximally_mixed(self, tmp_path):
        path = _write(tmp_path / "mixed.json",
                      {"dim": 2, "matrix": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]})
        state = parse_state_file(path)
        np.testing.assert_allclose(state.entries, 0.5 * np.eye(2))
        assert state.trace == pytest.approx(1.0)

    def test_eigenvalues(self, tmp_path):
        path = _write(tmp_path / "s.json",
                      {"dim": 2, "matrix": [[[0.5, 0], [0.4, 0]], [[0.4, 0], [0.5, 0]]]})
        np.testing.assert_allclose(np.linalg.eigvalsh(parse_state_file(path).entries), [0.1, 0.9])

    def test_complex_entries(self, tmp_path):
        rho = np.array([[0.5, 0.25j], [-0.25j, 0.5]])
        state = parse_state_file(write_state_file(rho, tmp_path / "c.json"))
        np.testing.assert_allclose(state.entries, rho)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            parse_state_file(tmp_path / "absent.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"dim": 2, "matrix": [')
        with pytest.raises(ParseError):
            parse_state_file(path)

    @pytest.mark.parametrize("payload,locus", [
        ([1, 2], '$'),
        ({"matrix": []}, '$.dim'),
        ({"dim": 0, "matrix": []}, '$.dim'),
        ({"dim": 2, "matrix": [[[1, 0], [0, 0]]]}, '$.matrix'),
        ({"dim": 1, "matrix": [[[1, 0, 0]]]}, '$.matrix[0][0]'),
        ({"dim": 1, "matrix": [[["1", 0]]]}, '$.matrix[0][0]'),
    ])
    def test_structure_errors_carry_locus(self, payload, locus):
        with pytest.raises(ParseError) as excinfo:
            decode_matrix(payload, 'in.json')
        assert excinfo.value.details['locus'] == locus

    def test_semantic_errors_pass_through(self, tmp_path):
        path = _write(tmp_path / "h.json", {"dim": 2, "matrix": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]})
        with pytest.raises(NotHermitian):
            parse_state_file(path)
        path = _write(tmp_path / "t.json", {"dim": 1, "matrix": [[[0.5, 0]]]})
        with pytest.raises(TraceMismatch):
            parse_state_file(path)

    def test_encode_layout(self):
        payload = encode_matrix(np.array([[1.0, 2j], [-2j, 0.0]]))
        assert payload == {"dim": 2, "matrix": [[[1.0, 0.0], [0.0, 2.0]], [[0.0, -2.0], [0.0, 0.0]]]}


class TestValidator:

    def test_check_file(self, tmp_path):
        good = write_state_file(0.5 * np.eye(2), tmp_path / "good.json")
        bad = _write(tmp_path / "bad.json", {"dim": 2})
        report = StateFileValidator().validate_files([good, bad, tmp_path / "none.json"])
        assert report['total_files'] == 3
        assert len(report['valid']) == 1
        assert report['valid'][0]['dim'] == 2
        assert len(report['invalid']) == 2

    def test_quick_validate(self, tmp_path):
        good = write_state_file(0.5 * np.eye(2), tmp_path / "good.json")
        assert quick_validate(good) == (True, "Valid 2x2 state")
        ok, message = quick_validate(tmp_path / "none.json")
        assert not ok
        assert message.startswith("Invalid:")

    def test_demo_states_are_valid(self, tmp_path, capsys):
        written = create_demo_states(tmp_path, seed=3)
        assert sorted(written) == ['commuting_rho', 'maximally_mixed_2', 'plus',
                                   'qutrit_rho', 'qutrit_sigma']
        out = capsys.readouterr().out
        assert "✗" not in out
        assert "✓ qutrit_rho.json: Valid 3x3 state" in out
