"""Value-table container, file formats, and the subprocess oracle."""

import json
import sys

import numpy as np
import pytest

from ikit.table import (
    OracleError,
    TableFormatError,
    ValueTable,
    default_players,
    load_value_table,
    read_table,
    save_value_table,
    subprocess_oracle_fill,
    write_table,
)

# A tiny oracle speaking the line protocol: value(mask) = popcount(mask) + mask/16.
ORACLE_SRC = r"""
import sys
for line in sys.stdin:
    parts = line.split()
    if not parts:
        continue
    if parts[0] == "QUIT":
        break
    mask = int(parts[1])
    print(bin(mask).count("1") + mask / 16.0, flush=True)
"""


def _vt(n=3, seed=0):
    rng = np.random.default_rng(seed)
    return ValueTable(n=n, values=rng.normal(size=1 << n))


class TestValueTable:
    def test_basic_fields(self):
        vt = ValueTable(n=2, values=np.array([0.0, 1.0, 2.0, 5.0]))
        assert vt.players == ("x0", "x1")
        assert vt.v_empty == 0.0 and vt.v_full == 5.0
        assert default_players(3) == ("x0", "x1", "x2")

    def test_rejects_bad_length(self):
        with pytest.raises(ValueError):
            ValueTable(n=2, values=np.zeros(3))

    def test_rejects_non_finite_with_index(self):
        values = np.zeros(8)
        values[5] = np.nan
        with pytest.raises(ValueError, match="5"):
            ValueTable(n=3, values=values)

    def test_values_read_only(self):
        vt = _vt()
        with pytest.raises(ValueError):
            vt.values[0] = 99.0

    def test_rejects_wrong_label_count(self):
        with pytest.raises(ValueError):
            ValueTable(n=2, values=np.zeros(4), players=("a",))

    def test_digest_tracks_content(self):
        a, b = _vt(seed=1), _vt(seed=1)
        assert a.digest() == b.digest()
        assert a.digest() != _vt(seed=2).digest()


class TestFormats:
    def test_binary_roundtrip(self):
        vt = _vt(n=4, seed=3)
        data = save_value_table(vt, "binary")
        assert data[:4] == b"VTBL"
        back = load_value_table(data)
        assert back.n == 4
        np.testing.assert_array_equal(back.values, vt.values)

    def test_json_roundtrip(self):
        vt = ValueTable(n=2, values=np.array([0.0, 1.0, 2.0, 5.0]), baseline_note="zeros")
        doc = json.loads(save_value_table(vt, "json"))
        assert doc["format"] == "vtable"
        assert doc["ordering"] == "bitmask-lsb"
        assert doc["values"] == [0.0, 1.0, 2.0, 5.0]
        back = load_value_table(save_value_table(vt, "json"))
        np.testing.assert_array_equal(back.values, vt.values)
        assert back.baseline_note == "zeros"

    def test_json_length_mismatch_message(self):
        doc = {
            "format": "vtable",
            "version": 1,
            "n": 3,
            "players": ["a", "b", "c"],
            "ordering": "bitmask-lsb",
            "values": [0.0] * 7,
        }
        with pytest.raises(TableFormatError, match="expected 8"):
            load_value_table(json.dumps(doc).encode())

    def test_binary_truncation_detected(self):
        data = save_value_table(_vt(n=3), "binary")
        with pytest.raises(TableFormatError):
            load_value_table(data[:-8])

    def test_wrong_ordering_rejected(self):
        doc = json.loads(save_value_table(_vt(n=2, seed=5), "json"))
        doc["ordering"] = "colex"
        with pytest.raises(TableFormatError):
            load_value_table(json.dumps(doc).encode())

    def test_file_roundtrip_by_suffix(self, tmp_path):
        vt = _vt(n=3, seed=7)
        jpath = tmp_path / "t.json"
        bpath = tmp_path / "t.vtbl"
        write_table(vt, jpath)
        write_table(vt, bpath)
        assert jpath.read_bytes()[:1] == b"{"
        assert bpath.read_bytes()[:4] == b"VTBL"
        for path in (jpath, bpath):
            np.testing.assert_array_equal(read_table(path).values, vt.values)


class TestSubprocessOracle:
    def test_fill_matches_formula(self, tmp_path):
        script = tmp_path / "oracle.py"
        script.write_text(ORACLE_SRC)
        vt = subprocess_oracle_fill(3, [sys.executable, str(script)])
        expected = [bin(m).count("1") + m / 16.0 for m in range(8)]
        np.testing.assert_allclose(vt.values, expected)

    def test_oracle_garbage_reply_names_mask(self, tmp_path):
        script = tmp_path / "bad.py"
        script.write_text(
            "import sys\n"
            "sys.stdin.readline()\n"
            "print('not-a-number', flush=True)\n"
            "sys.stdin.read()\n"
        )
        with pytest.raises(OracleError, match="mask 0"):
            subprocess_oracle_fill(2, [sys.executable, str(script)], timeout=10)

    def test_oracle_early_exit_is_reported(self, tmp_path):
        script = tmp_path / "dies.py"
        script.write_text("raise SystemExit(3)\n")
        with pytest.raises(OracleError):
            subprocess_oracle_fill(2, [sys.executable, str(script)], timeout=10)
