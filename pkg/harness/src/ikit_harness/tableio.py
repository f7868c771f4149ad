"""Writers/readers for the value-table interchange formats.

The core toolkit defines two byte-level formats for a table of 2**n
float64 values in ascending mask order; this module speaks both without
importing the core:

* binary: ``VTBL`` magic, uint16 LE version (=1), uint16 LE n, then the
  raw little-endian float64 payload;
* JSON: ``{"format": "vtable", "version": 1, "n", "players",
  "ordering": "bitmask-lsb", "values", ["baseline_note"]}``.
"""

from __future__ import annotations

import json
import struct

import numpy as np

MAGIC = b"VTBL"
VERSION = 1
ORDERING = "bitmask-lsb"


def default_players(n: int) -> list[str]:
    return [f"x{i}" for i in range(n)]


def table_bytes(n, values, players=None, baseline_note="", format="binary") -> bytes:
    values = np.ascontiguousarray(np.asarray(values, dtype=np.float64))
    if values.size != 1 << n:
        raise ValueError(f"expected {1 << n} values for n={n}, got {values.size}")
    if not np.all(np.isfinite(values)):
        raise ValueError("table contains non-finite values")
    if format == "binary":
        return struct.pack("<4sHH", MAGIC, VERSION, n) + values.astype("<f8").tobytes()
    if format == "json":
        doc = {
            "format": "vtable",
            "version": VERSION,
            "n": int(n),
            "players": list(players) if players else default_players(n),
            "ordering": ORDERING,
            "values": [float(v) for v in values],
        }
        if baseline_note:
            doc["baseline_note"] = baseline_note
        return (json.dumps(doc, indent=2) + "\n").encode()
    raise ValueError(f"unknown table format {format!r}")


def _format_for(path, format):
    if format != "auto":
        return format
    return "json" if str(path).endswith(".json") else "binary"


def write_table_file(path, n, values, players=None, baseline_note="", format="auto"):
    data = table_bytes(n, values, players, baseline_note, _format_for(path, format))
    with open(path, "wb") as fh:
        fh.write(data)


def read_table_file(path):
    """Return ``(n, values, players, baseline_note)``; format is sniffed."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] == MAGIC:
        version, n = struct.unpack("<HH", data[4:8])
        if version != VERSION:
            raise ValueError(f"unsupported table version {version}")
        values = np.frombuffer(data[8:], dtype="<f8").astype(np.float64)
        players = default_players(n)
        note = ""
    else:
        doc = json.loads(data.decode("utf-8"))
        if doc.get("format") != "vtable":
            raise ValueError(f"not a value table: format={doc.get('format')!r}")
        n = int(doc["n"])
        values = np.asarray(doc["values"], dtype=np.float64)
        players = list(doc.get("players") or default_players(n))
        note = doc.get("baseline_note", "")
    if values.size != 1 << n:
        raise ValueError(f"expected {1 << n} values for n={n}, got {values.size}")
    return n, values, players, note
