"""The game object: one scalar output per subset, with file formats.

Two interchange formats carry the same vector:

* JSON: ``{"format": "vtable", "version": 1, "n": ..., "players": [...],
  "ordering": "bitmask-lsb", "values": [...], "baseline_note": ...}``
* binary: magic ``VTBL``, version as uint16 LE (=1), n as uint16 LE, then
  ``2**n`` float64 LE values in ascending mask order.

The binary form is bit-exact and is also what the table digest hashes;
the JSON form round-trips values through shortest-representation decimal
floats.  Only the JSON form carries player labels and provenance.
"""

from __future__ import annotations

import hashlib
import io
import json
import math
import shlex
import struct
import subprocess
import threading
from dataclasses import dataclass, field
from queue import Empty, Queue

import numpy as np

from .lattice import as_lattice, check_players

_MAGIC = b"VTBL"
_VERSION = 1
ORDERING = "bitmask-lsb"


class TableFormatError(ValueError):
    """Malformed or inconsistent value-table payload."""


class OracleError(RuntimeError):
    """Subprocess oracle broke the line protocol."""


def default_players(n: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(n))


@dataclass(frozen=True, eq=False)
class ValueTable:
    """Outputs v(S) for every subset S, in ascending mask order.

    ``values[0]`` is v(empty) (everything masked to baseline) and
    ``values[2**n - 1]`` is v(N) (the unmasked input).  The vector is
    validated as finite on construction and frozen afterwards.
    """

    n: int
    values: np.ndarray
    players: tuple[str, ...] = ()
    baseline_note: str = ""

    def __post_init__(self):
        check_players(self.n)
        vals = as_lattice(self.values, self.n)
        bad = np.flatnonzero(~np.isfinite(vals))
        if bad.size:
            raise TableFormatError(f"non-finite value at mask {int(bad[0])}")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        players = tuple(self.players) if self.players else default_players(self.n)
        if len(players) != self.n:
            raise TableFormatError(
                f"expected {self.n} player labels, got {len(players)}"
            )
        object.__setattr__(self, "players", players)

    @property
    def v_empty(self) -> float:
        return float(self.values[0])

    @property
    def v_full(self) -> float:
        return float(self.values[-1])

    def digest(self) -> str:
        """sha256 of the canonical binary serialization."""
        return hashlib.sha256(save_value_table(self, "binary")).hexdigest()


def save_value_table(vt: ValueTable, format: str = "binary") -> bytes:
    """Serialize a table; ``format`` is ``"json"`` or ``"binary"``."""
    if format == "binary":
        header = struct.pack("<4sHH", _MAGIC, _VERSION, vt.n)
        return header + vt.values.astype("<f8").tobytes()
    if format == "json":
        doc = {
            "format": "vtable",
            "version": _VERSION,
            "n": vt.n,
            "players": list(vt.players),
            "ordering": ORDERING,
            "values": [float(v) for v in vt.values],
        }
        if vt.baseline_note:
            doc["baseline_note"] = vt.baseline_note
        return (json.dumps(doc, indent=2) + "\n").encode()
    raise ValueError(f"unknown table format {format!r}")


def load_value_table(source, format: str | None = None) -> ValueTable:
    """Parse a table from bytes or a binary stream.

    ``format`` may be ``"json"``, ``"binary"``, or None to sniff from the
    leading bytes (``VTBL`` magic vs JSON text).
    """
    data = source.read() if hasattr(source, "read") else bytes(source)
    if format is None:
        format = "binary" if data[:4] == _MAGIC else "json"
    if format == "binary":
        return _load_binary(data)
    if format == "json":
        return _load_json(data)
    raise ValueError(f"unknown table format {format!r}")


def _load_binary(data: bytes) -> ValueTable:
    if len(data) < 8:
        raise TableFormatError("binary table truncated before header")
    magic, version, n = struct.unpack("<4sHH", data[:8])
    if magic != _MAGIC:
        raise TableFormatError(f"bad magic {magic!r}, expected {_MAGIC!r}")
    if version != _VERSION:
        raise TableFormatError(f"unsupported binary version {version}")
    expected = 1 << n
    body = data[8:]
    if len(body) != 8 * expected:
        raise TableFormatError(
            f"length mismatch: expected {expected} values, "
            f"got {len(body) / 8:g}"
        )
    values = np.frombuffer(body, dtype="<f8").astype(np.float64)
    return ValueTable(n=n, values=values)


def _load_json(data: bytes) -> ValueTable:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise TableFormatError(f"invalid JSON table: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != "vtable":
        raise TableFormatError('missing "format": "vtable" header')
    if doc.get("version") != _VERSION:
        raise TableFormatError(f"unsupported table version {doc.get('version')}")
    ordering = doc.get("ordering", ORDERING)
    if ordering != ORDERING:
        raise TableFormatError(f"unsupported ordering {ordering!r}")
    n = doc.get("n")
    if not isinstance(n, int) or n < 0:
        raise TableFormatError(f"invalid player count {n!r}")
    values = doc.get("values")
    if not isinstance(values, list):
        raise TableFormatError('missing "values" array')
    expected = 1 << n
    if len(values) != expected:
        raise TableFormatError(f"length mismatch: expected {expected}, got {len(values)}")
    for i, v in enumerate(values):
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
            raise TableFormatError(f"non-finite or non-numeric value at mask {i}")
    return ValueTable(
        n=n,
        values=np.array(values, dtype=np.float64),
        players=tuple(doc.get("players") or ()),
        baseline_note=doc.get("baseline_note", ""),
    )


def read_table(path) -> ValueTable:
    with open(path, "rb") as fh:
        return load_value_table(fh)


def write_table(vt: ValueTable, path, format: str | None = None) -> None:
    if format is None:
        format = "json" if str(path).endswith(".json") else "binary"
    with open(path, "wb") as fh:
        fh.write(save_value_table(vt, format))


# ---------------------------------------------------------------------------
# Subprocess oracle protocol: the core writes "EVAL <mask>" lines, the
# oracle answers one decimal float per line, "QUIT" ends the session.
# One request is in flight at a time.
# ---------------------------------------------------------------------------


@dataclass
class _LineReader:
    """Background reader so each reply can be waited on with a timeout."""

    stream: io.TextIOBase
    queue: Queue = field(default_factory=Queue)

    def start(self) -> "_LineReader":
        t = threading.Thread(target=self._pump, daemon=True)
        t.start()
        return self

    def _pump(self):
        for line in self.stream:
            self.queue.put(line)
        self.queue.put(None)  # EOF marker

    def readline(self, timeout: float) -> str | None:
        try:
            return self.queue.get(timeout=timeout)
        except Empty:
            raise TimeoutError


def subprocess_oracle_fill(
    n: int,
    command,
    timeout: float = 30.0,
    players: tuple[str, ...] = (),
    baseline_note: str = "",
) -> ValueTable:
    """Query an external oracle process for all 2^n subset values.

    ``command`` is a shell-style string or argv list launching a process
    that speaks the EVAL/QUIT line protocol on its standard streams.
    Masks are queried once each, in ascending order, so the result is
    deterministic whenever the oracle is.
    """
    check_players(n)
    argv = shlex.split(command) if isinstance(command, str) else list(command)
    proc = subprocess.Popen(
        argv,
        stdin=subprocess.PIPE,
        stdout=subprocess.PIPE,
        text=True,
        bufsize=1,
    )
    values = np.empty(1 << n, dtype=np.float64)
    reader = _LineReader(proc.stdout).start()
    try:
        for mask in range(1 << n):
            try:
                proc.stdin.write(f"EVAL {mask}\n")
                proc.stdin.flush()
            except (BrokenPipeError, OSError) as exc:
                raise OracleError(f"oracle exited before mask {mask} was sent") from exc
            try:
                line = reader.readline(timeout)
            except TimeoutError:
                raise OracleError(f"oracle timed out on mask {mask} after {timeout}s")
            if line is None:
                raise OracleError(f"oracle exited before answering mask {mask}")
            try:
                values[mask] = float(line.strip())
            except ValueError:
                raise OracleError(
                    f"non-numeric oracle reply for mask {mask}: {line.strip()!r}"
                )
        try:
            proc.stdin.write("QUIT\n")
            proc.stdin.flush()
            proc.stdin.close()
        except (BrokenPipeError, OSError):
            pass
        proc.wait(timeout=timeout)
    finally:
        if proc.poll() is None:
            proc.kill()
            proc.wait()
    return ValueTable(n=n, values=values, players=players, baseline_note=baseline_note)
