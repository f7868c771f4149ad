"""Serve a model over the line-based oracle protocol.

Requests are ``EVAL <mask>`` lines answered with one ``repr`` float per
line (which round-trips to the exact double); ``QUIT`` ends the session
with exit status 0.  Malformed requests get an ``ERROR ...`` reply and the
server keeps going; an input stream that ends without ``QUIT`` is a
protocol violation and yields a nonzero status.
"""

from __future__ import annotations

import sys

from .evaluate import get_scalarizer
from .plan import MaskingPlan, build_masked_batch


def serve_oracle(plan: MaskingPlan, model, stdin=None, stdout=None) -> int:
    fin = stdin if stdin is not None else sys.stdin
    fout = stdout if stdout is not None else sys.stdout
    scalarize = get_scalarizer(plan.scalarizer)
    size = 1 << plan.n

    def reply(text):
        fout.write(text + "\n")
        fout.flush()

    for raw in fin:
        line = raw.strip()
        if line == "QUIT":
            return 0
        parts = line.split()
        if len(parts) != 2 or parts[0] != "EVAL":
            reply(f"ERROR unrecognized request {line!r}")
            continue
        try:
            mask = int(parts[1])
        except ValueError:
            reply(f"ERROR bad mask {parts[1]!r}")
            continue
        if not 0 <= mask < size:
            reply(f"ERROR mask {mask} out of range for {plan.n} players")
            continue
        try:
            value = scalarize(model(build_masked_batch(plan, [mask])), 1)
        except Exception as exc:  # noqa: BLE001 - report, keep serving
            reply(f"ERROR model failed at mask {mask}: {exc}")
            continue
        reply(repr(float(value[0])))
    return 1
