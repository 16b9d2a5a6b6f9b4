"""Persistent value cache: one JSON object per line, decimal strings only."""

from __future__ import annotations

import json
import os

from mpmath import mp, mpf

from .numerics import BigComplex


class ValueCache:
    """JSON-lines cache keyed by (index text, precision, cutoff, accel order).

    Values are stored as decimal strings; a record is written once and the
    string read back is exactly the string written.  Appends are flushed per
    record so concurrent readers see whole lines.
    """

    def __init__(self, path: str):
        self.path = path
        self._mem: dict[tuple[str, int, int, int], BigComplex] = {}
        self._load()

    def _load(self) -> None:
        if not os.path.exists(self.path):
            return
        with open(self.path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    key = (rec["index"], int(rec["precision"]),
                           int(rec["cutoff"]), int(rec["accel_order"]))
                    with mp.workdps(int(rec["precision"]) + 25):
                        self._mem[key] = BigComplex(
                            mpf(rec["re"]), mpf(rec["im"]), mpf(rec["err"]))
                except (KeyError, ValueError, json.JSONDecodeError):
                    continue  # skip malformed lines rather than failing startup

    def get(self, key: tuple[str, int, int, int]) -> BigComplex | None:
        return self._mem.get(key)

    def put(self, key: tuple[str, int, int, int], value: BigComplex) -> None:
        if key in self._mem:
            return
        self._mem[key] = value
        digits = key[1] + 10
        with mp.workdps(key[1] + 25):
            rec = {
                "index": key[0],
                "precision": key[1],
                "cutoff": key[2],
                "accel_order": key[3],
                "re": mp.nstr(value.re, digits, strip_zeros=False),
                "im": mp.nstr(value.im, digits, strip_zeros=False),
                "err": mp.nstr(value.err, 5),
            }
        os.makedirs(os.path.dirname(self.path) or ".", exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
            fh.flush()

    def stats(self) -> dict:
        per_precision: dict[str, int] = {}
        for (_, prec, _, _) in self._mem:
            per_precision[str(prec)] = per_precision.get(str(prec), 0) + 1
        return {"path": self.path, "records": len(self._mem),
                "per_precision": dict(sorted(per_precision.items()))}

    def clear(self) -> int:
        n = len(self._mem)
        self._mem.clear()
        if os.path.exists(self.path):
            os.remove(self.path)
        return n
