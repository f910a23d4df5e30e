"""Table-driven model of the digital adder-tree baseline.

Digital energy/area/clock numbers come from post-layout
characterization of discrete synthesized designs, so the model is a
validated lookup table with log-log linear interpolation in the array
dimension n (the quantities span decades) and no extrapolation: queries
outside the characterized grid are an error, not an estimate.

Digital computation is error-free in this framework (sigma = 0): the
deterministic static-CMOS datapath does not contribute to the error
budget.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import IngestionError, OutOfRangeError

DIGITAL_TABLE_HEADER = ["n", "b", "energy_per_mac_joules", "area_m2", "f_clk_hz"]


@dataclass(frozen=True)
class DigitalTable:
    """Characterization grid keyed by bit width, sorted by n."""

    by_b: dict

    def bit_widths(self) -> list[int]:
        return sorted(self.by_b)

    def n_range(self, b: int) -> tuple[int, int]:
        ns = self._grid(b)["n"]
        return int(ns[0]), int(ns[-1])

    def _grid(self, b: int) -> dict:
        try:
            return self.by_b[b]
        except KeyError:
            raise OutOfRangeError(f"bit width {b} is not characterized") from None


def ingest_digital_table(rows) -> DigitalTable:
    """Validate and sort characterization records.

    ``rows`` is an iterable of mappings with the column names of the
    CSV schema.  Duplicated (n, b) points, non-positive values, or a
    bit width with fewer than two array sizes are rejected.
    """
    parsed = []
    seen = set()
    for i, row in enumerate(rows, start=1):
        try:
            rec = (
                int(row["n"]),
                int(row["b"]),
                float(row["energy_per_mac_joules"]),
                float(row["area_m2"]),
                float(row["f_clk_hz"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise IngestionError(f"record {i}: malformed ({exc})") from exc
        if min(rec) <= 0:
            raise IngestionError(f"record {i}: all values must be positive, got {rec}")
        if rec[:2] in seen:
            raise IngestionError(f"record {i}: duplicate grid point (n={rec[0]}, b={rec[1]})")
        seen.add(rec[:2])
        parsed.append(rec)
    if not parsed:
        raise IngestionError("empty digital characterization table")

    by_b: dict[int, dict] = {}
    for b in sorted({rec[1] for rec in parsed}):
        sub = sorted(rec for rec in parsed if rec[1] == b)
        if len(sub) < 2:
            raise IngestionError(f"bit width {b}: need at least 2 array sizes to interpolate")
        by_b[b] = {
            "n": np.array([rec[0] for rec in sub], dtype=np.int64),
            "energy": np.array([rec[2] for rec in sub]),
            "area": np.array([rec[3] for rec in sub]),
            "f_clk": np.array([rec[4] for rec in sub]),
        }
        by_b[b]["n"].setflags(write=False)
    return DigitalTable(by_b=by_b)


def load_digital_table(path) -> DigitalTable:
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != DIGITAL_TABLE_HEADER:
            raise IngestionError(
                f"{path}: expected header {','.join(DIGITAL_TABLE_HEADER)}, got {reader.fieldnames}"
            )
        try:
            return ingest_digital_table(list(reader))
        except IngestionError as exc:
            raise IngestionError(f"{path}: {exc}") from exc


def _loglog_lookup(grid: dict, n: int, column: str) -> float:
    ns = grid["n"]
    ys = grid[column]
    idx = int(np.searchsorted(ns, n))
    if idx < len(ns) and ns[idx] == n:
        return float(ys[idx])  # grid points are exact, not interpolated
    if n < ns[0] or n > ns[-1]:
        raise OutOfRangeError(
            f"n={n} outside the characterized range [{ns[0]}, {ns[-1]}]"
        )
    n0, n1 = float(ns[idx - 1]), float(ns[idx])
    y0, y1 = float(ys[idx - 1]), float(ys[idx])
    frac = (math.log(n) - math.log(n0)) / (math.log(n1) - math.log(n0))
    return math.exp(math.log(y0) + frac * (math.log(y1) - math.log(y0)))


def digital_mac_energy(t: DigitalTable, n: int, b: int) -> float:
    """Average energy of one 1-by-b digital MAC at array size n, joules."""
    return _loglog_lookup(t._grid(b), n, "energy")


def digital_area(t: DigitalTable, n: int, b: int) -> float:
    """Post-layout area of the whole n-element array, m**2."""
    return _loglog_lookup(t._grid(b), n, "area")


def digital_clock(t: DigitalTable, n: int, b: int) -> float:
    """Characterized clock rate at this grid point, Hz."""
    return _loglog_lookup(t._grid(b), n, "f_clk")


def digital_throughput(t: DigitalTable, n: int, b: int, m: int) -> float:
    """MAC/s of m parallel arrays computing one full VMM per cycle."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return n * m * digital_clock(t, n, b)
