"""Energy and sizing models for the delay-line readout converters.

Two architectures are modeled.  The plain successive-approximation
converter (``sar``) repeatedly delays the faster of result/reference in
binary-decaying amounts, so its delay bank and energy grow
exponentially with the resolved range in bits.  The hybrid converter
runs a gray-code counter off a ring oscillator of ``l_osc`` delay cells
(one MSB count per 2*l_osc unit delays) and resolves only the residual
with a small successive-approximation stage; counter and oscillator are
shared by the ``m`` parallel chains, which is what gives the hybrid its
scaling advantage for long windows.

Energy of a hybrid conversion over a window of n*r unit delays::

    e = (e_cnt/m + e_cnt_load) * n*r / (2*l_osc)        counting
      + 2 * n*r * e_td_and / m                          oscillator load
      + e_td_and * 2**ceil(1 + log2(l_osc))             residual stage
      + ceil(1 + log2(l_osc)) * e_sample                sampling

The residual stage resolves a distance inside one oscillator period
(2*l_osc unit steps) and therefore needs ceil(1 + log2(l_osc)) bits;
for l_osc = 1 this evaluates to 1 bit, identical to
ceil(log2(2*l_osc)).

The optimum oscillator length balances the counting term against the
residual stage.  Dropping the ceiling brackets gives the closed form

    l_osc ~ (sqrt((e_cnt/m + e_cnt_load) * 2*e_td_and*n*r*ln 4) - e_sample)
            / (4*e_td_and*ln 2)

which is only used as a search seed here; the returned value is the
exact integer minimizer found by exhaustive evaluation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, IngestionError


@dataclass(frozen=True)
class TdcParams:
    """Component energies (J) and the unit delay (s) of the converters.

    ``e_cnt`` is the gray-code counter energy per count event (from
    synthesis data); ``e_cnt_load`` is the per-chain MSB register load
    per count and also folds in the shared reference-delay energy.
    """

    e_td_and: float
    e_sample: float
    e_cnt: float
    e_cnt_load: float
    t_unit: float

    def __post_init__(self):
        for name in ("e_td_and", "e_sample", "e_cnt", "e_cnt_load"):
            if getattr(self, name) < 0.0:
                raise ConfigurationError(f"{name} must be >= 0")
        if not self.t_unit > 0.0:
            raise ConfigurationError("t_unit must be > 0")


def load_tdc_params(path) -> TdcParams:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise IngestionError(f"{path}: invalid JSON ({exc})") from exc
    try:
        return TdcParams(
            e_td_and=float(doc["e_td_and_joules"]),
            e_sample=float(doc["e_sample_joules"]),
            e_cnt=float(doc["e_cnt_joules"]),
            e_cnt_load=float(doc["e_cnt_load_joules"]),
            t_unit=float(doc["t_unit_seconds"]),
        )
    except KeyError as exc:
        raise IngestionError(f"{path}: missing key {exc}") from exc


@dataclass(frozen=True)
class TdcRange:
    """Full-scale converter input in delay steps plus its width in bits."""

    max_in: int
    range_bits: int = field(init=False)

    def __post_init__(self):
        if self.max_in < 1:
            raise ValueError("max_in must be >= 1")
        object.__setattr__(self, "range_bits", int(self.max_in).bit_length())


def sar_bits(l_osc: int) -> int:
    """Residual-stage resolution: ceil(1 + log2(l_osc)), exact in integers."""
    if l_osc < 1:
        raise ValueError("l_osc must be >= 1")
    return 1 + (l_osc - 1).bit_length()


def hybrid_tdc_energy(p: TdcParams, n: int, r: int, m: int, l_osc: int) -> float:
    """Energy of one hybrid conversion over a window of n*r unit delays."""
    if min(n, r, m, l_osc) < 1:
        raise ValueError("n, r, m and l_osc must all be >= 1")
    bits = sar_bits(l_osc)
    counting = (p.e_cnt / m + p.e_cnt_load) * (n * r) / (2.0 * l_osc)
    osc_load = 2.0 * n * r * p.e_td_and / m
    return counting + osc_load + p.e_td_and * 2.0**bits + bits * p.e_sample


def closed_form_losc(p: TdcParams, n: int, r: int, m: int) -> float:
    """Continuous oscillator-length optimum (ceilings dropped), clamped >= 1."""
    if min(n, r, m) < 1:
        raise ValueError("n, r and m must all be >= 1")
    if p.e_td_and == 0.0:
        return 1.0
    c = p.e_cnt / m + p.e_cnt_load
    val = (math.sqrt(c * 2.0 * p.e_td_and * n * r * math.log(4.0)) - p.e_sample) / (
        4.0 * p.e_td_and * math.log(2.0)
    )
    return max(1.0, val)


def optimal_losc(p: TdcParams, n: int, r: int, m: int) -> int:
    """Integer oscillator length minimizing :func:`hybrid_tdc_energy`.

    Evaluates every l in [1, ceil(n*r/2)] (cheap at desk scale) so the
    result is the true integer optimum; ties resolve to the smaller l.
    """
    if min(n, r, m) < 1:
        raise ValueError("n, r and m must all be >= 1")
    l_hi = max(1, math.ceil(n * r / 2))
    ls = np.arange(1, l_hi + 1, dtype=np.float64)
    # ceil(1 + log2(l)) == 1 + bit_length(l - 1); frexp is exact for ints < 2**53
    bits = np.frexp(ls - 1.0)[1].astype(np.float64) + 1.0
    c = p.e_cnt / m + p.e_cnt_load
    energy = (
        c * (n * r) / (2.0 * ls)
        + 2.0 * n * r * p.e_td_and / m
        + p.e_td_and * np.exp2(bits)
        + bits * p.e_sample
    )
    return int(np.argmin(energy)) + 1


def sar_tdc_energy(p: TdcParams, b_range: int, m: int) -> float:
    """Energy of one successive-approximation conversion of b_range bits.

    The reference is pre-delayed to half the full-scale input (shared by
    the m chains), halving the delay bank:

        e = e_td_and * (m+1)/m * (2**b_range - 2) + b_range * e_sample
    """
    if b_range < 1 or m < 1:
        raise ValueError("b_range and m must be >= 1")
    return p.e_td_and * (m + 1) / m * (2.0**b_range - 2.0) + b_range * p.e_sample


def reduced_range(n: int, b: int, clip_bits: int) -> TdcRange:
    """Converter range after clipping the output distribution.

    The full-scale chain output spans n*(2**b - 1) + 1 codes; clipping
    keeps every 2**clip_bits-th code, modeling the reduced output ranges
    observed in CNN layers.  clip_bits = 0 returns the full scale.
    """
    if n < 1 or b < 1:
        raise ValueError("n and b must be >= 1")
    if clip_bits < 0:
        raise ValueError("clip_bits must be >= 0")
    full = n * (2**b - 1)
    codes = (full + 1) >> clip_bits
    if codes < 2:
        raise ValueError(f"clip_bits={clip_bits} clips the whole {full}-step range")
    return TdcRange(max_in=codes - 1)


def hybrid_conversion_time(p: TdcParams, l_osc: int) -> float:
    """One oscillator period plus the residual-stage settle time, seconds."""
    return (2 * l_osc + 2 ** sar_bits(l_osc)) * p.t_unit


def sar_conversion_time(p: TdcParams, max_in: int, r: int) -> float:
    """Worst-case total inserted delay of a plain conversion, seconds."""
    if max_in < 1 or r < 1:
        raise ValueError("max_in and r must be >= 1")
    return max_in * r * p.t_unit
