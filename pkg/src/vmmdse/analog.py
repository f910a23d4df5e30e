"""Charge-domain MAC energy and the ADC survey envelope.

Energy per charge-domain MAC accumulates the unit-capacitor charge
(replicated r times when mismatch must be averaged down), optional
switch logic, and one conversion amortized over the chain::

    e_mac = r * e_cap + e_logic + e_adc / n

Conversion energy versus effective resolution follows the
two-constant model

    e_adc = k1 * enob + k2 * 4**enob

fitted as a lower envelope over a survey of published converter
designs: survivors of a minimum-sample-rate filter are binned in
0.5-bit enob bins, the cheapest design per bin forms the envelope, and
(k1, k2) come from a non-negative least-squares fit scaled to touch
the bins from below.  The throughput envelope keeps, per bin, the
fastest design that is not more than three times the fitted energy;
the area pick is the smallest design among those that also clear the
SNR needed to resolve arrays of at least 100 MACs.

Array mismatch for n accumulating unit capacitors with relative
mismatch s grows as s*sqrt(n); replicating each unit r times averages
it back down by sqrt(r).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import nnls

from .errors import ConfigurationError, InfeasibleError, IngestionError, InsufficientDataError

ENOB_BIN_WIDTH = 0.5
ENERGY_SLACK_FACTOR = 3.0
#: smallest enob considered for the area pick: enough SNR to resolve a
#: 100-MAC accumulation (20*log10(100) dB)
AREA_ENOB_FLOOR = (20.0 * math.log10(100.0) - 1.76) / 6.02

ADC_SURVEY_HEADER = ["enob", "energy_per_conv_joules", "sample_rate_hz", "area_m2"]


@dataclass(frozen=True)
class AnalogParams:
    """Charge-domain cost parameters: energies in joules."""

    e_cap: float
    e_logic: float
    sigma_cap_rel: float
    m_shared: int

    def __post_init__(self):
        if self.e_cap < 0.0 or self.e_logic < 0.0:
            raise ConfigurationError("energies must be >= 0")
        if not 0.0 <= self.sigma_cap_rel < 1.0:
            raise ConfigurationError("sigma_cap_rel must lie in [0, 1)")
        if self.m_shared < 1:
            raise ConfigurationError("m_shared must be >= 1")


def load_analog_params(path) -> AnalogParams:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise IngestionError(f"{path}: invalid JSON ({exc})") from exc
    try:
        return AnalogParams(
            e_cap=float(doc["e_cap_joules"]),
            e_logic=float(doc["e_logic_joules"]),
            sigma_cap_rel=float(doc["sigma_cap_rel"]),
            m_shared=int(doc["m_shared"]),
        )
    except KeyError as exc:
        raise IngestionError(f"{path}: missing key {exc}") from exc


@dataclass(frozen=True)
class AdcSurveyRecord:
    enob: float
    energy_per_conv: float
    sample_rate: float
    area: float

    def __post_init__(self):
        if min(self.enob, self.energy_per_conv, self.sample_rate, self.area) <= 0.0:
            raise IngestionError("survey records must have positive fields")


def read_adc_survey(path) -> list[AdcSurveyRecord]:
    """Read a survey CSV (header enob,energy_per_conv_joules,sample_rate_hz,area_m2)."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ADC_SURVEY_HEADER:
            raise IngestionError(
                f"{path}: expected header {','.join(ADC_SURVEY_HEADER)}, got {reader.fieldnames}"
            )
        records = []
        for i, row in enumerate(reader, start=2):
            try:
                records.append(
                    AdcSurveyRecord(
                        enob=float(row["enob"]),
                        energy_per_conv=float(row["energy_per_conv_joules"]),
                        sample_rate=float(row["sample_rate_hz"]),
                        area=float(row["area_m2"]),
                    )
                )
            except (TypeError, ValueError) as exc:
                raise IngestionError(f"{path}:{i}: bad record ({exc})") from exc
    if not records:
        raise IngestionError(f"{path}: empty survey")
    return records


@dataclass(frozen=True)
class AdcEnvelope:
    """Fitted energy constants plus throughput/area envelopes of a survey.

    ``throughput_enobs``/``throughput_rates`` tabulate, per enob bin,
    the fastest surviving design; queries take the fastest design with
    at least the requested resolution, which makes the envelope
    monotone non-increasing in enob.
    """

    k1: float
    k2: float
    area_pick: float
    throughput_enobs: np.ndarray
    throughput_rates: np.ndarray
    _suffix_max: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not (self.k1 > 0.0 and self.k2 > 0.0):
            raise InsufficientDataError(
                "survey does not constrain both envelope constants (k1, k2 must be > 0)"
            )
        enobs = np.array(self.throughput_enobs, dtype=np.float64, copy=True)
        rates = np.array(self.throughput_rates, dtype=np.float64, copy=True)
        if enobs.ndim != 1 or enobs.shape != rates.shape or enobs.size == 0:
            raise ConfigurationError("throughput table must be two equal-length 1-D arrays")
        order = np.argsort(enobs)
        enobs, rates = enobs[order], rates[order]
        suffix = np.maximum.accumulate(rates[::-1])[::-1]
        for arr in (enobs, rates, suffix):
            arr.setflags(write=False)
        object.__setattr__(self, "throughput_enobs", enobs)
        object.__setattr__(self, "throughput_rates", rates)
        object.__setattr__(self, "_suffix_max", suffix)

    def adc_energy(self, enob: float) -> float:
        return adc_energy(enob, self.k1, self.k2)

    def throughput_fit(self, enob: float) -> float:
        """Best sample rate offering at least ``enob`` bits; 0.0 if none."""
        idx = int(np.searchsorted(self.throughput_enobs, enob, side="left"))
        if idx >= self.throughput_enobs.size:
            return 0.0
        return float(self._suffix_max[idx])

    def to_dict(self) -> dict:
        return {
            "k1_joules_per_bit": self.k1,
            "k2_joules": self.k2,
            "area_pick_m2": self.area_pick,
            "throughput_bins": [
                {"enob": float(e), "max_sample_rate_hz": float(r)}
                for e, r in zip(self.throughput_enobs, self.throughput_rates)
            ],
        }

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path) -> "AdcEnvelope":
        doc = json.loads(Path(path).read_text())
        bins = doc["throughput_bins"]
        return cls(
            k1=float(doc["k1_joules_per_bit"]),
            k2=float(doc["k2_joules"]),
            area_pick=float(doc["area_pick_m2"]),
            throughput_enobs=np.array([b["enob"] for b in bins]),
            throughput_rates=np.array([b["max_sample_rate_hz"] for b in bins]),
        )


def adc_energy(enob: float, k1: float, k2: float) -> float:
    """Two-constant conversion energy model k1*enob + k2*4**enob."""
    if enob < 0.0:
        raise ValueError("enob must be >= 0")
    return k1 * enob + k2 * 4.0**enob


def enob_from_snr(snr_db: float) -> float:
    """Effective number of bits for a given SNR: (snr_db - 1.76) / 6.02."""
    if snr_db < 1.76:
        raise ValueError("snr below 1.76 dB would imply negative enob")
    return (snr_db - 1.76) / 6.02


def required_enob(full_scale: int, sigma_max: float) -> float:
    """Resolution needed to keep quantization inside the error budget.

    The SNR feeding the enob rule is 20*log10(full_scale / sigma_max);
    the result is rounded up to the next half bit, matching the survey
    binning.
    """
    if full_scale < 1:
        raise ValueError("full_scale must be >= 1")
    if not sigma_max > 0.0:
        raise ValueError("sigma_max must be > 0")
    snr_db = 20.0 * math.log10(full_scale / sigma_max)
    raw = enob_from_snr(snr_db)
    return math.ceil(raw / ENOB_BIN_WIDTH) * ENOB_BIN_WIDTH


def analog_mac_energy(p: AnalogParams, e_adc: float, n: int, r: int) -> float:
    """Energy of one charge-domain MAC at redundancy r over a chain of n."""
    if n < 1 or r < 1:
        raise ValueError("n and r must be >= 1")
    return r * p.e_cap + p.e_logic + e_adc / n


def analog_sigma_array(p: AnalogParams, n: int, r: int) -> float:
    """Accumulated mismatch of n unit caps averaged over r replicas, LSB."""
    return p.sigma_cap_rel * math.sqrt(n) / math.sqrt(r)


def solve_analog_redundancy(
    p: AnalogParams, n: int, sigma_max: float, r_cap: int = 1024
) -> int:
    """Smallest capacitor replication meeting the mismatch budget."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not sigma_max > 0.0:
        raise ValueError("sigma_max must be > 0")
    if p.sigma_cap_rel == 0.0:
        return 1
    r0 = n * (p.sigma_cap_rel / sigma_max) ** 2
    r = max(1, math.ceil(r0 - 1e-9))
    while r > 1 and analog_sigma_array(p, n, r - 1) <= sigma_max:
        r -= 1
    while r <= r_cap and analog_sigma_array(p, n, r) > sigma_max:
        r += 1
    if r > r_cap:
        raise InfeasibleError(
            f"no capacitor replication <= {r_cap} brings the n={n} array "
            f"mismatch below {sigma_max}"
        )
    return r


def fit_adc_envelope(records, min_rate: float) -> AdcEnvelope:
    """Fit the energy/throughput/area envelopes of a converter survey.

    Deterministic in the face of record reordering and duplicates: the
    survivors are canonically sorted before binning.
    """
    survivors = sorted(
        (rec for rec in records if rec.sample_rate >= min_rate),
        key=lambda rec: (rec.enob, rec.energy_per_conv, -rec.sample_rate, rec.area),
    )
    if len(survivors) < 2:
        raise InsufficientDataError(
            f"only {len(survivors)} records at or above {min_rate} Hz; need at least 2"
        )

    cheapest: dict[int, AdcSurveyRecord] = {}
    for rec in survivors:
        key = math.floor(rec.enob / ENOB_BIN_WIDTH)
        best = cheapest.get(key)
        if best is None or rec.energy_per_conv < best.energy_per_conv:
            cheapest[key] = rec
    if len(cheapest) < 2:
        raise InsufficientDataError(
            "survivors fall into a single enob bin; the two-constant fit is degenerate"
        )

    mins = [cheapest[k] for k in sorted(cheapest)]
    x = np.array([rec.enob for rec in mins])
    y = np.array([rec.energy_per_conv for rec in mins])
    design = np.column_stack([x, 4.0**x])
    (k1, k2), _ = nnls(design, y)

    # lower envelope: scale the fit down until it touches the bin minima
    fit_at_bins = design @ np.array([k1, k2])
    with np.errstate(divide="ignore"):
        gamma = float(np.min(y / fit_at_bins))
    if math.isfinite(gamma) and gamma < 1.0:
        k1 *= gamma
        k2 *= gamma

    fast: dict[int, AdcSurveyRecord] = {}
    area_pick = math.inf
    for rec in survivors:
        if rec.energy_per_conv > ENERGY_SLACK_FACTOR * (k1 * rec.enob + k2 * 4.0**rec.enob):
            continue
        key = math.floor(rec.enob / ENOB_BIN_WIDTH)
        best = fast.get(key)
        if best is None or rec.sample_rate > best.sample_rate:
            fast[key] = rec
        if rec.enob >= AREA_ENOB_FLOOR:
            area_pick = min(area_pick, rec.area)
    if not fast:
        raise InsufficientDataError("no record passes the throughput energy filter")
    if not math.isfinite(area_pick):
        raise InsufficientDataError(
            f"no filtered record reaches the {AREA_ENOB_FLOOR:.2f}-bit area floor"
        )

    keys = sorted(fast)
    return AdcEnvelope(
        k1=float(k1),
        k2=float(k2),
        area_pick=area_pick,
        throughput_enobs=np.array([fast[k].enob for k in keys]),
        throughput_rates=np.array([fast[k].sample_rate for k in keys]),
    )
