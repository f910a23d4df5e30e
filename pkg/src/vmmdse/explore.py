"""Sweep engine: sizes and costs every (domain, n, b) grid point.

For each grid point the engine solves the per-domain sizing problem
first (redundancy for the TD chain, capacitor replication and required
enob for the charge domain, table lookup for digital), then evaluates
energy per MAC, throughput, and area per MAC.  Infeasible points are
kept in the output with the failing constraint recorded instead of
being dropped, so coverage gaps stay visible.

Feasibility is re-checked at row construction from the raw moment
formulas rather than trusted from the solvers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import analog as ana
from . import chains, digital, tdc
from .cells import InputDistribution, cell_error_stats, load_cell_spec
from .errors import ConfigurationError, InfeasibleError, OutOfRangeError
from .fixtures import fixture_path

DOMAIN_TD = "td"
DOMAIN_ANALOG = "analog"
DOMAIN_DIGITAL = "digital"
ALL_DOMAINS = (DOMAIN_TD, DOMAIN_ANALOG, DOMAIN_DIGITAL)

STATUS_OK = "ok"

#: decomposition study: (chain length, parallel chains, range clip bits)
RESNET_DECOMPOSITIONS = ((576, 8, 0), (288, 16, 1), (144, 32, 2))


@dataclass(frozen=True)
class SweepConfig:
    domains: tuple = ALL_DOMAINS
    n_values: tuple = (16, 32, 64, 128, 256, 512, 1024, 2048, 4096)
    b_values: tuple = (1, 2, 3, 4)
    m: int = 8
    mode: str = chains.MODE_RELAXED
    sigma_table: Optional[dict] = None
    clip_bits: int = 2
    weight_one_density: float = 0.3
    px_tables: Optional[dict] = None  # optional per-b activation pmf override
    r_cap: int = chains.DEFAULT_R_CAP
    min_adc_rate: float = 1.0e6
    cell_paths: dict = field(default_factory=dict)
    tdc_path: Optional[Path] = None
    analog_path: Optional[Path] = None
    digital_path: Optional[Path] = None
    adc_survey_path: Optional[Path] = None

    def __post_init__(self):
        if not self.domains:
            raise ConfigurationError("at least one domain must be selected")
        for d in self.domains:
            if d not in ALL_DOMAINS:
                raise ConfigurationError(f"unknown domain {d!r}")
        if not self.n_values or not self.b_values:
            raise ConfigurationError("n_values and b_values must be non-empty")
        if any(n < 1 for n in self.n_values) or any(b < 1 for b in self.b_values):
            raise ConfigurationError("n and b values must be >= 1")
        if self.m < 1:
            raise ConfigurationError("m must be >= 1")
        if self.mode not in (chains.MODE_PRECISE, chains.MODE_RELAXED):
            raise ConfigurationError(f"unknown mode {self.mode!r}")
        if self.mode == chains.MODE_RELAXED:
            if not self.sigma_table:
                raise ConfigurationError("relaxed mode needs a sigma_array_max table")
            for b in self.b_values:
                if b not in self.sigma_table:
                    raise ConfigurationError(f"sigma_array_max table has no entry for b={b}")
        if self.clip_bits < 0:
            raise ConfigurationError("clip_bits must be >= 0")

    def budget(self, b: int) -> chains.ErrorBudget:
        if self.mode == chains.MODE_PRECISE:
            return chains.ErrorBudget.precise()
        return chains.ErrorBudget.relaxed(self.sigma_table[b])


def _resolve(entry: str, base: Optional[Path]) -> Path:
    if entry.startswith("builtin:"):
        return fixture_path(entry[len("builtin:"):])
    path = Path(entry)
    if not path.is_absolute() and base is not None:
        path = base / path
    return path


def load_config(path=None) -> SweepConfig:
    """Build a SweepConfig from a JSON file (packaged defaults if None)."""
    cfg_path = Path(path) if path is not None else fixture_path("default_config.json")
    base = cfg_path.parent if path is not None else None
    try:
        doc = json.loads(cfg_path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"{cfg_path}: cannot read config ({exc})") from exc
    try:
        fixtures = doc["fixtures"]
        sigma_raw = doc.get("sigma_array_max") or {}
        return SweepConfig(
            domains=tuple(doc["domains"]),
            n_values=tuple(int(n) for n in doc["n_values"]),
            b_values=tuple(int(b) for b in doc["b_values"]),
            m=int(doc["m"]),
            mode=str(doc["mode"]),
            sigma_table={int(k): float(v) for k, v in sigma_raw.items()} or None,
            clip_bits=int(doc.get("clip_bits", 0)),
            weight_one_density=float(doc.get("weight_one_density", 0.3)),
            px_tables={
                int(k): tuple(float(p) for p in v) for k, v in doc.get("px", {}).items()
            }
            or None,
            r_cap=int(doc.get("r_cap", chains.DEFAULT_R_CAP)),
            min_adc_rate=float(doc.get("min_adc_sample_rate_hz", 1.0e6)),
            cell_paths={int(k): _resolve(v, base) for k, v in fixtures["cells"].items()},
            tdc_path=_resolve(fixtures["tdc"], base),
            analog_path=_resolve(fixtures["analog"], base),
            digital_path=_resolve(fixtures["digital"], base),
            adc_survey_path=_resolve(fixtures["adc_survey"], base),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigurationError(f"{cfg_path}: malformed config ({exc})") from exc


def override_config(cfg: SweepConfig, **updates) -> SweepConfig:
    return replace(cfg, **{k: v for k, v in updates.items() if v is not None})


@dataclass(frozen=True)
class FixtureSet:
    cells: dict
    tdc_params: tdc.TdcParams
    analog_params: ana.AnalogParams
    digital_table: Optional[digital.DigitalTable]
    envelope: Optional[ana.AdcEnvelope]


def load_fixtures(cfg: SweepConfig) -> FixtureSet:
    """Load and validate every fixture the sweep needs."""
    cells = {}
    if DOMAIN_TD in cfg.domains:
        for b in cfg.b_values:
            if b not in cfg.cell_paths:
                raise ConfigurationError(f"no cell fixture configured for b={b}")
            cells[b] = load_cell_spec(cfg.cell_paths[b])
            if cells[b].bit_width != b:
                raise ConfigurationError(
                    f"{cfg.cell_paths[b]}: declares bit_width {cells[b].bit_width}, expected {b}"
                )
    if cfg.tdc_path is None:
        raise ConfigurationError("missing tdc fixture path")
    tdc_params = tdc.load_tdc_params(cfg.tdc_path)
    analog_params = ana.load_analog_params(cfg.analog_path) if cfg.analog_path else None
    if DOMAIN_ANALOG in cfg.domains and analog_params is None:
        raise ConfigurationError("missing analog fixture path")
    table = None
    if DOMAIN_DIGITAL in cfg.domains:
        if cfg.digital_path is None:
            raise ConfigurationError("missing digital table path")
        table = digital.load_digital_table(cfg.digital_path)
    envelope = None
    if DOMAIN_ANALOG in cfg.domains:
        if cfg.adc_survey_path is None:
            raise ConfigurationError("missing adc survey path")
        records = ana.read_adc_survey(cfg.adc_survey_path)
        envelope = ana.fit_adc_envelope(records, cfg.min_adc_rate)
    return FixtureSet(
        cells=cells,
        tdc_params=tdc_params,
        analog_params=analog_params,
        digital_table=table,
        envelope=envelope,
    )


@dataclass(frozen=True)
class SweepRow:
    domain: str
    n: int
    b: int
    m: int
    status: str
    energy_per_mac: Optional[float] = None
    throughput: Optional[float] = None
    area_per_mac: Optional[float] = None
    r: Optional[int] = None
    enob: Optional[float] = None
    l_osc: Optional[int] = None
    sigma_achieved: Optional[float] = None
    mu_chain: Optional[float] = None
    tdc_kind: Optional[str] = None

    @property
    def feasible(self) -> bool:
        return self.status == STATUS_OK

    def sort_key(self):
        return (self.domain, self.n, self.b)


@dataclass(frozen=True)
class SweepResult:
    rows: tuple

    def feasible(self):
        return [row for row in self.rows if row.feasible]

    def find(self, domain: str, n: int, b: int) -> SweepRow:
        for row in self.rows:
            if (row.domain, row.n, row.b) == (domain, n, b):
                return row
        raise KeyError(f"no row for ({domain}, {n}, {b})")


def _check_positive(row: SweepRow) -> SweepRow:
    for name in ("energy_per_mac", "throughput", "area_per_mac"):
        value = getattr(row, name)
        if not (value is not None and value > 0.0 and math.isfinite(value)):
            raise RuntimeError(f"non-positive {name} in feasible row {row}")
    return row


def _input_distribution(cfg: SweepConfig, b: int) -> InputDistribution:
    if cfg.px_tables and b in cfg.px_tables:
        return InputDistribution(px=np.array(cfg.px_tables[b]), pw=cfg.weight_one_density)
    return InputDistribution.default(b, pw=cfg.weight_one_density)


def _td_point(cfg: SweepConfig, fx: FixtureSet, n: int, b: int) -> SweepRow:
    spec = fx.cells[b]
    dist = _input_distribution(cfg, b)
    stats = cell_error_stats(spec, dist)
    budget = cfg.budget(b)
    try:
        r = chains.solve_redundancy(stats, n, budget, r_cap=cfg.r_cap)
    except InfeasibleError:
        return SweepRow(DOMAIN_TD, n, b, cfg.m, status="redundancy-cap-exceeded")
    # feasibility re-check straight from the moment formulas
    variance = n * (stats.evpv / r + stats.vhm / (r * r))
    sigma = math.sqrt(variance)
    if sigma > budget.sigma_max * (1.0 + 1e-12):
        raise RuntimeError(f"redundancy solver returned infeasible r={r} for n={n}, b={b}")
    trange = tdc.reduced_range(n, b, cfg.clip_bits)
    l_osc = tdc.optimal_losc(fx.tdc_params, trange.max_in, r, cfg.m)
    e_hyb = tdc.hybrid_tdc_energy(fx.tdc_params, trange.max_in, r, cfg.m, l_osc)
    e_sar = tdc.sar_tdc_energy(fx.tdc_params, trange.range_bits, cfg.m)
    if e_hyb <= e_sar:
        e_conv, kind = e_hyb, "hybrid"
        t_conv = tdc.hybrid_conversion_time(fx.tdc_params, l_osc)
    else:
        e_conv, kind = e_sar, "sar"
        t_conv = tdc.sar_conversion_time(fx.tdc_params, trange.max_in, r)
    energy = chains.td_mac_energy(chains.cell_energy(spec, r), e_conv, n)
    latency = chains.td_latency(n, r, spec, t_conv)
    mu_chain = n * stats.mu / r
    return _check_positive(
        SweepRow(
            DOMAIN_TD,
            n,
            b,
            cfg.m,
            status=STATUS_OK,
            energy_per_mac=energy,
            throughput=n * cfg.m / latency,
            area_per_mac=chains.td_cell_area(b, r, spec.cpp, spec.h_cell),
            r=r,
            l_osc=l_osc,
            sigma_achieved=sigma,
            mu_chain=mu_chain,
            tdc_kind=kind,
        )
    )


def _analog_point(cfg: SweepConfig, fx: FixtureSet, n: int, b: int) -> SweepRow:
    p = fx.analog_params
    budget = cfg.budget(b)
    try:
        r = ana.solve_analog_redundancy(p, n, budget.sigma_max, r_cap=cfg.r_cap)
    except InfeasibleError:
        return SweepRow(DOMAIN_ANALOG, n, b, cfg.m, status="redundancy-cap-exceeded")
    sigma = p.sigma_cap_rel * math.sqrt(n) / math.sqrt(r)
    if sigma > budget.sigma_max * (1.0 + 1e-12):
        raise RuntimeError(f"analog solver returned infeasible r={r} for n={n}, b={b}")
    trange = tdc.reduced_range(n, b, cfg.clip_bits)
    try:
        enob = ana.required_enob(trange.max_in, budget.sigma_max)
    except ValueError:
        return SweepRow(DOMAIN_ANALOG, n, b, cfg.m, status="snr-floor")
    e_adc = ana.adc_energy(enob, fx.envelope.k1, fx.envelope.k2)
    rate = fx.envelope.throughput_fit(enob)
    if rate <= 0.0:
        return SweepRow(DOMAIN_ANALOG, n, b, cfg.m, status="no-adc-design")
    return _check_positive(
        SweepRow(
            DOMAIN_ANALOG,
            n,
            b,
            cfg.m,
            status=STATUS_OK,
            energy_per_mac=ana.analog_mac_energy(p, e_adc, n, r),
            throughput=n * rate,
            area_per_mac=fx.envelope.area_pick / (cfg.m * n),
            r=r,
            enob=enob,
            sigma_achieved=sigma,
        )
    )


def _digital_point(cfg: SweepConfig, fx: FixtureSet, n: int, b: int) -> SweepRow:
    table = fx.digital_table
    try:
        energy = digital.digital_mac_energy(table, n, b)
        area = digital.digital_area(table, n, b)
        throughput = digital.digital_throughput(table, n, b, cfg.m)
    except OutOfRangeError:
        return SweepRow(DOMAIN_DIGITAL, n, b, cfg.m, status="outside-digital-grid")
    return _check_positive(
        SweepRow(
            DOMAIN_DIGITAL,
            n,
            b,
            cfg.m,
            status=STATUS_OK,
            energy_per_mac=energy,
            throughput=throughput,
            area_per_mac=area / n,
            r=1,
            sigma_achieved=0.0,
        )
    )


_POINT_EVAL = {
    DOMAIN_TD: _td_point,
    DOMAIN_ANALOG: _analog_point,
    DOMAIN_DIGITAL: _digital_point,
}


def run_sweep(cfg: SweepConfig, fixtures: Optional[FixtureSet] = None) -> SweepResult:
    """Evaluate the full (domain, n, b) grid; rows sorted canonically."""
    fx = fixtures if fixtures is not None else load_fixtures(cfg)
    rows = [
        _POINT_EVAL[domain](cfg, fx, n, b)
        for domain in cfg.domains
        for n in cfg.n_values
        for b in cfg.b_values
    ]
    rows.sort(key=SweepRow.sort_key)
    return SweepResult(rows=tuple(rows))


@dataclass(frozen=True)
class ScenarioRow:
    kind: str  # 'operating' (cell width evaluated at its clipped range) or 'curve'
    n: int
    m: int
    clip_bits: int
    b: Optional[int]
    max_in: int
    range_bits: int
    l_osc: int
    hybrid_energy: float
    sar_energy: float

    @property
    def chosen(self) -> str:
        return "hybrid" if self.hybrid_energy <= self.sar_energy else "sar"

    def sort_key(self):
        return (self.n, self.kind, self.b or 0, self.range_bits)


@dataclass(frozen=True)
class ScenarioResult:
    rows: tuple

    def curve_row(self, n: int, range_bits: int) -> ScenarioRow:
        for row in self.rows:
            if row.kind == "curve" and row.n == n and row.range_bits == range_bits:
                return row
        raise KeyError(f"no curve row for n={n}, range_bits={range_bits}")

    def operating_row(self, n: int, b: int) -> ScenarioRow:
        for row in self.rows:
            if row.kind == "operating" and row.n == n and row.b == b:
                return row
        raise KeyError(f"no operating row for n={n}, b={b}")


def _tdc_comparison(p: tdc.TdcParams, window: int, m: int) -> tuple:
    l_osc = tdc.optimal_losc(p, window, 1, m)
    e_hyb = tdc.hybrid_tdc_energy(p, window, 1, m, l_osc)
    e_sar = tdc.sar_tdc_energy(p, tdc.TdcRange(window).range_bits, m)
    return l_osc, e_hyb, e_sar


def resnet_scenario(cfg: SweepConfig, fixtures: Optional[FixtureSet] = None) -> ScenarioResult:
    """Converter comparison for CNN-shaped chain decompositions.

    The baseline 576-cell chain (3x3x64 kernels, m=8 parallel chains)
    is split into 288/m=16 and 144/m=32 variants whose clipped output
    ranges shrink by one and two bits.  ``operating`` rows evaluate each
    cell width at its clipped range; ``curve`` rows trace converter
    energy over the whole range axis so the hybrid/sar crossover is
    visible.  Redundancy is held at 1: this is a converter-only study.
    """
    fx = fixtures if fixtures is not None else load_fixtures(cfg)
    p = fx.tdc_params
    rows = []
    for n, m, clip in RESNET_DECOMPOSITIONS:
        for b in (1, 2, 3, 4):
            trange = tdc.reduced_range(n, b, clip)
            l_osc, e_hyb, e_sar = _tdc_comparison(p, trange.max_in, m)
            rows.append(
                ScenarioRow(
                    kind="operating",
                    n=n,
                    m=m,
                    clip_bits=clip,
                    b=b,
                    max_in=trange.max_in,
                    range_bits=trange.range_bits,
                    l_osc=l_osc,
                    hybrid_energy=e_hyb,
                    sar_energy=e_sar,
                )
            )
        top_bits = tdc.reduced_range(n, 4, clip).range_bits
        for bits in range(1, top_bits + 1):
            window = 2**bits - 1
            l_osc, e_hyb, e_sar = _tdc_comparison(p, window, m)
            rows.append(
                ScenarioRow(
                    kind="curve",
                    n=n,
                    m=m,
                    clip_bits=clip,
                    b=None,
                    max_in=window,
                    range_bits=bits,
                    l_osc=l_osc,
                    hybrid_energy=e_hyb,
                    sar_energy=e_sar,
                )
            )
    rows.sort(key=ScenarioRow.sort_key)
    return ScenarioResult(rows=tuple(rows))
