"""Deterministic CSV and SVG emission of sweep results.

Floats are written with ``repr`` (shortest round-trip form, up to 17
significant digits) so a re-ingested and re-emitted file is
byte-identical to its source.  The SVG emitter is hand-rolled: no
timestamps, ids, or library version strings, so identical inputs yield
identical bytes.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .errors import IngestionError, VmmDseError
from .explore import ScenarioResult, SweepResult, SweepRow


class EmptySelectionError(VmmDseError):
    """The plot/emission selection matched no feasible rows."""


SWEEP_HEADER = [
    "domain",
    "n",
    "b",
    "m",
    "energy_per_mac_joules",
    "throughput_mac_per_s",
    "area_per_mac_m2",
    "r",
    "enob",
    "l_osc",
    "sigma_achieved",
    "mu_chain",
    "tdc",
    "status",
]

SCENARIO_HEADER = [
    "kind",
    "n",
    "m",
    "clip_bits",
    "b",
    "max_in",
    "range_bits",
    "l_osc",
    "hybrid_energy_joules",
    "sar_energy_joules",
    "chosen",
]


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_csv(result: SweepResult, path) -> None:
    """Write a sweep result with fixed column and (domain, n, b) row order."""
    if not result.rows:
        raise EmptySelectionError("refusing to write an empty sweep result")
    rows = sorted(result.rows, key=SweepRow.sort_key)
    with Path(path).open("w", newline="") as fh:
        fh.write(",".join(SWEEP_HEADER) + "\n")
        for row in rows:
            fh.write(
                ",".join(
                    _cell(v)
                    for v in (
                        row.domain,
                        row.n,
                        row.b,
                        row.m,
                        row.energy_per_mac,
                        row.throughput,
                        row.area_per_mac,
                        row.r,
                        row.enob,
                        row.l_osc,
                        row.sigma_achieved,
                        row.mu_chain,
                        row.tdc_kind,
                        row.status,
                    )
                )
                + "\n"
            )


def read_sweep_csv(path) -> SweepResult:
    """Ingest a sweep CSV emitted by :func:`emit_csv`."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != SWEEP_HEADER:
            raise IngestionError(f"{path}: unexpected sweep header {reader.fieldnames}")

        def _f(row, key):
            return float(row[key]) if row[key] != "" else None

        def _i(row, key):
            return int(row[key]) if row[key] != "" else None

        rows = []
        for row in reader:
            rows.append(
                SweepRow(
                    domain=row["domain"],
                    n=int(row["n"]),
                    b=int(row["b"]),
                    m=int(row["m"]),
                    status=row["status"],
                    energy_per_mac=_f(row, "energy_per_mac_joules"),
                    throughput=_f(row, "throughput_mac_per_s"),
                    area_per_mac=_f(row, "area_per_mac_m2"),
                    r=_i(row, "r"),
                    enob=_f(row, "enob"),
                    l_osc=_i(row, "l_osc"),
                    sigma_achieved=_f(row, "sigma_achieved"),
                    mu_chain=_f(row, "mu_chain"),
                    tdc_kind=row["tdc"] or None,
                )
            )
    return SweepResult(rows=tuple(rows))


def emit_scenario_csv(result: ScenarioResult, path) -> None:
    if not result.rows:
        raise EmptySelectionError("refusing to write an empty scenario result")
    with Path(path).open("w", newline="") as fh:
        fh.write(",".join(SCENARIO_HEADER) + "\n")
        for row in result.rows:
            fh.write(
                ",".join(
                    _cell(v)
                    for v in (
                        row.kind,
                        row.n,
                        row.m,
                        row.clip_bits,
                        row.b,
                        row.max_in,
                        row.range_bits,
                        row.l_osc,
                        row.hybrid_energy,
                        row.sar_energy,
                        row.chosen,
                    )
                )
                + "\n"
            )


# ---------------------------------------------------------------------------
# SVG plotting

PLOT_KINDS = {
    "energy": ("energy_per_mac", "energy per MAC [J]"),
    "throughput": ("throughput", "throughput [MAC/s]"),
    "area": ("area_per_mac", "area per MAC [m2]"),
}

_DOMAIN_COLORS = {"td": "#1f77b4", "analog": "#d62728", "digital": "#2ca02c"}
_B_DASHES = {1: "", 2: "7,3", 3: "2,2", 4: "7,2,2,2"}
_FALLBACK_COLOR = "#7f7f7f"

_W, _H = 880, 560
_X0, _X1 = 90.0, 620.0
_Y0, _Y1 = 40.0, 500.0


def _log10(value: float) -> float:
    import math

    return math.log10(value)


def emit_plot(result: SweepResult, kind: str, path) -> None:
    """Render one metric as a self-contained SVG (log-log axes).

    One polyline per (domain, b) pair present among the feasible rows.
    """
    if kind not in PLOT_KINDS:
        raise ValueError(f"unknown plot kind {kind!r}; pick one of {sorted(PLOT_KINDS)}")
    attr, label = PLOT_KINDS[kind]
    rows = [r for r in result.feasible() if getattr(r, attr) is not None]
    if not rows:
        raise EmptySelectionError(f"no feasible rows carry a {kind} value")

    series = {}
    for row in rows:
        series.setdefault((row.domain, row.b), []).append((row.n, getattr(row, attr)))
    for pts in series.values():
        pts.sort()

    xs = sorted({n for n, _ in sum(series.values(), [])})
    values = [v for pts in series.values() for _, v in pts]
    lx0, lx1 = _log10(min(xs)), _log10(max(xs))
    if lx1 == lx0:
        lx0, lx1 = lx0 - 0.5, lx1 + 0.5
    import math

    ly0 = math.floor(_log10(min(values)))
    ly1 = math.ceil(_log10(max(values)))
    if ly1 == ly0:
        ly1 += 1

    def px(n):
        return _X0 + (_log10(n) - lx0) / (lx1 - lx0) * (_X1 - _X0)

    def py(v):
        return _Y1 - (_log10(v) - ly0) / (ly1 - ly0) * (_Y1 - _Y0)

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="13">'
    )
    out.append(f'<rect width="{_W}" height="{_H}" fill="white"/>')
    out.append(
        f'<text x="{(_X0 + _X1) / 2:.2f}" y="22" text-anchor="middle" font-size="15">'
        f"{label} vs array dimension N</text>"
    )
    # frame
    out.append(
        f'<rect x="{_X0:.2f}" y="{_Y0:.2f}" width="{_X1 - _X0:.2f}" height="{_Y1 - _Y0:.2f}" '
        f'fill="none" stroke="black" stroke-width="1"/>'
    )
    # y decades
    for dec in range(ly0, ly1 + 1):
        y = py(10.0**dec)
        out.append(
            f'<line x1="{_X0:.2f}" y1="{y:.2f}" x2="{_X1:.2f}" y2="{y:.2f}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_X0 - 8:.2f}" y="{y + 4:.2f}" text-anchor="end">1e{dec}</text>'
        )
    # x ticks at the swept points
    for n in xs:
        x = px(n)
        out.append(
            f'<line x1="{x:.2f}" y1="{_Y1:.2f}" x2="{x:.2f}" y2="{_Y1 + 5:.2f}" '
            f'stroke="black" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{x:.2f}" y="{_Y1 + 18:.2f}" text-anchor="middle">{n}</text>'
        )
    out.append(
        f'<text x="{(_X0 + _X1) / 2:.2f}" y="{_Y1 + 40:.2f}" text-anchor="middle">'
        "array dimension N</text>"
    )
    # curves and legend
    legend_y = _Y0 + 10
    for domain, b in sorted(series):
        pts = series[(domain, b)]
        color = _DOMAIN_COLORS.get(domain, _FALLBACK_COLOR)
        dash = _B_DASHES.get(b, "")
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        coords = " ".join(f"{px(n):.2f},{py(v):.2f}" for n, v in pts)
        out.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="2"{dash_attr} '
            f'points="{coords}"/>'
        )
        out.append(
            f'<line x1="{_X1 + 18:.2f}" y1="{legend_y:.2f}" x2="{_X1 + 52:.2f}" '
            f'y2="{legend_y:.2f}" stroke="{color}" stroke-width="2"{dash_attr}/>'
        )
        out.append(
            f'<text x="{_X1 + 58:.2f}" y="{legend_y + 4:.2f}">{domain} b={b}</text>'
        )
        legend_y += 20
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n")
