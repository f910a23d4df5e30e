#!/usr/bin/env python3
"""Regenerate the packaged synthetic characterization fixtures.

All values are hand-designed, physically plausible 22 nm-class numbers:
cell nonlinearity bows peak around +/-0.11 delay steps for the 4-bit
cell, mismatch grows with the number of switched delay stages, and the
converter survey lies on (and scatters above) the two-constant energy
envelope with k1 = 0.66 pJ and k2 = 0.241 aJ.  Run from the repository
root:

    python3 tools/gen_fixtures.py
"""

import json
import math
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "vmmdse" / "fixtures"

CPP = 1.04e-7       # contacted poly pitch, m
H_CELL = 5.5e-7     # standard cell height, m
D_STEP = 2.0e-11    # unit delay step, s

K1 = 0.66e-12
K2 = 0.241e-18


def cell_fixture(b):
    nx = 2 ** b
    inl = []
    sigma = []
    for x in range(nx):
        frac = x / (nx - 1)
        inl_bypass = round(-0.008 - 0.006 * frac, 6)
        if b == 1:
            inl_active = -0.020 if x == 0 else 0.090
        else:
            # nonlinearity bow over the input range, peaking near 0.11 steps
            inl_active = round(-0.11 * math.sin(2.0 * math.pi * x / nx), 6)
            if x == 0:
                inl_active = -0.014
        sig_bypass = round(0.020 + 0.003 * frac, 6)
        sig_active = round(0.020 + 0.013 * math.sqrt(x) if x else 0.024, 6)
        inl.append([inl_bypass, inl_active])
        sigma.append([sig_bypass, sig_active])
    return {
        "bit_width": b,
        "inl": inl,
        "sigma": sigma,
        "e_op_joules": round(0.6e-15 + 0.5e-15 * b + 0.35e-15 * (2 ** b - 1), 22),
        "e_op_per_r_joules": round(0.25e-15 + 0.25e-15 * (2 ** b - 1), 22),
        "d_step_seconds": D_STEP,
        "d_max_seconds": (2 ** b) * D_STEP,
        "cpp_meters": CPP,
        "h_cell_meters": H_CELL,
    }


def adc_survey_rows():
    def envelope(e):
        return K1 * e + K2 * 4.0 ** e

    def rate_env(e):
        return 4.0e9 * 2.0 ** (-e / 1.6)

    def area_env(e):
        return 1.2e-9 * 2.0 ** ((e - 4.0) / 1.5)

    rows = []
    e = 4.0
    while e <= 17.0 + 1e-9:
        rows.append((e, envelope(e), rate_env(e), area_env(e)))
        e += 0.5
    # scatter above the envelope: faster and hungrier, slightly smaller
    mults = [1.4, 2.2, 2.9]
    e = 4.25
    i = 0
    while e <= 16.75 + 1e-9:
        rows.append((e, envelope(e) * mults[i % 3], rate_env(e) * 1.8, area_env(e) * 0.8))
        i += 1
        e += 0.5
    # slow outliers that the 1 MHz filter must drop
    rows.append((18.0, envelope(18.0) * 0.8, 5.0e5, area_env(18.0)))
    rows.append((12.0, envelope(12.0) * 0.5, 8.0e5, area_env(12.0) * 0.5))
    return rows


def digital_rows():
    rows = []
    for b in (1, 2, 3, 4):
        for p in range(4, 13):  # n = 16 .. 4096
            n = 2 ** p
            energy = (0.9e-15 + 0.55e-15 * b) * (n / 16.0) ** 0.07
            area = n * (0.9e-12 + 0.75e-12 * b)
            rows.append((n, b, energy, area, 1.0e9))
    return rows


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for b in (1, 2, 3, 4):
        path = OUT / f"cell_b{b}.json"
        path.write_text(json.dumps(cell_fixture(b), indent=2) + "\n")
        print("wrote", path)

    (OUT / "tdc_params.json").write_text(
        json.dumps(
            {
                "e_td_and_joules": 1.0e-15,
                "e_sample_joules": 5.0e-15,
                "e_cnt_joules": 1.2e-14,
                "e_cnt_load_joules": 1.0e-15,
                "t_unit_seconds": D_STEP,
            },
            indent=2,
        )
        + "\n"
    )
    print("wrote", OUT / "tdc_params.json")

    (OUT / "analog_params.json").write_text(
        json.dumps(
            {
                "e_cap_joules": 1.0e-16,
                "e_logic_joules": 0.0,
                "sigma_cap_rel": 0.025,
                "m_shared": 8,
            },
            indent=2,
        )
        + "\n"
    )
    print("wrote", OUT / "analog_params.json")

    with (OUT / "adc_survey.csv").open("w") as fh:
        fh.write("enob,energy_per_conv_joules,sample_rate_hz,area_m2\n")
        for enob, energy, rate, area in adc_survey_rows():
            fh.write(f"{enob!r},{energy!r},{rate!r},{area!r}\n")
    print("wrote", OUT / "adc_survey.csv")

    with (OUT / "digital_table.csv").open("w") as fh:
        fh.write("n,b,energy_per_mac_joules,area_m2,f_clk_hz\n")
        for n, b, energy, area, f_clk in digital_rows():
            fh.write(f"{n},{b},{energy!r},{area!r},{f_clk!r}\n")
    print("wrote", OUT / "digital_table.csv")

    (OUT / "default_config.json").write_text(
        json.dumps(
            {
                "domains": ["td", "analog", "digital"],
                "n_values": [16, 32, 64, 128, 256, 512, 1024, 2048, 4096],
                "b_values": [1, 2, 3, 4],
                "m": 8,
                "mode": "relaxed",
                "sigma_array_max": {"1": 0.58, "2": 0.98, "3": 1.55, "4": 2.85},
                "clip_bits": 2,
                "weight_one_density": 0.3,
                "r_cap": 1024,
                "min_adc_sample_rate_hz": 1.0e6,
                "fixtures": {
                    "cells": {
                        "1": "builtin:cell_b1.json",
                        "2": "builtin:cell_b2.json",
                        "3": "builtin:cell_b3.json",
                        "4": "builtin:cell_b4.json",
                    },
                    "tdc": "builtin:tdc_params.json",
                    "analog": "builtin:analog_params.json",
                    "digital": "builtin:digital_table.csv",
                    "adc_survey": "builtin:adc_survey.csv",
                },
            },
            indent=2,
        )
        + "\n"
    )
    print("wrote", OUT / "default_config.json")


if __name__ == "__main__":
    main()
