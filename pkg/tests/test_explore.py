import dataclasses
import json
import math

import pytest

from vmmdse import explore
from vmmdse.digital import digital_mac_energy
from vmmdse.errors import ConfigurationError
from vmmdse.fixtures import fixture_path


@pytest.fixture(scope="module")
def relaxed_result(default_config, fixtures):
    return explore.run_sweep(default_config, fixtures)


@pytest.fixture(scope="module")
def precise_result(default_config, fixtures):
    cfg = dataclasses.replace(default_config, mode="precise", sigma_table=None)
    return explore.run_sweep(cfg, fixtures)


class TestConfig:
    def test_default_config_loads(self, default_config):
        assert default_config.domains == ("td", "analog", "digital")
        assert default_config.n_values[0] == 16 and default_config.n_values[-1] == 4096
        assert default_config.sigma_table == {1: 0.58, 2: 0.98, 3: 1.55, 4: 2.85}

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            explore.load_config(tmp_path / "nope.json")

    def test_malformed_config(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text('{"domains": ["td"]}')
        with pytest.raises(ConfigurationError):
            explore.load_config(path)

    def test_unknown_domain(self):
        with pytest.raises(ConfigurationError):
            explore.SweepConfig(domains=("quantum",))

    def test_relaxed_requires_sigma_table(self):
        with pytest.raises(ConfigurationError):
            explore.SweepConfig(mode="relaxed", sigma_table=None)

    def test_relative_fixture_paths(self, tmp_path):
        doc = json.loads(fixture_path("default_config.json").read_text())
        doc["fixtures"]["tdc"] = "my_tdc.json"
        (tmp_path / "my_tdc.json").write_text(fixture_path("tdc_params.json").read_text())
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(doc))
        cfg = explore.load_config(cfg_path)
        assert cfg.tdc_path == tmp_path / "my_tdc.json"
        explore.load_fixtures(cfg)  # resolves and validates

    def test_missing_cell_fixture_for_bit_width(self, default_config):
        cfg = dataclasses.replace(
            default_config, b_values=(1, 5), mode="precise", sigma_table=None
        )
        with pytest.raises(ConfigurationError):
            explore.load_fixtures(cfg)


class TestSweep:
    def test_grid_is_complete(self, default_config, relaxed_result):
        expected = (
            len(default_config.domains)
            * len(default_config.n_values)
            * len(default_config.b_values)
        )
        assert len(relaxed_result.rows) == expected

    def test_digital_row_equals_table(self, fixtures, relaxed_result):
        row = relaxed_result.find("digital", 64, 2)
        assert row.energy_per_mac == digital_mac_energy(fixtures.digital_table, 64, 2)
        assert row.sigma_achieved == 0.0
        assert row.r == 1

    def test_order_independence(self, default_config, fixtures, relaxed_result):
        shuffled = dataclasses.replace(
            default_config,
            domains=("digital", "td", "analog"),
            n_values=tuple(reversed(default_config.n_values)),
            b_values=(4, 2, 3, 1),
        )
        assert explore.run_sweep(shuffled, fixtures).rows == relaxed_result.rows

    def test_relaxed_redundancy_never_exceeds_precise(self, relaxed_result, precise_result):
        for row in relaxed_result.rows:
            if row.domain != "td":
                continue
            precise_row = precise_result.find("td", row.n, row.b)
            if precise_row.feasible and row.feasible:
                assert row.r <= precise_row.r

    def test_tightening_budget_raises_td_energy(self, relaxed_result, precise_result):
        row_rel = relaxed_result.find("td", 4096, 1)
        row_pre = precise_result.find("td", 4096, 1)
        assert row_pre.r > row_rel.r
        assert row_pre.energy_per_mac > row_rel.energy_per_mac

    def test_every_ok_row_meets_budget(self, default_config, relaxed_result):
        for row in relaxed_result.feasible():
            if row.domain == "digital":
                assert row.sigma_achieved == 0.0
            else:
                assert row.sigma_achieved <= default_config.sigma_table[row.b] * (1 + 1e-12)

    def test_td_rows_report_mean_for_transparency(self, relaxed_result):
        row = relaxed_result.find("td", 512, 4)
        assert row.mu_chain is not None
        assert math.isfinite(row.mu_chain)

    def test_infeasible_points_flagged_not_dropped(self, default_config, fixtures):
        cfg = dataclasses.replace(
            default_config,
            domains=("td",),
            mode="precise",
            sigma_table=None,
            n_values=(4096,),
            b_values=(4,),
            r_cap=1,
        )
        result = explore.run_sweep(cfg, fixtures)
        assert len(result.rows) == 1
        row = result.rows[0]
        assert not row.feasible
        assert row.status == "redundancy-cap-exceeded"
        assert row.energy_per_mac is None

    def test_all_quantities_positive(self, relaxed_result):
        for row in relaxed_result.feasible():
            assert row.energy_per_mac > 0.0
            assert row.throughput > 0.0
            assert row.area_per_mac > 0.0

    def test_m_scales_digital_throughput(self, default_config, fixtures):
        cfg16 = dataclasses.replace(default_config, m=16, domains=("digital",))
        cfg8 = dataclasses.replace(default_config, m=8, domains=("digital",))
        r16 = explore.run_sweep(cfg16, fixtures).find("digital", 64, 1)
        r8 = explore.run_sweep(cfg8, fixtures).find("digital", 64, 1)
        assert r16.throughput == pytest.approx(2 * r8.throughput, rel=1e-12)


class TestScenario:
    def test_structure(self, default_config, fixtures):
        scn = explore.resnet_scenario(default_config, fixtures)
        operating = [row for row in scn.rows if row.kind == "operating"]
        assert len(operating) == 12  # 3 decompositions x 4 bit widths
        for n, m, clip in explore.RESNET_DECOMPOSITIONS:
            for b in (1, 2, 3, 4):
                row = scn.operating_row(n, b)
                assert row.m == m and row.clip_bits == clip
                assert row.hybrid_energy > 0.0 and row.sar_energy > 0.0

    def test_curve_covers_range_axis(self, default_config, fixtures):
        scn = explore.resnet_scenario(default_config, fixtures)
        top = scn.operating_row(576, 4).range_bits
        for bits in range(1, top + 1):
            row = scn.curve_row(576, bits)
            assert row.max_in == 2**bits - 1

    def test_chosen_flag_consistent(self, default_config, fixtures):
        scn = explore.resnet_scenario(default_config, fixtures)
        for row in scn.rows:
            if row.hybrid_energy <= row.sar_energy:
                assert row.chosen == "hybrid"
            else:
                assert row.chosen == "sar"

    def test_four_bit_operating_point_prefers_hybrid(self, default_config, fixtures):
        scn = explore.resnet_scenario(default_config, fixtures)
        row = scn.operating_row(576, 4)
        assert row.hybrid_energy < row.sar_energy


class TestInputOverrides:
    def test_px_override_changes_td_sizing(self, default_config, fixtures):
        # an all-full-scale activation pmf inflates the active-path share
        cfg = dataclasses.replace(
            default_config,
            domains=("td",),
            n_values=(4096,),
            b_values=(4,),
            px_tables={4: tuple([0.0] * 15 + [1.0])},
        )
        skewed = explore.run_sweep(cfg, fixtures).find("td", 4096, 4)
        base = explore.run_sweep(
            dataclasses.replace(cfg, px_tables=None), fixtures
        ).find("td", 4096, 4)
        assert skewed.sigma_achieved != base.sigma_achieved

    def test_pw_override_changes_moments(self, default_config, fixtures):
        cfg = dataclasses.replace(
            default_config,
            domains=("td",),
            n_values=(2048,),
            b_values=(1,),
            weight_one_density=0.9,
        )
        dense = explore.run_sweep(cfg, fixtures).find("td", 2048, 1)
        sparse = explore.run_sweep(
            dataclasses.replace(cfg, weight_one_density=0.1), fixtures
        ).find("td", 2048, 1)
        assert dense.sigma_achieved != sparse.sigma_achieved
