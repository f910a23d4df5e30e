import math

import pytest

from vmmdse.digital import (
    digital_area,
    digital_clock,
    digital_mac_energy,
    digital_throughput,
    ingest_digital_table,
    load_digital_table,
)
from vmmdse.errors import IngestionError, OutOfRangeError


def rows(*tuples):
    return [
        {
            "n": n,
            "b": b,
            "energy_per_mac_joules": e,
            "area_m2": a,
            "f_clk_hz": f,
        }
        for n, b, e, a, f in tuples
    ]


BASIC = rows(
    (64, 1, 2e-15, 1e-10, 1e9),
    (256, 1, 4e-15, 4e-10, 1e9),
    (1024, 1, 9e-15, 2e-9, 8e8),
)


class TestIngestion:
    def test_valid_table(self):
        t = ingest_digital_table(BASIC)
        assert t.bit_widths() == [1]
        assert t.n_range(1) == (64, 1024)

    def test_duplicate_rejected(self):
        with pytest.raises(IngestionError):
            ingest_digital_table(BASIC + rows((64, 1, 3e-15, 1e-10, 1e9)))

    def test_empty_rejected(self):
        with pytest.raises(IngestionError):
            ingest_digital_table([])

    def test_nonpositive_rejected(self):
        with pytest.raises(IngestionError):
            ingest_digital_table(rows((64, 1, -2e-15, 1e-10, 1e9), (256, 1, 4e-15, 4e-10, 1e9)))

    def test_single_point_per_b_rejected(self):
        with pytest.raises(IngestionError):
            ingest_digital_table(rows((64, 1, 2e-15, 1e-10, 1e9)))

    def test_order_independent(self):
        a = ingest_digital_table(BASIC)
        b = ingest_digital_table(BASIC[::-1])
        for n in (64, 100, 1024):
            assert digital_mac_energy(a, n, 1) == digital_mac_energy(b, n, 1)

    def test_csv_header_checked(self, tmp_path):
        path = tmp_path / "table.csv"
        path.write_text("n,b,energy,area,f\n64,1,2e-15,1e-10,1e9\n")
        with pytest.raises(IngestionError):
            load_digital_table(path)


class TestLookup:
    def test_grid_point_exact(self):
        t = ingest_digital_table(BASIC)
        assert digital_mac_energy(t, 64, 1) == 2e-15
        assert digital_mac_energy(t, 256, 1) == 4e-15
        assert digital_area(t, 1024, 1) == 2e-9
        assert digital_clock(t, 1024, 1) == 8e8

    def test_loglog_interpolation(self):
        # 64 -> 2 fJ and 256 -> 4 fJ puts 128 at 2*sqrt(2) fJ
        t = ingest_digital_table(BASIC)
        assert digital_mac_energy(t, 128, 1) == pytest.approx(
            2e-15 * math.sqrt(2.0), rel=1e-12
        )

    def test_no_extrapolation(self):
        t = ingest_digital_table(BASIC)
        with pytest.raises(OutOfRangeError):
            digital_mac_energy(t, 10_000, 1)
        with pytest.raises(OutOfRangeError):
            digital_mac_energy(t, 32, 1)

    def test_unknown_bit_width(self):
        t = ingest_digital_table(BASIC)
        with pytest.raises(OutOfRangeError):
            digital_mac_energy(t, 64, 3)

    def test_monotone_between_monotone_grid_points(self):
        t = ingest_digital_table(BASIC)
        samples = [digital_mac_energy(t, n, 1) for n in range(64, 1025, 32)]
        assert all(b >= a for a, b in zip(samples, samples[1:]))


class TestThroughput:
    def test_single_cycle_vmm(self):
        t = ingest_digital_table(BASIC)
        assert digital_throughput(t, 64, 1, 1) == pytest.approx(6.4e10, rel=1e-12)

    def test_linear_in_m(self):
        t = ingest_digital_table(BASIC)
        assert digital_throughput(t, 64, 1, 8) == pytest.approx(
            8 * digital_throughput(t, 64, 1, 1), rel=1e-12
        )

    def test_linear_in_n_at_fixed_clock(self):
        t = ingest_digital_table(BASIC)
        assert digital_throughput(t, 256, 1, 1) == pytest.approx(
            4 * digital_throughput(t, 64, 1, 1), rel=1e-12
        )

    def test_shipped_table_loads(self, fixtures):
        t = fixtures.digital_table
        assert t.bit_widths() == [1, 2, 3, 4]
        assert t.n_range(1) == (16, 4096)
        assert digital_throughput(t, 16, 1, 1) == pytest.approx(1.6e10, rel=1e-12)
