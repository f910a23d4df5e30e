import json
import subprocess
import sys

import pytest

from vmmdse.cli import EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_OK, _parse_n_values, main
from vmmdse.errors import VmmDseError
from vmmdse.fixtures import fixture_path


class TestNSpecParser:
    def test_log2_range(self):
        assert _parse_n_values("16:64:log2") == (16, 32, 64)

    def test_comma_list(self):
        assert _parse_n_values("64,576,1000") == (64, 576, 1000)

    def test_bad_spec(self):
        with pytest.raises(VmmDseError):
            _parse_n_values("16:64:linear")


class TestExplore:
    def test_default_run(self, tmp_path, capsys):
        out = tmp_path / "results.csv"
        plot = tmp_path / "energy.svg"
        code = main(
            [
                "explore",
                "--n",
                "16:256:log2",
                "--out",
                str(out),
                "--plot",
                str(plot),
            ]
        )
        assert code == EXIT_OK
        assert out.exists() and plot.exists()
        stdout = capsys.readouterr().out
        assert "grid points feasible" in stdout

    def test_override_flags(self, tmp_path):
        out = tmp_path / "res.csv"
        code = main(
            [
                "explore",
                "--domains",
                "digital",
                "--n",
                "64,128",
                "--bits",
                "1,2",
                "--m",
                "4",
                "--mode",
                "precise",
                "--out",
                str(out),
            ]
        )
        assert code == EXIT_OK
        lines = out.read_text().splitlines()
        assert len(lines) == 1 + 4  # header + 2 n * 2 b digital rows

    def test_bad_config_exits_1(self, tmp_path):
        bad = tmp_path / "cfg.json"
        bad.write_text("{}")
        assert main(["explore", "--config", str(bad)]) == EXIT_CONFIG

    def test_infeasible_only_exits_2(self, tmp_path):
        doc = json.loads(fixture_path("default_config.json").read_text())
        doc.update(
            {
                "domains": ["td"],
                "mode": "precise",
                "n_values": [4096],
                "b_values": [4],
                "r_cap": 1,
            }
        )
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps(doc))
        out = tmp_path / "res.csv"
        assert main(["explore", "--config", str(cfg), "--out", str(out)]) == EXIT_INFEASIBLE
        assert out.exists()  # flagged rows still written


class TestScenario:
    def test_resnet(self, tmp_path, capsys):
        out = tmp_path / "scenario.csv"
        assert main(["scenario", "resnet", "--out", str(out)]) == EXIT_OK
        assert out.exists()
        stdout = capsys.readouterr().out
        assert "n=576" in stdout


class TestFitAdc:
    def test_fit_and_save(self, tmp_path, capsys):
        out = tmp_path / "envelope.json"
        code = main(
            [
                "fit-adc",
                "--survey",
                str(fixture_path("adc_survey.csv")),
                "--min-rate",
                "1e6",
                "--out",
                str(out),
            ]
        )
        assert code == EXIT_OK
        doc = json.loads(out.read_text())
        assert doc["k1_joules_per_bit"] == pytest.approx(0.66e-12, rel=1e-6)
        assert doc["k2_joules"] == pytest.approx(0.241e-18, rel=1e-6)

    def test_missing_survey_exits_1(self, tmp_path):
        assert (
            main(["fit-adc", "--survey", str(tmp_path / "nope.csv")]) == EXIT_CONFIG
        )


class TestOracle:
    def test_run_and_dump(self, tmp_path, capsys):
        dump = tmp_path / "samples.csv"
        code = main(
            [
                "oracle",
                "--trials",
                "2000",
                "--seed",
                "7",
                "--n",
                "64",
                "--r",
                "2",
                "--bits",
                "4",
                "--dump",
                str(dump),
            ]
        )
        assert code == EXIT_OK
        stdout = capsys.readouterr().out
        assert "empirical sigma" in stdout
        lines = dump.read_text().splitlines()
        assert lines[0] == "trial,error_delay_steps"
        assert len(lines) == 2001

    def test_dump_is_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            assert (
                main(
                    ["oracle", "--trials", "500", "--seed", "11", "--n", "16", "--r", "1", "--dump", str(path)]
                )
                == EXIT_OK
            )
        assert a.read_bytes() == b.read_bytes()


def test_console_entry_point_smoke():
    out = subprocess.run(
        [sys.executable, "-m", "vmmdse.cli", "explore", "--domains", "digital", "--n", "64"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0, out.stderr
    assert "feasible" in out.stdout
