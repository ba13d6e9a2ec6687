import json

import pytest

from biphoton.cli import EXIT_ACCEPTANCE, EXIT_CONFIG, EXIT_OK, main
from biphoton.reporting import bundled_scenario_path


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestTheta:
    def test_quadrature(self, capsys):
        code, out, _ = run(["theta", "--ratio", "1.0"], capsys)
        assert code == EXIT_OK
        assert float(out.split()[2]) == pytest.approx(23.402, rel=1e-3)

    def test_mc_seed_default_42(self, capsys):
        code1, out1, _ = run(["theta", "--ratio", "2", "--mc", "20000"], capsys)
        code2, out2, _ = run(["theta", "--ratio", "2", "--mc", "20000",
                              "--seed", "42"], capsys)
        assert code1 == code2 == EXIT_OK
        assert out1 == out2

    def test_bad_ratio_is_config_error(self, capsys):
        code, _, err = run(["theta", "--ratio", "0.3"], capsys)
        assert code == EXIT_CONFIG
        assert "configuration error" in err


class TestThetaCurve:
    def test_writes_csv(self, tmp_path, capsys):
        out = tmp_path / "curve.csv"
        code, _, _ = run(["theta-curve", "--points", "5", "--rel-tol", "1e-6",
                          "--out", str(out)], capsys)
        assert code == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == "ratio,theta,method,stderr"
        assert len(lines) == 6

    def test_outdir_env(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("BIPHOTON_OUTDIR", str(tmp_path))
        code, _, _ = run(["theta-curve", "--points", "3", "--rel-tol", "1e-6",
                          "--out", "c.csv"], capsys)
        assert code == EXIT_OK
        assert (tmp_path / "c.csv").exists()


class TestSpectrumAndCorrelation:
    def test_spectrum_csv(self, tmp_path, capsys):
        out = tmp_path / "s.csv"
        code, _, _ = run(["spectrum", "--n-omega", "600", "--out", str(out)],
                         capsys)
        assert code == EXIT_OK
        assert out.read_text().splitlines()[0] == "omega_ev,amplitude,amplitude_sq"

    def test_correlation_prints_width(self, tmp_path, capsys):
        out = tmp_path / "c.csv"
        code, stdout, _ = run(["correlation", "--out", str(out)], capsys)
        assert code == EXIT_OK
        assert "correlation time" in stdout
        assert out.read_text().splitlines()[0] == "t_au,t_s,re,im,abs"

    def test_unknown_species_is_config_error(self, capsys):
        code, _, err = run(["lifetime", "--species", "Unobtainium"], capsys)
        assert code == EXIT_CONFIG
        assert "configuration error" in err

    def test_lifetime(self, capsys):
        code, out, _ = run(["lifetime"], capsys)
        assert code == EXIT_OK
        assert "lifetime" in out


class TestRates:
    @pytest.mark.parametrize("scheme", ["narrowband-4photon", "broadband-4photon",
                                        "sequential", "scrap", "etpa"])
    def test_all_schemes(self, scheme, capsys):
        code, out, _ = run(["rates", scheme], capsys)
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["scheme"] == scheme
        assert "final_rate" in report

    def test_out_file(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        code, _, _ = run(["rates", "etpa", "--out", str(out)], capsys)
        assert code == EXIT_OK
        assert json.loads(out.read_text())["scheme"] == "etpa"


class TestRepro:
    def test_default_exit_zero(self, capsys):
        code, out, _ = run(["repro"], capsys)
        assert code == EXIT_OK
        assert "23/25 rows passed" in out

    def test_strict_exit_four(self, capsys):
        code, _, _ = run(["repro", "--strict"], capsys)
        assert code == EXIT_ACCEPTANCE

    def test_bad_config_schema(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"bogus": 1}')
        code, _, err = run(["repro", "--config", str(bad)], capsys)
        assert code == EXIT_CONFIG
        assert "unknown key" in err


class TestRun:
    def test_bundled_scenario(self, tmp_path, capsys):
        code, out, _ = run(["run", str(bundled_scenario_path()),
                            "--out-dir", str(tmp_path)], capsys)
        assert code == EXIT_OK
        assert (tmp_path / "repro_table.json").exists()
        assert (tmp_path / "fig_s1.csv").exists()
        assert out.count("wrote") == 8

    def test_missing_scenario(self, capsys):
        code, _, err = run(["run", "does-not-exist.json"], capsys)
        assert code == EXIT_CONFIG
        assert "configuration error" in err
