import json

import numpy as np
import pytest

from qumode_probe.cli import main


def write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def run(tmp_path, command, config, extra=None, out_name="out.txt"):
    out = tmp_path / out_name
    argv = [command, "--config", write_config(tmp_path, config, f"{out_name}.json"),
            "--out", str(out)]
    if extra:
        argv.extend(extra)
    code = main(argv)
    text = out.read_text() if out.exists() else ""
    return code, text


def parse_rows(text):
    lines = [l for l in text.splitlines() if l and not l.startswith("#")]
    header = lines[0].replace(",", " ").split()
    rows = [dict(zip(header, map(float, l.replace(",", " ").split())))
            for l in lines[1:]]
    return header, rows


QUBIT = {"system": {"diagonal": [0.0, 1.0]}, "state": {"thermal_beta": 1.0}}


class TestSpectrumCommand:
    def test_thermal_qubit(self, tmp_path):
        code, text = run(tmp_path, "spectrum", QUBIT)
        assert code == 0
        _, rows = parse_rows(text)
        assert [r["E"] for r in rows] == [0.0, 1.0]
        z = 1 + np.exp(-1.0)
        assert rows[0]["P"] == pytest.approx(1 / z)
        assert rows[1]["P"] == pytest.approx(np.exp(-1.0) / z)

    def test_model_system(self, tmp_path):
        config = {"system": {"model": "rabi", "n_sites": 2},
                  "state": {"maximally_mixed": True}}
        code, text = run(tmp_path, "spectrum", config)
        assert code == 0
        _, rows = parse_rows(text)
        assert [r["E"] for r in rows] == pytest.approx([-2.0, 0.0, 2.0], abs=1e-12)
        assert [r["g"] for r in rows] == [1.0, 2.0, 1.0]

    def test_csv_format(self, tmp_path):
        code, text = run(tmp_path, "spectrum", QUBIT, extra=["--format", "csv"])
        assert code == 0
        assert "E,P,g" in text


class TestSampleAndReconstruct:
    def config(self):
        return {
            "system": {"diagonal": [0.0, 1.0]},
            "state": {"thermal_beta": 1.0},
            "probe": {"p0": 0.0, "g": 1.0, "tau": 1.0,
                      "mode": {"kind": "squeezed", "s": 20.0}},
            "sampling": {"n": 50_000, "seed": 5},
        }

    def test_pipeline_recovers_lines(self, tmp_path):
        code, _ = run(tmp_path, "sample", self.config(), out_name="rec.txt")
        assert code == 0
        code, text = run(tmp_path, "reconstruct", self.config(),
                         extra=["--record", str(tmp_path / "rec.txt")])
        assert code == 0
        _, rows = parse_rows(text)
        assert len(rows) == 2
        assert rows[0]["E_hat"] == pytest.approx(0.0, abs=0.01)
        assert rows[1]["E_hat"] == pytest.approx(1.0, abs=0.01)
        z = 1 + np.exp(-1.0)
        assert rows[0]["P_hat"] == pytest.approx(1 / z, abs=0.01)

    def test_byte_identical_reruns(self, tmp_path):
        code1, text1 = run(tmp_path, "sample", self.config(), out_name="a.txt")
        code2, text2 = run(tmp_path, "sample", self.config(), out_name="b.txt")
        assert code1 == code2 == 0
        assert text1 == text2

    def test_seed_override_changes_samples(self, tmp_path):
        _, text1 = run(tmp_path, "sample", self.config(), out_name="a.txt")
        _, text2 = run(tmp_path, "sample", self.config(),
                       extra=["--seed", "99"], out_name="b.txt")
        assert text1 != text2
        assert "# seed=99" in text2

    def test_squeezing_controls_spread(self, tmp_path):
        def spread(s):
            config = self.config()
            config["probe"]["mode"]["s"] = s
            config["sampling"]["n"] = 20_000
            code, text = run(tmp_path, "sample", config, out_name=f"s{s}.txt")
            assert code == 0
            samples = np.array([float(l.split()[1]) for l in text.splitlines()
                                if l and not l.startswith("#")])
            # spread around the dominant (ground) line at p = 0
            near = samples[np.abs(samples) < 0.45]
            return near.std()

        ratio = spread(1.0) / spread(100.0)
        assert ratio > 10.0

    def test_rerun_from_report_header(self, tmp_path):
        code, text = run(tmp_path, "sample", self.config(), out_name="a.txt")
        assert code == 0
        header_path = tmp_path / "from_header.txt"
        header_path.write_text(text)
        out = tmp_path / "b.txt"
        code = main(["sample", "--config", str(header_path), "--out", str(out)])
        assert code == 0
        assert out.read_text() == text


class TestThermoCommand:
    def test_exact_spectrum_beta(self, tmp_path):
        config = dict(QUBIT)
        config["thermo"] = {"beta_grid": [0.5, 1.0, 2.0]}
        code, text = run(tmp_path, "thermo", config)
        assert code == 0
        assert "# beta_hat=1.0" in text
        _, rows = parse_rows(text)
        assert len(rows) == 3
        for row in rows:
            b = row["beta"]
            assert row["Z"] == pytest.approx(1 + np.exp(-b))
            assert row["F"] == pytest.approx(-np.log(1 + np.exp(-b)) / b)
            assert row["S"] >= 0.0

    def test_from_record(self, tmp_path):
        config = {
            "system": {"diagonal": [0.0, 1.0]},
            "state": {"thermal_beta": 0.8},
            "probe": {"p0": 0.0, "g": 1.0, "tau": 1.0,
                      "mode": {"kind": "squeezed", "s": 30.0}},
            "sampling": {"n": 200_000, "seed": 2},
            "thermo": {"beta_grid": [1.0]},
        }
        code, _ = run(tmp_path, "sample", config, out_name="rec.txt")
        assert code == 0
        code, text = run(tmp_path, "thermo", config,
                         extra=["--record", str(tmp_path / "rec.txt")])
        assert code == 0
        beta_hat = float(text.split("# beta_hat=")[1].strip())
        assert beta_hat == pytest.approx(0.8, abs=0.05)


class TestQuenchCommand:
    def test_sigma_z_to_sigma_x(self, tmp_path):
        config = {
            "system": {"diagonal": [-1.0, 1.0]},
            "quench": {"system2": {"matrix": {
                "dim": 2,
                "entries": [[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 0.0]],
            }}, "beta": 1.0},
        }
        code, text = run(tmp_path, "quench", config)
        assert code == 0
        _, rows = parse_rows(text)
        # same spectrum before and after, so dF = 0 and <W> = tanh(1)
        assert rows[0]["dF"] == pytest.approx(0.0, abs=1e-12)
        assert rows[0]["W_avg"] == pytest.approx(np.tanh(1.0))
        assert rows[0]["W_irr"] == pytest.approx(np.tanh(1.0))
        assert rows[0]["W_irr"] >= 0.0


class TestOverlapCommand:
    def test_orthogonal_bases(self, tmp_path):
        config = {
            "system": {"diagonal": [-1.0, 1.0]},
            "overlap": {"system_b": {"matrix": {
                "dim": 2,
                "entries": [[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 0.0]],
            }}},
        }
        code, text = run(tmp_path, "overlap", config)
        assert code == 0
        _, rows = parse_rows(text)
        assert rows[0]["P0"] == pytest.approx(0.5)

    def test_identical_systems(self, tmp_path):
        config = {"system": {"diagonal": [0.0, 1.0]},
                  "overlap": {"system_b": {"diagonal": [0.0, 2.0]}}}
        code, text = run(tmp_path, "overlap", config)
        assert code == 0
        _, rows = parse_rows(text)
        assert rows[0]["P0"] == pytest.approx(1.0)


class TestSweepCommand:
    def test_beta_sweep(self, tmp_path):
        config = {"system": {"diagonal": [0.0, 1.0]},
                  "sweep": {"kind": "beta", "values": [0.5, 1.0, 2.0]}}
        code, text = run(tmp_path, "sweep", config)
        assert code == 0
        _, rows = parse_rows(text)
        for row in rows:
            assert row["Z"] == pytest.approx(1 + np.exp(-row["beta"]))

    def test_lambda_sweep_overlap_decays(self, tmp_path):
        config = {"sweep": {"kind": "lambda", "family": "dicke", "n_atoms": 4,
                            "lambda_ref": 1.0, "values": [1.0, 2.0, 3.0]}}
        code, text = run(tmp_path, "sweep", config)
        assert code == 0
        _, rows = parse_rows(text)
        # the family only rescales the coupling, so ground states coincide
        assert all(row["P0"] == pytest.approx(1.0) for row in rows)


class TestExitCodes:
    def test_missing_config_file(self, tmp_path, capsys):
        assert main(["spectrum", "--config", str(tmp_path / "nope.json")]) == 2
        assert "config error" in capsys.readouterr().err

    def test_invalid_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["spectrum", "--config", str(path)]) == 2

    def test_missing_system_section(self, tmp_path, capsys):
        code, _ = run(tmp_path, "spectrum", {"state": {"thermal_beta": 1.0}})
        assert code == 2

    def test_reconstruct_without_record(self, tmp_path, capsys):
        config = dict(QUBIT)
        path = write_config(tmp_path, config)
        assert main(["reconstruct", "--config", path]) == 2

    def test_degenerate_ground_state_contract(self, tmp_path, capsys):
        config = {"system": {"diagonal": [0.0, 0.0, 1.0]},
                  "overlap": {"system_b": {"diagonal": [0.0, 1.0, 2.0]}}}
        code, _ = run(tmp_path, "overlap", config)
        assert code == 4
        assert "contract violation" in capsys.readouterr().err

    def test_non_thermal_populations_contract(self, tmp_path, capsys):
        config = {"system": {"diagonal": [0.0, 0.5, 3.0]},
                  "state": {"random_populations": 12},
                  "thermo": {"beta_grid": [1.0]}}
        code, _ = run(tmp_path, "thermo", config)
        assert code == 4
