"""Command-line harness: outputs, self-checks, determinism, golden files."""

import csv
import hashlib
import json
from pathlib import Path

import numpy as np
import pytest

from lagssm.cli import main
from lagssm.experiments import (
    ExperimentConfig,
    SignalConfig,
    cmd_lagshift,
    cmd_reconstruct,
)

DATA_DIR = Path(__file__).parent / "data"


def read_table(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    return header, [[float(x) for x in row] for row in body]


def sha256_of(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@pytest.fixture(scope="module")
def tables_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("tables")
    code = main(["tables", "--out", str(out)])
    assert code == 0
    return out


class TestTables:
    def test_table2_identity_level(self, tables_dir):
        _, rows = read_table(tables_dir / "table2.csv")
        assert [int(r[0]) for r in rows] == [10, 30, 50]
        assert all(r[1] <= 1e-10 for r in rows)

    def test_table1_small_step(self, tables_dir):
        _, rows = read_table(tables_dir / "table1.csv")
        by_delta = {r[0]: r[1] for r in rows}
        assert by_delta[1e-2] <= 1e-7

    def test_table3_trend(self, tables_dir):
        header, rows = read_table(tables_dir / "table3.csv")
        assert header == ["delta", "diff", "diff_exact_exp", "cond_a_delta"]
        diffs = [r[1] for r in rows]
        assert all(a < b for a, b in zip(diffs, diffs[1:]))
        assert 2e-5 <= diffs[0] <= 2e-4

    def test_reruns_are_byte_identical(self, tables_dir, tmp_path):
        assert main(["tables", "--out", str(tmp_path)]) == 0
        for name in ("table1.csv", "table2.csv", "table3.csv"):
            assert sha256_of(tmp_path / name) == sha256_of(tables_dir / name)


class TestReconstruct:
    def test_default_lorenz_run(self, tmp_path):
        code = main(["reconstruct", "--out", str(tmp_path)])
        assert code == 0
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["mse"] <= 1e-5
        header, rows = read_table(tmp_path / "recon.csv")
        assert header == ["s", "u_model", "u_baseline", "omega"]
        assert len(rows) == 1000

    def test_zero_signal(self, tmp_path):
        cfg = ExperimentConfig(
            signal=SignalConfig(kind="sine", freqs=(1.0,), amps=(0.0,), phases=(0.0,)),
            output_dir=str(tmp_path),
        )
        checks = cmd_reconstruct(cfg)
        assert checks[0].ok
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["mse"] == 0.0
        _, rows = read_table(tmp_path / "recon.csv")
        assert all(r[1] == 0.0 and r[2] == 0.0 for r in rows)

    def test_sine_near_boundary_agreement(self, tmp_path):
        """Exact and reference recurrences agree over the last second to
        within 5% of the signal amplitude."""
        cfg = ExperimentConfig(
            signal=SignalConfig(kind="sine", freqs=(0.5,), amps=(1.0,), phases=(0.0,)),
            output_dir=str(tmp_path),
        )
        checks = cmd_reconstruct(cfg)
        assert checks[0].ok
        _, rows = read_table(tmp_path / "recon.csv")
        recent = [r for r in rows if r[0] >= 9.0]
        worst = max(abs(r[1] - r[2]) for r in recent)
        assert worst <= 0.05 * 1.0

    def test_csv_signal_round_trip(self, tmp_path):
        from lagssm import SignalTrace

        trace_path = tmp_path / "sig.csv"
        values = np.sin(2 * np.pi * 0.5 * 0.01 * np.arange(300))
        SignalTrace.from_values(values, delta=0.01).to_csv(trace_path)
        code = main(
            [
                "reconstruct",
                "--out",
                str(tmp_path),
                "--signal",
                f"csv:{trace_path}",
                "--total-time",
                "3.0",
            ]
        )
        assert code == 0


class TestLagshift:
    def test_identity_at_zero_delta(self, tmp_path):
        cfg = ExperimentConfig(delta=0.0, output_dir=str(tmp_path))
        checks = cmd_lagshift(cfg, n_show=17, direction="forward")
        assert checks[0].ok
        _, rows = read_table(tmp_path / "lagshift.csv")
        worst = max(abs(r[1] - r[2]) for r in rows)
        assert worst <= 1e-9

    def test_forward_amplitude_below_backward(self, tmp_path):
        """The forward-shifted top mode shrinks, the backward-shifted one
        grows."""
        cfg = ExperimentConfig(output_dir=str(tmp_path))
        cmd_lagshift(cfg, n_show=63, direction="forward")
        _, fwd_rows = read_table(tmp_path / "lagshift.csv")
        cmd_lagshift(cfg, n_show=63, direction="backward")
        _, back_rows = read_table(tmp_path / "lagshift.csv")
        fwd_max = max(abs(r[2]) for r in fwd_rows)
        back_max = max(abs(r[2]) for r in back_rows)
        assert fwd_max < back_max

    def test_golden_file(self, tmp_path):
        """Default backward shift of the top mode matches the committed run."""
        code = main(["lagshift", "--out", str(tmp_path)])
        assert code == 0
        assert sha256_of(tmp_path / "lagshift.csv") == sha256_of(
            DATA_DIR / "lagshift_golden.csv"
        )

    def test_bad_index(self, tmp_path):
        code = main(["lagshift", "--out", str(tmp_path), "--n-show", "64"])
        assert code == 2


class TestMatricesCommand:
    def test_small_dump_contents(self, tmp_path):
        from lagssm.matrices import load_matrices_json

        code = main(["matrices", "--out", str(tmp_path), "--n", "2"])
        assert code == 0
        arrays, meta = load_matrices_json(tmp_path / "matrices.json")
        np.testing.assert_allclose(
            arrays["a_hippo"], [[-1.0, 0.0], [-np.sqrt(3.0), -2.0]], atol=1e-15
        )
        assert "b_delta_foh_v_next" in arrays
        assert "b_delta_foh_v_prev" in arrays
        assert meta["n_basis"] == 2

    def test_round_trip_bit_identical(self, tmp_path):
        from lagssm.matrices import load_matrices_json
        from lagssm import BasisSpec, WarpSpec, QuadratureConfig, build_a_delta

        assert main(["matrices", "--out", str(tmp_path), "--n", "12"]) == 0
        arrays, _ = load_matrices_json(tmp_path / "matrices.json")
        rebuilt = build_a_delta(
            BasisSpec(n_basis=12), WarpSpec(), 0.01, QuadratureConfig()
        )
        np.testing.assert_array_equal(arrays["a_delta"], rebuilt)


class TestConfigHandling:
    def test_config_file_with_flag_override(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(
            json.dumps(
                {
                    "n_basis": 16,
                    "delta": 0.02,
                    "signal": {"kind": "sine", "freqs": [0.5], "amps": [1.0], "phases": [0.0]},
                }
            )
        )
        loaded = ExperimentConfig.from_json(cfg_path)
        assert loaded.n_basis == 16
        assert loaded.signal.kind == "sine"
        code = main(
            ["matrices", "--config", str(cfg_path), "--n", "3", "--out", str(tmp_path)]
        )
        assert code == 0
        from lagssm.matrices import load_matrices_json

        _, meta = load_matrices_json(tmp_path / "matrices.json")
        assert meta["n_basis"] == 3  # flag wins over file
        assert meta["delta"] == 0.02  # file survives where no flag given

    def test_unknown_signal_is_an_error(self, tmp_path):
        assert main(["reconstruct", "--out", str(tmp_path), "--signal", "sawtooth"]) == 2

    def test_tau_flag(self, tmp_path):
        from lagssm.matrices import load_matrices_json

        assert (
            main(["matrices", "--out", str(tmp_path), "--n", "4", "--tau", "2.0"]) == 0
        )
        arrays, meta = load_matrices_json(tmp_path / "matrices.json")
        assert meta["tau"] == 2.0
        np.testing.assert_allclose(arrays["b_gen"], np.sqrt(2 * np.arange(4) + 1) / 2.0)
