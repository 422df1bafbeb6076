"""CLI surface: subcommands, exit codes, determinism, config validation."""

import json
import math

import numpy as np
import pytest

from bcmetrics.cli import load_run_config, main


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(payload if isinstance(payload, str) else json.dumps(payload, indent=1))
    return str(path)


@pytest.fixture
def bidisc_cfg(tmp_path):
    return write(
        tmp_path, "bidisc.json", {"kind": "polydisc", "dimension": 2, "polyradii": [1.0, 1.0]}
    )


@pytest.fixture
def ball_cfg(tmp_path):
    return write(tmp_path, "ball.json", {"kind": "ball", "dimension": 2, "radius": 1.0})


@pytest.fixture
def egg_cfg(tmp_path):
    return write(
        tmp_path, "egg.json", {"kind": "egg", "dimension": 2, "exponents": [1.0, 2.0]}
    )


class TestBasisCommand:
    def test_bidisc_degree_one_rows(self, bidisc_cfg, capsys):
        assert main(["basis", "--domain", bidisc_cfg, "--degree", "1"]) == 0
        out = capsys.readouterr().out
        rows = [line for line in out.splitlines() if line and not line.startswith("#")]
        assert rows[0] == "alpha_1,alpha_2,norm_sq,normalizer"
        data = [row.split(",") for row in rows[1:]]
        assert len(data) == 3
        assert float(data[0][3]) == pytest.approx(1 / math.pi, rel=1e-15)
        assert float(data[1][3]) == pytest.approx(math.sqrt(2) / math.pi, rel=1e-15)
        assert float(data[2][3]) == pytest.approx(math.sqrt(2) / math.pi, rel=1e-15)
        # the constant discrepancy note is part of the header
        assert "sqrt(3/2)/pi" in out

    def test_ball_degree_one_rows(self, ball_cfg, capsys):
        assert main(["basis", "--domain", ball_cfg, "--degree", "1"]) == 0
        rows = [
            line
            for line in capsys.readouterr().out.splitlines()
            if line and not line.startswith("#") and not line.startswith("alpha")
        ]
        normalizers = [float(r.split(",")[3]) for r in rows]
        assert normalizers == pytest.approx(
            [math.sqrt(2) / math.pi, math.sqrt(6) / math.pi, math.sqrt(6) / math.pi],
            rel=1e-15,
        )

    def test_disc_degree_zero_single_row(self, tmp_path, capsys):
        cfg = write(tmp_path, "disc.json", {"kind": "polydisc", "dimension": 1, "polyradii": [1.0]})
        assert main(["basis", "--domain", cfg, "--degree", "0"]) == 0
        rows = [
            line
            for line in capsys.readouterr().out.splitlines()
            if line and not line.startswith("#") and not line.startswith("alpha")
        ]
        assert len(rows) == 1
        alpha, norm_sq, normalizer = rows[0].split(",")
        assert alpha == "0"
        assert float(norm_sq) == pytest.approx(math.pi, rel=1e-15)
        assert float(normalizer) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-15)

    def test_writes_file(self, bidisc_cfg, tmp_path):
        out = tmp_path / "basis.csv"
        assert main(["basis", "--domain", bidisc_cfg, "--degree", "2", "--out", str(out)]) == 0
        # 4 comment lines, 1 column header, 6 entries
        assert out.read_text().count("\n") == 4 + 1 + 6


class TestMetricsCommand:
    def test_disc_row_values(self, tmp_path, capsys):
        cfg = write(tmp_path, "disc.json", {"kind": "polydisc", "dimension": 1, "polyradii": [1.0]})
        assert main(["metrics", "--domain", cfg, "--degree", "8"]) == 0
        rows = capsys.readouterr().out.splitlines()
        cells = rows[1].split(",")
        header = rows[0].split(",")
        bergman = float(cells[header.index("bergman")])
        cara = float(cells[header.index("caratheodory")])
        assert bergman == pytest.approx(math.sqrt(2), rel=1e-12)
        assert cara == pytest.approx(1.0, rel=1e-12)

    def test_zero_direction_row(self, tmp_path, capsys):
        config = {
            "domain": {"kind": "ball", "dimension": 2, "radius": 1.0},
            "degree_cap": 6,
            "tangents": [{"z": [0.0, 0.0], "X": [0.0, 0.0]}],
        }
        cfg = write(tmp_path, "run.json", config)
        assert main(["metrics", "--domain", cfg]) == 0
        rows = capsys.readouterr().out.splitlines()
        header = rows[0].split(",")
        cells = rows[1].split(",")
        assert float(cells[header.index("bergman")]) == 0.0
        assert float(cells[header.index("caratheodory")]) == 0.0


class TestVerifyCommand:
    def test_ball_reports_equality_exit_zero(self, ball_cfg, tmp_path):
        out = tmp_path / "report.json"
        assert main(["verify", "--domain", ball_cfg, "--degree", "8", "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert payload["schema"] == 1
        for report in payload["reports"]:
            assert report["verdict"] == "equality-holds-with-this-certificate"
            assert report["residual_equality"] < 1e-9

    def test_bidisc_mixed_tangent_strict(self, tmp_path):
        config = {
            "domain": {"kind": "polydisc", "dimension": 2, "polyradii": [1.0, 1.0]},
            "degree_cap": 8,
            "tangents": [
                {"z": [0.0, 0.0], "X": [math.sqrt(0.8), math.sqrt(0.2)]},
            ],
        }
        cfg = write(tmp_path, "run.json", config)
        out = tmp_path / "report.json"
        assert main(["verify", "--domain", cfg, "--out", str(out)]) == 0
        report = json.loads(out.read_text())["reports"][0]
        assert report["verdict"] == "strict-inequality-in-hahn-bound"
        assert report["strict_gap"] == pytest.approx(
            math.sqrt(2) - math.sqrt(1.6), abs=1e-9
        )

    def test_byte_identical_reports(self, ball_cfg, tmp_path):
        out_a = tmp_path / "a.json"
        out_b = tmp_path / "b.json"
        main(["verify", "--domain", ball_cfg, "--degree", "6", "--out", str(out_a)])
        main(["verify", "--domain", ball_cfg, "--degree", "6", "--out", str(out_b)])
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_egg_without_minimax_exits_two(self, egg_cfg, tmp_path, capsys):
        out = tmp_path / "report.json"
        assert main(["verify", "--domain", egg_cfg, "--out", str(out)]) == 2
        assert not out.exists()
        assert "minimax" in capsys.readouterr().err

    def test_egg_with_minimax_flag(self, egg_cfg, tmp_path):
        out = tmp_path / "report.json"
        code = main(
            ["verify", "--domain", egg_cfg, "--degree", "8", "--minimax", "--out", str(out)]
        )
        assert code == 0
        for report in json.loads(out.read_text())["reports"]:
            assert report["mode"] == "minimax-lower-bound"
            assert report["conditional"] is True

    def test_tolerance_flag_is_respected(self, ball_cfg, tmp_path):
        out = tmp_path / "report.json"
        assert (
            main(
                [
                    "verify",
                    "--domain",
                    ball_cfg,
                    "--degree",
                    "6",
                    "--tolerance",
                    "1e-3",
                    "--out",
                    str(out),
                ]
            )
            == 0
        )
        assert json.loads(out.read_text())["reports"][0]["tolerance"] == 1e-3


class TestSweepCommand:
    def test_sweep_rows_and_determinism(self, ball_cfg, tmp_path):
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        code = main(
            ["sweep", "--domain", ball_cfg, "--degree", "10", "--seed", "3", "--out", str(out_a)]
        )
        assert code == 0
        main(["sweep", "--domain", ball_cfg, "--degree", "10", "--seed", "3", "--out", str(out_b)])
        assert out_a.read_bytes() == out_b.read_bytes()
        rows = out_a.read_text().splitlines()
        header = rows[0].split(",")
        assert header[0] == "seed"
        assert "strict_gap" in header and "verdict" in header
        assert len(rows) > 1
        # on the ball the Hahn bound is an equality, so the tabulated gap
        # sits at zero up to kernel truncation at this degree cap
        gap_idx = header.index("strict_gap")
        for row in rows[1:]:
            assert abs(float(row.split(",")[gap_idx])) < 0.05


class TestConfigErrors:
    def test_malformed_json_exit_two_no_output(self, tmp_path, capsys):
        cfg = write(tmp_path, "bad.json", '{"kind": "ball",, }')
        out = tmp_path / "never.json"
        assert main(["verify", "--domain", cfg, "--out", str(out)]) == 2
        assert not out.exists()
        assert "line 1" in capsys.readouterr().err

    def test_unknown_run_key_reports_line(self, tmp_path, capsys):
        cfg = write(
            tmp_path,
            "run.json",
            '{\n"domain": {"kind": "ball", "dimension": 1, "radius": 1.0},\n"wat": 3\n}',
        )
        assert main(["metrics", "--domain", cfg]) == 2
        err = capsys.readouterr().err
        assert "wat" in err and "line 3" in err

    def test_tangent_dimension_mismatch(self, tmp_path):
        config = {
            "domain": {"kind": "ball", "dimension": 2, "radius": 1.0},
            "tangents": [{"z": [0.0], "X": [1.0]}],
        }
        cfg = write(tmp_path, "run.json", config)
        assert main(["metrics", "--domain", cfg]) == 2

    def test_tangent_outside_domain(self, tmp_path):
        config = {
            "domain": {"kind": "ball", "dimension": 2, "radius": 1.0},
            "tangents": [{"z": [2.0, 0.0], "X": [1.0, 0.0]}],
        }
        cfg = write(tmp_path, "run.json", config)
        assert main(["metrics", "--domain", cfg]) == 2

    def test_missing_file(self):
        assert main(["metrics", "--domain", "/nonexistent/f.json"]) == 2

    def test_mismatched_format_rejected(self, ball_cfg, capsys):
        assert main(["metrics", "--domain", ball_cfg, "--format", "json"]) == 2
        assert "format" in capsys.readouterr().err

    def test_complex_component_pairs_parse(self, tmp_path):
        config = {
            "domain": {"kind": "ball", "dimension": 2, "radius": 1.0},
            "tangents": [{"z": [[0.1, 0.2], 0.0], "X": [[0.0, 1.0], 0.5]}],
        }
        cfg = load_run_config(write(tmp_path, "run.json", config))
        assert cfg.tangents[0].z[0] == 0.1 + 0.2j
        assert cfg.tangents[0].X[0] == 1.0j

    def test_default_tangents_for_bare_domain(self, ball_cfg):
        cfg = load_run_config(ball_cfg)
        assert len(cfg.tangents) == 3  # two axes plus the diagonal
        assert np.all(cfg.tangents[0].z == 0)


class TestAcceptanceCommand:
    def test_table_exit_code_and_summary(self, monkeypatch, capsys, tmp_path):
        from bcmetrics.acceptance import AcceptanceRecord

        def fake_run_all(verbose=False):
            # numpy scalars appear in real measured dicts and pass flags
            records = [
                AcceptanceRecord(1, "alpha", np.bool_(True), {"x": np.float64(1.0)}),
                AcceptanceRecord(2, "beta", True, {}),
            ]
            if verbose:
                for r in records:
                    print(r.line())
            return records, 1.5

        monkeypatch.setattr("bcmetrics.cli.acceptance_mod.run_all", fake_run_all)
        summary_path = tmp_path / "summary.json"
        assert main(["acceptance", "--out", str(summary_path)]) == 0
        out = capsys.readouterr().out
        assert "[PASS] criterion 1" in out
        assert "2/2 passed" in out
        summary = json.loads(summary_path.read_text())
        assert summary["all_passed"] is True
        assert summary["criteria"][0]["measured"] == {"x": 1.0}

    def test_failure_exit_code(self, monkeypatch, capsys):
        from bcmetrics.acceptance import AcceptanceRecord

        monkeypatch.setattr(
            "bcmetrics.cli.acceptance_mod.run_all",
            lambda verbose=False: ([AcceptanceRecord(1, "alpha", False, {})], 0.1),
        )
        assert main(["acceptance"]) == 1
