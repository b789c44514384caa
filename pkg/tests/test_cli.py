"""Config parsing, serialization round-trips, file emission, exit codes."""

import json

import numpy as np
import pytest

from univalence_lab.cli import (
    bundled_configs,
    emit_grid_csv,
    emit_svg,
    format_complex,
    main,
    parse_complex,
    parse_config,
    read_grid_csv,
    run_command,
    serialize,
)
from univalence_lab.errors import ConfigError


class TestParseConfig:
    def test_defaults(self):
        spec = parse_config({"f": {"catalog": "identity"}, "params": {"gamma": [1, 0]}})
        assert spec.f.degree == 1
        assert spec.params.m == 1.0 and spec.params.a == 1.0
        assert spec.variant == "thm31"
        assert spec.grid.radii[-1] < 1.0

    def test_gamma_zero(self):
        with pytest.raises(ConfigError, match="params.gamma: must be nonzero"):
            parse_config({"params": {"gamma": [0, 0]}})

    def test_c1_not_one(self):
        with pytest.raises(ConfigError, match="f: c1 must equal 1"):
            parse_config({"f": {"coefficients": [[2, 0]]}})

    def test_k_out_of_range(self):
        with pytest.raises(ConfigError, match=r"params.k: must lie in \[0, 1\)"):
            parse_config({"params": {"k": 1.0}})

    def test_unknown_keys(self):
        with pytest.raises(ConfigError, match="config: unknown keys"):
            parse_config({"mystery": 1})
        with pytest.raises(ConfigError, match="params: unknown keys"):
            parse_config({"params": {"delta": 2}})

    def test_unknown_catalog(self):
        with pytest.raises(ConfigError, match="f: unknown catalog"):
            parse_config({"f": {"catalog": "weird"}})

    def test_unknown_variant(self):
        with pytest.raises(ConfigError, match="variant"):
            parse_config({"variant": "thm99"})

    def test_bad_json(self):
        with pytest.raises(ConfigError, match="invalid JSON"):
            parse_config("{nope")

    def test_complex_forms(self):
        spec = parse_config({"params": {"gamma": 2.0, "alpha": [0.5, -0.25]}})
        assert spec.params.gamma == 2.0
        assert spec.params.alpha == 0.5 - 0.25j

    def test_roundtrip_bundled(self):
        configs = bundled_configs()
        assert {"identity", "example31_thm32", "example31_thm41", "koebe_cor32"} <= set(configs)
        for name, text in configs.items():
            spec = parse_config(text)
            again = parse_config(json.dumps(serialize(spec)))
            assert again.f == spec.f and again.g == spec.g and again.phi == spec.phi
            assert again.params == spec.params
            assert again.grid == spec.grid
            assert again.quad == spec.quad
            assert again.variant == spec.variant


class TestComplexText:
    def test_roundtrip(self):
        for v in (0.5 + 0.3j, -1.25, 2j, 0.0):
            assert parse_complex(format_complex(v)) == v

    def test_parse_error(self):
        with pytest.raises(ConfigError):
            parse_complex("zebra")


class TestCsv:
    def test_exact_single_row(self, tmp_path):
        path = tmp_path / "one.csv"
        emit_grid_csv([(0.5, 0, 0.5625, 0)], ("re_z", "im_z", "re_w", "im_w"), path)
        assert path.read_bytes() == b"re_z,im_z,re_w,im_w\n0.5,0,0.5625,0\n"

    def test_empty_rows(self, tmp_path):
        path = tmp_path / "empty.csv"
        emit_grid_csv([], ("re_z", "im_z", "re_w", "im_w"), path)
        assert path.read_bytes() == b"re_z,im_z,re_w,im_w\n"

    def test_bit_identical_reparse(self, tmp_path):
        rng = np.random.default_rng(3)
        rows = [tuple(rng.normal(size=4)) for _ in range(20)]
        path = tmp_path / "grid.csv"
        emit_grid_csv(rows, ("re_z", "im_z", "re_w", "im_w"), path)
        header, back = read_grid_csv(path)
        assert header == ["re_z", "im_z", "re_w", "im_w"]
        for row, parsed in zip(rows, back):
            assert all(a == b for a, b in zip(row, parsed))

    def test_ragged_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            emit_grid_csv([(1, 2)], ("a", "b", "c"), tmp_path / "x.csv")


class TestSvg:
    @staticmethod
    def _grid_rows(fun, radii=(0.3, 0.6, 0.9), n_theta=16):
        rows = []
        for r in radii:
            for th in np.linspace(0.0, 2 * np.pi, n_theta, endpoint=False):
                z = r * np.exp(1j * th)
                w = fun(z)
                rows.append((z.real, z.imag, w.real, w.imag))
        return rows

    def test_deterministic(self, tmp_path):
        rows = self._grid_rows(lambda z: z + z * z / 4)
        cols = ("re_z", "im_z", "re_w", "im_w")
        p1, p2 = tmp_path / "a.svg", tmp_path / "b.svg"
        emit_svg(rows, cols, p1)
        emit_svg(rows, cols, p2)
        data = p1.read_bytes()
        assert data == p2.read_bytes()
        assert data.startswith(b"<svg ")
        assert data.count(b"<polyline") == 3 + 16  # circles + rays

    def test_ragged_grid_rejected(self, tmp_path):
        rows = self._grid_rows(lambda z: z)[:-1]
        with pytest.raises(ValueError, match="complete polar grid"):
            emit_svg(rows, ("re_z", "im_z", "re_w", "im_w"), tmp_path / "x.svg")

    def test_missing_columns_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="re_z"):
            emit_svg([(1, 2)], ("a", "b"), tmp_path / "x.svg")


@pytest.fixture()
def write_config(tmp_path):
    def _write(doc, name="cfg.json"):
        p = tmp_path / name
        p.write_text(json.dumps(doc))
        return str(p)

    return _write


REFERENCE_DOC = {
    "f": {"catalog": "quadratic", "params": {"c": 0.25}},
    "g": {"catalog": "quadratic", "params": {"c": 0.5}},
    "params": {"alpha": 0.5, "beta": 0.5, "gamma": 1.0},
    "grid": {"radii": [0.5, 0.9], "angles_per_radius": 64, "refine_steps": 5},
    "variant": "thm32",
}


class TestEndToEnd:
    def test_check_pass_exit_zero(self, write_config, capsys):
        assert main(["check", write_config(REFERENCE_DOC)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["passed"] is True
        assert doc["sup"] < 1.0

    def test_check_fail_exit_two(self, write_config, capsys):
        cfg = {
            "f": {"catalog": "koebe", "params": {"degree": 512}},
            "grid": {"radii": [0.5, 0.9], "angles_per_radius": 64, "refine_steps": 5},
            "variant": "cor32",
        }
        assert main(["check", write_config(cfg)]) == 2
        assert json.loads(capsys.readouterr().out)["passed"] is False

    def test_hypothesis_violation_exit_three(self, write_config, capsys):
        cfg = {
            "f": {"catalog": "identity"},
            "g": {"coefficients": [1, -2]},  # vanishes at z = 1/2
            "params": {"beta": 1.0},
            "variant": "thm31",
        }
        assert main(["check", write_config(cfg)]) == 3

    def test_flag_error_exit_64(self, capsys):
        assert main(["constants"]) == 64  # --k is required
        assert main(["frobnicate"]) == 64

    def test_config_error_exit_64(self, write_config):
        assert main(["check", write_config({"params": {"gamma": 0}})]) == 64

    def test_missing_file_exit_70(self, tmp_path):
        assert main(["check", str(tmp_path / "absent.json")]) == 70

    def test_eval_zero(self, write_config, capsys):
        assert main(["eval", write_config(REFERENCE_DOC), "--z", "0+0i"]) == 0
        assert capsys.readouterr().out.strip() == "0+0i"

    def test_eval_point(self, write_config, capsys):
        assert main(["eval", write_config(REFERENCE_DOC), "--z", "0+0.8i"]) == 0
        v = parse_complex(capsys.readouterr().out.strip())
        assert v == pytest.approx(-0.16 + 0.8j, rel=1e-10)

    def test_constants_json(self, capsys):
        assert main(["constants", "--k", "0.5", "--a", "1"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["l"] == 0.5

    def test_eval_chain_extend_plot_files(self, write_config, tmp_path, capsys):
        cfg = write_config(REFERENCE_DOC)
        csv = tmp_path / "grid.csv"
        assert main(["eval", cfg, "--out", str(csv), "--nr", "3", "--ntheta", "8"]) == 0
        header, rows = read_grid_csv(csv)
        assert header == ["re_z", "im_z", "re_w", "im_w"]
        assert len(rows) == 24

        svg = tmp_path / "grid.svg"
        assert main(["plot", "--csv", str(csv), "--out", str(svg)]) == 0
        assert svg.read_bytes().startswith(b"<svg ")

        chain_csv = tmp_path / "chain.csv"
        assert (
            main(
                ["chain", cfg, "--out", str(chain_csv), "--nr", "2", "--ntheta", "4", "--tsteps", "2"]
            )
            == 0
        )
        header, rows = read_grid_csv(chain_csv)
        assert header == ["re_z", "im_z", "t", "re_w", "im_w", "abs_w"]
        assert len(rows) == 16

        ext_csv = tmp_path / "ext.csv"
        assert main(["extend", cfg, "--out", str(ext_csv), "--nr", "3", "--ntheta", "4"]) == 0
        header, rows = read_grid_csv(ext_csv)
        assert header == ["re_z", "im_z", "re_w", "im_w", "abs_mu"]
        assert len(rows) == 12

    def test_oracle_identity_clean(self, write_config, capsys):
        cfg = write_config(
            {"f": {"catalog": "identity"}, "params": {"alpha": 1.0, "beta": 1.0}}
        )
        assert main(["oracle", cfg, "--nr", "20", "--ntheta", "20", "--targets", "10"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["collision"] is None
        assert doc["covered_once"] is True

    def test_run_command_unknown(self):
        spec = parse_config({})
        with pytest.raises(ConfigError):
            run_command("bogus", spec)
