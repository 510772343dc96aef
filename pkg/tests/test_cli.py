from __future__ import annotations

import json
import subprocess
import sys

import pytest

from skorokhod import CadlagStep, ConfigurationError, figure2_jumps
from skorokhod.cli import EXIT_FAIL, EXIT_IO, EXIT_PASS, EXIT_USAGE, main
from skorokhod.config import RunConfig
from skorokhod.io import save_path
from skorokhod.witnesses import random_step_path


def run(capsys, *argv) -> tuple[int, dict]:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else {})


class TestRunConfig:
    @pytest.mark.parametrize(
        "kw", [{"tol": 0.0}, {"tol": -1.0}, {"depth": 7}, {"level": 0}, {"level": 11},
               {"formats": ("pdf",)}, {"levels": ((1.0, 0.5),)}, {"T_grid": ()}],
    )
    def test_invalid(self, kw):
        with pytest.raises(ConfigurationError):
            RunConfig(**kw)

    def test_defaults(self):
        cfg = RunConfig()
        assert cfg.depth >= 8 and cfg.tol > 0 and cfg.mj1_eps == 1.0
        assert cfg.to_dict()["levels"][0] == [0.25, 0.75]


class TestAnalyze:
    def test_constant_path(self, tmp_path, capsys):
        save_path(CadlagStep.constant(0.3), tmp_path / "c.json")
        code, rep = run(capsys, "analyze", str(tmp_path / "c.json"))
        assert code == EXIT_PASS
        assert all(r["count"] == 0 for r in rep["upcrossings"] + rep["oscillations"])

    def test_figure2(self, tmp_path, capsys):
        save_path(figure2_jumps(2), tmp_path / "f.csv")
        code, rep = run(capsys, "analyze", str(tmp_path / "f.csv"), "--levels", "0.25:0.75")
        assert code == EXIT_PASS and rep["upcrossings"] == [{"a": 0.25, "b": 0.75, "count": 1}]
        assert rep["sup_norm"] == 1.0 and rep["total_variation"] == 1.0

    def test_deterministic(self, tmp_path, capsys):
        save_path(random_step_path(4, 30), tmp_path / "r.json")
        first = run(capsys, "analyze", str(tmp_path / "r.json"))
        second = run(capsys, "analyze", str(tmp_path / "r.json"))
        assert first == second

    def test_writes_outputs(self, tmp_path, capsys, monkeypatch):
        save_path(figure2_jumps(3), tmp_path / "p.json")
        monkeypatch.setenv("SKOROKHOD_OUT", str(tmp_path / "out"))
        assert run(capsys, "analyze", str(tmp_path / "p.json"))[0] == EXIT_PASS
        assert (tmp_path / "out" / "p.analysis.json").exists()
        assert (tmp_path / "out" / "p.analysis.csv").read_text().startswith("quantity,")

    def test_parse_error(self, tmp_path, capsys):
        (tmp_path / "bad.json").write_text('{"horizon": 1}')
        assert run(capsys, "analyze", str(tmp_path / "bad.json"))[0] == EXIT_USAGE

    def test_missing_file(self, tmp_path, capsys):
        assert run(capsys, "analyze", str(tmp_path / "none.json"))[0] == EXIT_IO


class TestConverge:
    def test_spikes_s_dual(self, capsys):
        code, rep = run(capsys, "converge", "figure1_spikes", "--mode", "s-dual")
        assert code == EXIT_PASS and rep["verdict"] == "PASS" and rep["mode"] == "S-dual"

    def test_spikes_j1(self, capsys):
        code, rep = run(capsys, "converge", "figure1_spikes", "--mode", "j1", "--depth", "64")
        assert code == EXIT_FAIL and rep["witness"]["margin"] >= 1.0

    def test_figure2(self, capsys):
        assert run(capsys, "converge", "figure2_jumps", "--mode", "mj1", "--depth", "256")[0] == EXIT_PASS
        assert run(capsys, "converge", "figure2_jumps", "--mode", "j1", "--depth", "256")[0] == EXIT_FAIL

    def test_mj1_eps_recorded(self, capsys):
        _, rep = run(capsys, "converge", "figure2_jumps", "--mode", "mj1", "--depth", "64",
                     "--mj1-eps", "0.5")
        assert rep["details"]["mj1_eps"] == 0.5

    def test_refuter_catalog(self, capsys):
        code, rep = run(capsys, "converge", "constant_blowup", "--depth", "32",
                        "--catalog", "refuter", "--tau-tol", "0.25")
        assert code == EXIT_FAIL
        assert any(f.get("catalog_entry") == "refuter" for f in rep["failures"])

    def test_non_tau_catalog_is_config_error(self, capsys):
        code = main(["converge", "constant_blowup", "--depth", "32", "--catalog", "refuter"])
        assert code == EXIT_USAGE

    def test_inf_horizon_and_multidim(self, capsys):
        assert run(capsys, "converge", "marching_bumps", "--mode", "inf-horizon",
                   "--depth", "64")[0] == EXIT_PASS
        code, rep = run(capsys, "converge", "spikes_and_blowup", "--mode", "multidim")
        assert code == EXIT_FAIL and {f["component"] for f in rep["failures"]} == {2}

    def test_files(self, tmp_path, capsys):
        names = []
        for n in range(1, 9):
            p = tmp_path / f"x{n}.json"
            save_path(CadlagStep.constant(1 / n**2), p)
            names.append(str(p))
        save_path(CadlagStep.constant(0.0), tmp_path / "lim.json")
        code, rep = run(capsys, "converge", "--terms", *names, "--limit", str(tmp_path / "lim.json"),
                        "--mode", "uniform")
        assert code == EXIT_PASS and rep["depth"] == 8

    def test_horizon_mismatch(self, tmp_path, capsys):
        names = []
        for n in range(1, 9):
            p = tmp_path / f"x{n}.json"
            save_path(CadlagStep.constant(0.0, 2.0), p)
            names.append(str(p))
        save_path(CadlagStep.constant(0.0), tmp_path / "lim.json")
        code = main(["converge", "--terms", *names, "--limit", str(tmp_path / "lim.json")])
        assert code == EXIT_USAGE

    def test_unknown_id_and_mode(self, capsys):
        assert main(["converge", "figure9"]) == EXIT_USAGE
        assert main(["converge", "figure1_spikes", "--mode", "m1"]) == EXIT_USAGE
        assert main(["converge"]) == EXIT_USAGE
        assert main(["converge", "figure1_spikes", "--depth", "4"]) == EXIT_USAGE

    def test_outputs(self, tmp_path, capsys):
        code = main(["converge", "figure2_jumps", "--mode", "mj1", "--depth", "64",
                     "--out", str(tmp_path)])
        assert code == EXIT_PASS
        for suffix in ("json", "csv", "svg"):
            assert (tmp_path / f"figure2_jumps.mj1.{suffix}").exists()
        full = json.loads((tmp_path / "figure2_jumps.mj1.json").read_text())
        assert "upper" in full["margins"]


class TestCompact:
    def test_verdicts(self, capsys):
        assert run(capsys, "compact", "figure2_jumps")[0] == EXIT_PASS
        code, rep = run(capsys, "compact", "sawtooth")
        assert code == EXIT_FAIL and rep["criterion_i"] is False and rep["criterion_ii"] is False


class TestDemo:
    def test_tight_tolerance_lists_documented_failures(self, tmp_path, capsys):
        code, summary = run(capsys, "demo", "--tol", "1e-15", "--out", str(tmp_path))
        assert code == EXIT_FAIL
        assert summary["failures"]
        assert all(f["documented_tol_sensitive"] for f in summary["failures"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "skorokhod", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "skorokhod" in proc.stdout
