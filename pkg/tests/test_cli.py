import json
import subprocess
import sys

import pytest

from radixapprox.cli import main


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestSearch:
    def test_pigeonhole_json(self, capsys):
        code, out, _ = run_cli(
            ["search", "--base", "3", "--limit", "1000000", "--gamma", "355/113",
             "--method", "pigeonhole", "--format", "json"],
            capsys,
        )
        assert code == 0
        doc = json.loads(out)
        rep = doc["report"]
        assert rep["guarantee"] == "1/13"
        assert rep["mode"] == "exact"
        assert "/" in rep["distance"]["exact"]
        assert doc["meta"]["config"]["seed"] == 0

    def test_deterministic_report(self, capsys):
        args = ["search", "--base", "5", "--limit", "100000", "--gamma", "0.137",
                "--method", "oracle", "--format", "json"]
        _, out1, _ = run_cli(args, capsys)
        _, out2, _ = run_cli(args, capsys)
        assert json.loads(out1)["report"] == json.loads(out2)["report"]

    def test_csv_schema(self, capsys):
        code, out, _ = run_cli(
            ["adversary", "--base", "3", "--count", "128", "--format", "csv"], capsys
        )
        assert code == 0
        header, row = out.strip().splitlines()
        assert header == "subcommand,b,N,witness,distance_num,distance_den,bound,passed"
        cells = row.split(",")
        assert cells[0] == "adversary" and cells[-1] == "True"
        assert int(cells[4]) >= 1 and int(cells[5]) > 1

    def test_human_default(self, capsys):
        code, out, _ = run_cli(
            ["search", "--base", "2", "--limit", "100", "--gamma", "1/5"], capsys
        )
        assert code == 0 and "witness" in out


class TestOtherSubcommands:
    def test_constants(self, capsys):
        code, out, _ = run_cli(["constants", "--base", "2", "--format", "json"], capsys)
        assert code == 0
        rep = json.loads(out)["report"]
        assert set(rep) >= {"contraction_base", "et_constant", "depth_coeff", "window_coeff"}

    def test_constants_with_bound(self, capsys):
        code, out, _ = run_cli(
            ["constants", "--base", "2", "--limit", "1000000", "--format", "json"], capsys
        )
        rep = json.loads(out)["report"]
        assert rep["bound_at_N"]["vacuous"] is True

    def test_diffset(self, capsys):
        code, out, _ = run_cli(
            ["diffset", "--base", "3", "--limit", "13", "--method", "anchored",
             "--format", "json"],
            capsys,
        )
        rep = json.loads(out)["report"]
        assert rep["value"] == 4 and rep["witness"] == [0, 1, 4, 13]
        assert rep["bound"] == 4

    def test_expsum_decay(self, capsys):
        code, out, _ = run_cli(
            ["expsum", "--base", "2", "--r", "1", "--k", "1", "--m", "2",
             "--gamma", "2/5", "--method", "decay", "--format", "json"],
            capsys,
        )
        assert code == 0
        rep = json.loads(out)["report"]
        assert rep["far_positions"] == [0, 1]
        assert rep["separation_beta"] == "1/8"

    def test_expsum_shifts(self, capsys):
        code, out, _ = run_cli(
            ["expsum", "--base", "3", "--r", "2", "--k", "1", "--beta", "1/10",
             "--gamma", "1/27", "--method", "shifts", "--format", "json"],
            capsys,
        )
        rep = json.loads(out)["report"]
        assert rep["shifts"]["g"] == 1 and rep["shifts"]["positions"] == [0]

    def test_discrepancy(self, capsys):
        code, out, _ = run_cli(
            ["discrepancy", "--gamma", "1/7", "--limit", "7", "--G", "6",
             "--format", "json"],
            capsys,
        )
        rep = json.loads(out)["report"]
        assert rep["L_value"] == "1/1"

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = run_cli(
            ["constants", "--base", "3", "--format", "json", "--out", str(target)],
            capsys,
        )
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["meta"]["subcommand"] == "constants"


class TestExitCodes:
    def test_usage_error(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["search", "--base", "3", "--limit", "10", "--gamma", "no-number"])
        assert err.value.code != 0

    def test_resource_limit_via_config_env(self, capsys, tmp_path, monkeypatch):
        cfg = tmp_path / "cfg"
        cfg.write_text("enumeration_cap=10\nseed=7\n")
        monkeypatch.setenv("RADIX_APPROX_CONFIG", str(cfg))
        code, _, err = run_cli(["adversary", "--base", "2", "--count", "1000"], capsys)
        assert code == 3 and "resource limit" in err

    def test_config_seed_lands_in_meta(self, capsys, tmp_path, monkeypatch):
        cfg = tmp_path / "cfg"
        cfg.write_text("seed=99\nprecision_bits=96\n")
        monkeypatch.setenv("RADIX_APPROX_CONFIG", str(cfg))
        _, out, _ = run_cli(["constants", "--base", "2", "--format", "json"], capsys)
        meta = json.loads(out)["meta"]
        assert meta["config"]["seed"] == 99
        assert meta["config"]["precision_bits"] == 96

    def test_entry_point_runs(self):
        proc = subprocess.run(
            [sys.executable, "-m", "radixapprox.cli", "--version"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0 and "radix-approx" in proc.stdout
