"""CLI harness: exit codes, JSON reports and golden outputs."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from mintheta.cli import main, run


def _json(capsys) -> object:
    return json.loads(capsys.readouterr().out)


class TestVerify:
    def test_table_json(self, capsys):
        assert main(["verify", "table", "--format", "json"]) == 0
        report = _json(capsys)
        assert len(report) == 34
        assert {r["status"] for r in report} == {"pass"}
        assert set(report[0]) == {"id", "status", "expected", "computed", "provenance", "detail"}
        ids = [r["id"] for r in report]
        assert len(ids) == len(set(ids))

    def test_filter(self, capsys):
        assert main(["verify", "table", "--format", "json", "--filter", "table.cv1.E*"]) == 0
        assert [r["id"] for r in _json(capsys)] == ["table.cv1.E6/D5", "table.cv1.E7/E6", "table.cv1.E6/A5", "table.cv1.E7/D6", "table.cv1.E8/E7"]

    def test_e8_cv1_value(self, capsys):
        assert main(["verify", "table", "--format", "json", "--filter", "table.cv1.E8/E7"]) == 0
        (r,) = _json(capsys)
        assert r["computed"] == "ξ(6)·ξ(10)·ξ(14)/(ξ(15)·ξ(20)·ξ(24))"

    def test_markdown(self, capsys):
        assert main(["verify", "sl2"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("| id | status |")
        assert out.rstrip().endswith("6/6 checks passed")

    def test_deterministic_output(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["verify", "transition", "--format", "json", "--output", str(a)]) == 0
        assert main(["verify", "transition", "--format", "json", "--output", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert "duration_ms" not in a.read_text(encoding="utf-8")

    def test_timings_opt_in(self, capsys):
        assert main(["verify", "sl2", "--format", "json", "--timings"]) == 0
        assert all("duration_ms" in r for r in _json(capsys))

    def test_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "suite.json"
        cfg.write_text(json.dumps({"format": "json", "filter": ["sl2.c*"], "zeta": "q=3,g=1,num=1:-1:3"}), encoding="utf-8")
        assert main(["verify", "sl2", "--config", str(cfg)]) == 0
        assert [r["id"] for r in _json(capsys)] == ["sl2.c-function", "sl2.c(0)", "sl2.c'(0)"]

    def test_zeta_model_option(self, capsys):
        assert main(["verify", "gk", "--zeta", "q=5,g=1,num=1:2:5", "--filter", "gk.identity*.D4", "--format", "json"]) == 0
        assert len(_json(capsys)) == 2

    def test_run_alias(self):
        assert run is main


class TestUsageErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            ["verify", "nope"],
            ["verify", "table", "--filter", "no.such.check"],
            ["verify", "table", "--zeta", "q=2,g=1,num=1:0:9"],
            ["show", "roots", "Q7"],
            ["show", "pair", "E9:E8"],
            ["gk", "factor", "E7:E6", "v0", "--at", "five"],
            ["decomp", "expand", "D5:D4", "--depth", "100"],
            ["bogus"],
        ],
    )
    def test_exit_two(self, argv):
        assert main(argv) == 2

    def test_bad_config(self, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text("[1, 2]", encoding="utf-8")
        assert main(["verify", "sl2", "--config", str(cfg)]) == 2

    def test_help(self, capsys):
        assert main(["--help"]) == 0
        assert "verify" in capsys.readouterr().out


class TestShow:
    def test_roots_e6(self, capsys):
        assert main(["show", "roots", "E6", "--format", "json"]) == 0
        data = _json(capsys)
        assert data["count"] == 36
        assert data["roots"][-1] == {"coeffs": [1, 2, 2, 3, 2, 1], "height": 11}

    def test_roots_markdown_rows(self, capsys):
        assert main(["show", "roots", "E6"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2 + 36

    def test_pair(self, capsys):
        assert main(["show", "pair", "E8:E7", "--format", "json"]) == 0
        data = _json(capsys)
        assert data["type"] == "H" and data["dim_V"] == 57 and data["n"] == 28
        assert data["rho_pairing"] == "29/2"
        assert data["tilde_beta"] == "23465431"

    def test_triple(self, capsys):
        assert main(["show", "triple", "E7/E6", "--format", "json"]) == 0
        data = _json(capsys)
        assert data["v1"] == "w(7654234567)"
        assert data["s0,d0"] == ["5", "3"]


class TestGKFactor:
    def test_residue_at_s0(self, capsys):
        assert main(["gk", "factor", "E7:E6", "v0", "--at", "5", "--format", "json"]) == 0
        data = _json(capsys)
        assert data["c_w"] == "ξ(s-8)·ξ(s-4)·ξ(s)/(ξ(s+1)·ξ(s+5)·ξ(s+9))"
        assert data["order"] == -1
        assert data["residue"] == "R·ξ(4)·ξ(5)/(ξ(6)·ξ(10)·ξ(14))"

    def test_value_of_v1(self, capsys):
        assert main(["gk", "factor", "E7:E6", "v1", "--at", "5", "--format", "json"]) == 0
        assert _json(capsys)["value"] == "ξ(5)·ξ(9)/(ξ(10)·ξ(14))"

    def test_word_and_double_pole(self, capsys):
        assert main(["gk", "factor", "D3,D2", "213", "--at", "1", "--format", "json"]) == 0
        data = _json(capsys)
        assert data["order"] == -2 and "leading" in data

    def test_half_integer_point(self, capsys):
        assert main(["gk", "factor", "E8:E7", "v0", "--at", "19/2", "--format", "json"]) == 0
        assert _json(capsys)["at"] == "19/2"


class TestAuditAndExpand:
    def test_ct_audit(self, capsys):
        assert main(["ct", "audit", "E6/D5", "--format", "json"]) == 0
        data = _json(capsys)
        assert data["passed"] and data["problems"] == []
        assert [t["class"] for t in data["terms"]].count("v0-term") == 1

    def test_ct_audit_markdown(self, capsys):
        assert main(["ct", "audit", "D5"]) == 0
        assert capsys.readouterr().out.rstrip().endswith("audit passed")

    def test_expand_full(self, capsys):
        assert main(["decomp", "expand", "D6:D5", "--depth", "full", "--format", "json"]) == 0
        data = _json(capsys)
        assert len(data["children"]) == 2 * 3 + 1
        assert data["children"][-1] == {"coefficient": "|Δ|^3/2", "functional": "θ[D3,D2]", "path": ["B", "B", "B"]}

    def test_expand_transitions(self, capsys):
        assert main(["decomp", "expand", "E7:D6", "--transitions"]) == 0
        assert "|Δ|^3/2·θ[D6,D5]∘B∘T" in capsys.readouterr().out


class TestGolden:
    def test_transition_report_golden(self, tmp_path):
        out = tmp_path / "transition.json"
        assert main(["verify", "transition", "--format", "json", "--output", str(out)]) == 0
        golden = Path(__file__).parent / "golden" / "transition.json"
        assert out.read_text(encoding="utf-8") == golden.read_text(encoding="utf-8")
