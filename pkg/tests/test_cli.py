import csv
import json

import pytest
from click.testing import CliRunner

from ctl.cli.main import cli
from ctl.core.errors import BudgetExceededError
from ctl.core.graph6 import emit_graph6, parse_graph6
from ctl.jobs import batch
from ctl.services.catalog import named_graph


def g6(name: str) -> str:
    return emit_graph6(named_graph(name)).decode("ascii")


@pytest.fixture
def runner():
    return CliRunner()


class TestClassify:
    """Tests for ``ctl classify``."""

    def test_json_lines(self, runner):
        stdin = "\n".join(g6(name) for name in ("K3", "C5", "K222")) + "\n"
        result = runner.invoke(cli, ["classify"], input=stdin)
        assert result.exit_code == 0, result.output
        records = [json.loads(line) for line in result.stdout.splitlines()]
        assert [r["class"] for r in records] == ["LAMBDA", "THETA", "PI"]
        assert [r["index"] for r in records] == [1, 2, 3]

    def test_human_format(self, runner):
        result = runner.invoke(cli, ["--format", "human", "classify"], input=g6("K4") + "\n")
        assert result.exit_code == 0
        assert result.stdout.strip() == f"1: {g6('K4')} chi=4 LAMBDA 3/5"

    def test_graph6_format(self, runner):
        result = runner.invoke(cli, ["--format", "graph6", "classify"], input=g6("C7") + "\n")
        assert result.stdout.strip() == f"{g6('C7')}\t0/1"

    def test_certificate_and_check(self, runner):
        result = runner.invoke(cli, ["classify", "--certificate", "--check"], input=g6("W5") + "\n")
        assert result.exit_code == 0
        record = json.loads(result.stdout)
        assert record["checked"] is True
        assert record["witnesses"]["near_acyclic"]["removed_sets"] == [[0]]

    def test_malformed_input_exits_2(self, runner):
        result = runner.invoke(cli, ["classify"], input="Bw\nB!\n")
        assert result.exit_code == 2
        assert "line 2" in result.output

    def test_timeout_exits_2(self, runner, monkeypatch):
        def out_of_time(g, budget):
            raise BudgetExceededError("chromatic_number", 1)

        monkeypatch.setattr(batch, "chromatic_threshold", out_of_time)
        result = runner.invoke(cli, ["--time-budget", "1", "classify"], input="Bw\n")
        assert result.exit_code == 2
        assert json.loads(result.stdout)["error"]["stage"] == "chromatic_number"

    def test_over_cap_header_exits_2(self, runner):
        over_cap = bytes([126, 63 + 1, 63, 63 + 1]).decode("ascii")  # 4097 vertices
        result = runner.invoke(cli, ["classify"], input=f"Bw\n{over_cap}\n")
        assert result.exit_code == 2
        assert "above the cap" in result.output

    def test_bad_configuration(self, runner):
        result = runner.invoke(cli, ["--parallelism", "0", "classify"], input="Bw\n")
        assert result.exit_code == 2


def test_chi(runner):
    stdin = g6("petersen") + "\n" + g6("grotzsch") + "\n"
    result = runner.invoke(cli, ["--format", "human", "chi"], input=stdin)
    assert result.exit_code == 0
    assert result.stdout.splitlines() == ["1: chi=3", "2: chi=4"]


def test_chi_over_cap_header_exits_2(runner):
    over_cap = bytes([126, 63 + 1, 63, 63 + 1]).decode("ascii")
    result = runner.invoke(cli, ["chi"], input=over_cap + "\n")
    assert result.exit_code == 2


class TestVerify:
    def test_all_pass(self, runner):
        result = runner.invoke(cli, ["verify", "C7", "--h-free", "K3", "--min-degree", "2/7", "--chromatic-ge", "3"])
        assert result.exit_code == 0, result.output
        assert result.stdout.count("✅") == 3

    def test_failure_exits_1(self, runner):
        result = runner.invoke(cli, ["verify", "C6", "--chromatic-ge", "3"])
        assert result.exit_code == 1
        assert "❌ chromatic_ge" in result.stdout

    def test_contains_pattern(self, runner):
        result = runner.invoke(cli, ["verify", "K4", "--h-free", "K3", "--json"])
        assert result.exit_code == 1
        data = json.loads(result.stdout)
        assert data["passed"] is False
        assert data["checks"][0]["name"] == "h_free"

    def test_nothing_to_verify(self, runner):
        assert runner.invoke(cli, ["verify", "K3"]).exit_code == 2

    def test_witness_file(self, runner, tmp_path):
        report = tmp_path / "k222.jsonl"
        classified = runner.invoke(cli, ["classify", "--certificate"], input=g6("K222") + "\n")
        report.write_text(classified.stdout)
        result = runner.invoke(cli, ["verify", "K222", "--witness", str(report), "--deep"])
        assert result.exit_code == 0, result.output

    def test_witness_for_wrong_graph(self, runner, tmp_path):
        report = tmp_path / "c5.jsonl"
        report.write_text(runner.invoke(cli, ["classify", "--certificate"], input=g6("C5") + "\n").stdout)
        result = runner.invoke(cli, ["verify", "K3", "--witness", str(report)])
        assert result.exit_code == 1
        assert "outside the graph" in result.stdout


class TestConstruct:
    """Tests for the ``ctl construct`` commands."""

    def test_kneser(self, runner):
        result = runner.invoke(cli, ["construct", "kneser", "5", "2"])
        assert result.exit_code == 0
        assert result.stdout.strip() == "I@Q@YiWw?"

    def test_zykov_edges(self, runner):
        result = runner.invoke(cli, ["construct", "zykov", "--edges", "2", "-r", "3"])
        assert result.exit_code == 0, result.output
        assert parse_graph6(result.stdout.strip()).n == 8

    def test_zykov_trees(self, runner):
        result = runner.invoke(cli, ["construct", "zykov", "--tree", "P3", "--tree", "K2", "-r", "4", "-t", "2"])
        assert result.exit_code == 0, result.output
        assert parse_graph6(result.stdout.strip()).n == 5 + (4 + 1) * 2

    def test_randomized_needs_seed(self, runner):
        result = runner.invoke(cli, ["construct", "borsuk", "--eps", "1/10", "--points", "20"])
        assert result.exit_code == 2
        assert "seed" in result.output

    def test_root_seed_is_used(self, runner):
        direct = runner.invoke(cli, ["construct", "borsuk", "--eps", "1/10", "--points", "20", "--seed", "4"])
        inherited = runner.invoke(cli, ["--seed", "4", "construct", "borsuk", "--eps", "1/10", "--points", "20"])
        assert direct.exit_code == inherited.exit_code == 0
        assert direct.stdout == inherited.stdout

    def test_invalid_parameters(self, runner):
        result = runner.invoke(cli, ["construct", "hajnal", "1", "4", "2"])
        assert result.exit_code == 2
        assert "divide" in result.output

    def test_sidecar_and_recipe_replay(self, runner, tmp_path):
        out = tmp_path / "bh.g6"
        sidecar = tmp_path / "bh.json"
        points = tmp_path / "bh.csv"
        args = ["construct", "borsuk-hajnal", "--eps", "1/20", "--delta", "1/10", "--w-size", "6", "--u-points", "10"]
        args += ["--seed", "9", "-o", str(out), "--sidecar", str(sidecar), "--points-csv", str(points)]
        result = runner.invoke(cli, args)
        assert result.exit_code == 0, result.output

        data = json.loads(sidecar.read_text())
        assert data["recipe"]["family"] == "BORSUK_HAJNAL"
        assert data["recipe"]["params"]["eps"] == "1/20"
        assert data["verified"]["wx_complete"] is True
        assert data["graph6"] == out.read_text().strip()

        with points.open() as handle:
            rows = list(csv.reader(handle))
        assert rows[0] == ["vertex", "label", "x0", "x1", "x2"]
        assert len(rows) == 1 + 10 + 6

        replay = runner.invoke(cli, ["construct", "recipe", str(sidecar)])
        assert replay.exit_code == 0
        assert replay.stdout.strip() == data["graph6"]

    def test_points_csv_without_points(self, runner, tmp_path):
        result = runner.invoke(cli, ["construct", "kneser", "5", "2", "--points-csv", str(tmp_path / "p.csv")])
        assert result.exit_code == 2

    def test_pi_witness(self, runner):
        result = runner.invoke(cli, ["construct", "pi-witness", "K222", "--c", "3", "--seed", "0"])
        assert result.exit_code == 0, result.output
        assert parse_graph6(result.stdout.strip()).n == 14

    def test_blowup_witness(self, runner):
        result = runner.invoke(cli, ["construct", "blowup-witness", "C5", "--c", "3", "--t", "3", "--seed", "0"])
        assert result.exit_code == 0, result.output
        assert parse_graph6(result.stdout.strip()).n == 21

    def test_erdos_from_catalog(self, runner):
        result = runner.invoke(cli, ["construct", "erdos", "4", "4", "--seed", "1"])
        assert result.exit_code == 0
        assert parse_graph6(result.stdout.strip()).n == 11
