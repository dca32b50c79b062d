import json

import pytest

from franklbip import cli
from franklbip.graphs import matching_graph, parse_graph, serialize_graph


def run(capsys, *argv):
    rc = cli.main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


GRID_TEXT = "m,n,p,delta\n3,3,0.5,0.0\n4,2,0.5,0.1\n2,4,0.8,0.0\n"


class TestSample:
    def test_same_seed_twice_identical(self, capsys, tmp_path):
        a = tmp_path / "a.graph"
        b = tmp_path / "b.graph"
        assert run(capsys, "sample", "-m", "6", "-n", "6", "-p", "0.5",
                   "--seed", "7", "-o", str(a))[0] == 0
        assert run(capsys, "sample", "-m", "6", "-n", "6", "-p", "0.5",
                   "--seed", "7", "-o", str(b))[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_p_one_all_ones(self, capsys):
        rc, out, err = run(capsys, "sample", "-m", "2", "-n", "3", "-p", "1", "--seed", "0")
        assert rc == 0
        assert out == "2 3\n111\n111\n"
        assert err.startswith("config: ")

    def test_round_trip_against_library(self, capsys, tmp_path):
        path = tmp_path / "g.graph"
        rc, _, _ = run(capsys, "sample", "-m", "4", "-n", "4", "-p", "0.5",
                       "--seed", "1", "-o", str(path))
        assert rc == 0
        from franklbip.graphs import Seed, sample_bipartite

        assert parse_graph(path.read_text()) == sample_bipartite(4, 4, 0.5, Seed(1))

    def test_env_seed_default(self, capsys, monkeypatch):
        monkeypatch.setenv(cli.SEED_ENV, "99")
        _, out1, _ = run(capsys, "sample", "-m", "3", "-n", "3", "-p", "0.5")
        monkeypatch.delenv(cli.SEED_ENV)
        _, out2, _ = run(capsys, "sample", "-m", "3", "-n", "3", "-p", "0.5", "--seed", "99")
        assert out1 == out2


class TestStats:
    def test_matching_three(self, capsys, tmp_path):
        path = tmp_path / "m3.graph"
        path.write_text(serialize_graph(matching_graph(3)))
        rc, out, _ = run(capsys, "stats", str(path))
        assert rc == 0
        assert "total: 8" in out
        assert "left_avg: 3/2" in out
        assert "satisfied" in out

    def test_complete_four_two(self, capsys, tmp_path):
        path = tmp_path / "k42.graph"
        path.write_text("4 2\n11\n11\n11\n11\n")
        rc, out, _ = run(capsys, "stats", str(path))
        assert rc == 0
        assert "total: 2" in out
        assert "left_avg: 2" in out

    def test_empty_graph_vacuous(self, capsys, tmp_path):
        path = tmp_path / "e.graph"
        path.write_text("3 2\n00\n00\n00\n")
        rc, out, _ = run(capsys, "stats", str(path))
        assert rc == 0
        assert "left_avg: 3" in out
        assert "vacuous" in out

    def test_json_format(self, capsys, tmp_path):
        path = tmp_path / "m2.graph"
        path.write_text(serialize_graph(matching_graph(2)))
        rc, out, _ = run(capsys, "stats", str(path), "--format", "json")
        payload = json.loads(out)
        assert payload["stats"]["total"] == "4"
        assert payload["left_avg"] == "1/1"
        assert payload["config"]["subcommand"] == "stats"

    def test_parse_error_is_io_exit(self, capsys, tmp_path):
        path = tmp_path / "bad.graph"
        path.write_text("2 2\n1x\n01\n")
        rc, _, err = run(capsys, "stats", str(path))
        assert rc == 1

    def test_missing_file_is_io_exit(self, capsys, tmp_path):
        rc, _, _ = run(capsys, "stats", str(tmp_path / "nothere.graph"))
        assert rc == 1


class TestVerify:
    def test_mssproba_row(self, capsys):
        rc, out, _ = run(capsys, "verify", "mssproba", "-m", "6", "-n", "6",
                         "-p", "0.5", "--l", "2", "--r", "2",
                         "--trials", "3000", "--seed", "3")
        assert rc == 0
        lines = out.strip().split("\n")
        assert lines[0].startswith("# config: ")
        assert lines[1].startswith("lemma_id,")
        assert lines[2].startswith("mssproba,6,6,")
        assert ",consistent," in lines[2]

    def test_unknown_lemma_usage_exit(self, capsys):
        rc, _, err = run(capsys, "verify", "nosuch", "--trials", "5")
        assert rc == 2

    def test_hypothesis_refusal_exit(self, capsys):
        rc, _, err = run(capsys, "verify", "genupper", "-m", "4", "-n", "3",
                         "-p", "0.5", "--l-star", "1", "--r-star", "1", "--trials", "5")
        assert rc == 3
        assert "refused" in err

    def test_informational_override(self, capsys):
        rc, out, _ = run(capsys, "verify", "genupper", "-m", "4", "-n", "3",
                         "-p", "0.5", "--l-star", "1", "--r-star", "1",
                         "--trials", "5", "--informational", "--format", "json")
        assert rc == 0
        payload = json.loads(out)
        assert payload["reports"][0]["outside_hypothesis"] is True

    def test_missing_parameter_usage_exit(self, capsys):
        rc, _, _ = run(capsys, "verify", "mssproba", "-m", "4", "-n", "4",
                       "-p", "0.5", "--trials", "5")
        assert rc == 2


class TestSweep:
    def test_three_rows(self, capsys, tmp_path):
        grid = tmp_path / "grid.csv"
        grid.write_text(GRID_TEXT)
        rc, out, _ = run(capsys, "sweep", str(grid), "--trials", "4", "--seed", "5")
        assert rc == 0
        lines = out.strip().split("\n")
        assert len(lines) == 5  # config + header + 3 rows
        assert lines[1].endswith(",regime")

    def test_reruns_byte_identical(self, capsys, tmp_path):
        grid = tmp_path / "grid.csv"
        grid.write_text(GRID_TEXT)
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        run(capsys, "sweep", str(grid), "--trials", "4", "--seed", "5", "-o", str(out_a))
        run(capsys, "sweep", str(grid), "--trials", "4", "--seed", "5", "-o", str(out_b))
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_malformed_grid(self, capsys, tmp_path):
        grid = tmp_path / "grid.csv"
        grid.write_text("m,n\n3,3\n")
        rc, _, _ = run(capsys, "sweep", str(grid), "--trials", "2")
        assert rc == 1

    def test_fixture_grid_covers_regimes(self, capsys, tmp_path):
        import pathlib

        fixture = pathlib.Path(__file__).parent / "fixtures" / "regime_grid.csv"
        rc, out, _ = run(capsys, "sweep", str(fixture), "--trials", "2", "--seed", "9")
        assert rc == 0
        rows = out.strip().split("\n")[2:]
        regimes = {row.rsplit(",", 1)[1] for row in rows}
        assert regimes == {
            "ConstantRight", "LargeLeft", "Balanced", "HoeffdingBand",
            "EntropyBand", "GiganticRight", "MatchingSaturated",
        }


class TestRegime:
    def test_constant_right_example(self, capsys):
        rc, out, _ = run(capsys, "regime", "-m", "100", "-n", "10", "-p", "0.5")
        assert rc == 0
        assert "regime: ConstantRight" in out

    def test_gigantic_right_example(self, capsys):
        rc, out, _ = run(capsys, "regime", "-m", "20", "-n", str(2 ** 40), "-p", "0.5")
        assert rc == 0
        assert "regime: GiganticRight" in out

    def test_json_derived_quantities(self, capsys):
        rc, out, _ = run(capsys, "regime", "-m", "2", "-n", str(2 ** 30), "-p", "0.5",
                         "--format", "json")
        payload = json.loads(out)
        assert payload["regime"] == "MatchingSaturated"
        assert payload["a"] == 30
        assert payload["thresholds"]["m^3"] == 8.0

    def test_range_error_usage_exit(self, capsys):
        rc, _, _ = run(capsys, "regime", "-m", "0", "-n", "3", "-p", "0.5")
        assert rc == 2


class TestFrankl:
    def test_closure_and_check(self, capsys, tmp_path):
        fam = tmp_path / "fam.txt"
        fam.write_text("0\n1\n")
        rc, out, _ = run(capsys, "frankl", str(fam), "--closure")
        assert rc == 0
        assert "members: 3" in out
        assert "frequency: 2/3" in out
        assert "satisfied: true" in out

    def test_not_closed_without_flag(self, capsys, tmp_path):
        fam = tmp_path / "fam.txt"
        fam.write_text("0\n1\n")
        rc, _, err = run(capsys, "frankl", str(fam))
        assert rc == 2
        assert "union-closed" in err

    def test_json(self, capsys, tmp_path):
        fam = tmp_path / "fam.txt"
        fam.write_text("\n".join(
            ",".join(str(v) for v in range(4) if mask >> v & 1) or "-"
            for mask in range(1, 16)
        ) + "\n")
        rc, out, _ = run(capsys, "frankl", str(fam), "--format", "json")
        payload = json.loads(out)
        assert payload["frequency"] == "8/15"
        assert payload["satisfied"] is True

    def test_parse_error(self, capsys, tmp_path):
        fam = tmp_path / "fam.txt"
        fam.write_text("a,b\n")
        rc, _, _ = run(capsys, "frankl", str(fam))
        assert rc == 1


class TestUsage:
    def test_no_subcommand(self, capsys):
        assert cli.main([]) == 2

    def test_bad_flag(self, capsys):
        assert cli.main(["sample", "--bogus"]) == 2
