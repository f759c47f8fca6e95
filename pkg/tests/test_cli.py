import json

import pytest

from graphsim import chain_formula, format_dimacs, format_graph, pigeonhole_formula
from graphsim.cli import main


@pytest.fixture()
def graph_files(tmp_path, path3, g6):
    pa = tmp_path / "a.graph"
    pb = tmp_path / "b.graph"
    pa.write_text(format_graph(path3))
    pb.write_text(format_graph(g6))
    return str(pa), str(pb)


class TestNodeSim:
    def test_matrix_on_stdout_metadata_on_stderr(self, graph_files, capsys):
        assert main(["node-sim", *graph_files]) == 0
        out, err = capsys.readouterr()
        rows = out.strip().splitlines()
        assert len(rows) == 3
        assert all(len(r.split(",")) == 6 for r in rows)
        assert rows[0].split(",")[0] == "0.681847"
        assert "iterations=" in err and "converged=true" in err

    def test_method_flags(self, graph_files, capsys):
        for method in ("blondel", "zv"):
            assert main(["node-sim", *graph_files, "--method", method]) == 0
            out, _ = capsys.readouterr()
            assert len(out.strip().splitlines()) == 3

    def test_complement_flag_rejected_for_baselines(self, graph_files, capsys):
        rc = main(["node-sim", *graph_files, "--method", "zv", "--complement", "on"])
        assert rc == 2
        _, err = capsys.readouterr()
        assert err.startswith("error:")

    def test_missing_file_is_input_error(self, graph_files, capsys):
        rc = main(["node-sim", graph_files[0], "no-such.graph"])
        assert rc == 1
        _, err = capsys.readouterr()
        assert "error:" in err

    def test_malformed_file_reports_line(self, tmp_path, graph_files, capsys):
        bad = tmp_path / "bad.graph"
        bad.write_text("graph 2\nedge 0 9\n")
        rc = main(["node-sim", graph_files[0], str(bad)])
        assert rc == 1
        _, err = capsys.readouterr()
        assert "bad.graph:2:" in err

    def test_unknown_flag_exits_two(self, graph_files):
        with pytest.raises(SystemExit) as info:
            main(["node-sim", *graph_files, "--method", "bogus"])
        assert info.value.code == 2


class TestGraphSim:
    def test_scalar_output(self, graph_files, capsys):
        assert main(["graph-sim", *graph_files]) == 0
        out, _ = capsys.readouterr()
        assert out.strip() == "0.594034"

    def test_show_matching(self, graph_files, capsys):
        assert main(["graph-sim", *graph_files, "--show-matching"]) == 0
        out, _ = capsys.readouterr()
        lines = out.strip().splitlines()
        assert lines[0] == "0.594034"
        assert lines[1:] == ["0,0,0.681847", "1,4,0.400137", "2,5,0.700117"]

    def test_variants(self, graph_files, capsys):
        assert main(["graph-sim", *graph_files, "--variant", "max"]) == 0
        out, _ = capsys.readouterr()
        assert out.strip() == "0.297017"
        assert main(["graph-sim", *graph_files, "--variant", "avg"]) == 0
        out, _ = capsys.readouterr()
        assert float(out.strip()) == pytest.approx(0.1925, abs=1e-3)


class TestExperiment:
    ARGS = [
        "experiment", "--n", "8", "--m", "7,8", "--p", "0.3", "--trials", "2",
        "--methods", "ZV,Blondel", "--seed", "9",
    ]

    def test_summary_and_files(self, tmp_path, capsys):
        prefix = str(tmp_path / "run")
        assert main(self.ARGS + ["--out", prefix]) == 0
        out, err = capsys.readouterr()
        lines = out.strip().splitlines()
        assert lines[0] == "method,overall_accuracy,successes,trials,wall_time_s"
        assert len(lines) == 3
        assert "wrote" in err
        csv_text = (tmp_path / "run.csv").read_text()
        assert csv_text.startswith("method,m,p,trials,successes,accuracy\n")
        data = json.loads((tmp_path / "run.json").read_text())
        assert set(data) == {"cells", "overall"}

    def test_repeated_runs_write_identical_files(self, tmp_path, capsys):
        pa, pb = str(tmp_path / "x"), str(tmp_path / "y")
        assert main(self.ARGS + ["--out", pa]) == 0
        assert main(self.ARGS + ["--jobs", "2", "--out", pb]) == 0
        capsys.readouterr()
        assert (tmp_path / "x.csv").read_bytes() == (tmp_path / "y.csv").read_bytes()
        assert (tmp_path / "x.json").read_bytes() == (tmp_path / "y.json").read_bytes()

    def test_bad_grid_is_config_error(self, capsys):
        rc = main(["experiment", "--n", "5", "--m", "9"])
        assert rc == 2
        _, err = capsys.readouterr()
        assert "error:" in err


class TestClassify:
    @pytest.fixture()
    def manifest(self, tmp_path):
        d = tmp_path / "cnf"
        d.mkdir()
        rows = []
        for n in (3, 4, 5):
            (d / f"c{n}.cnf").write_text(format_dimacs(chain_formula(n)))
            rows.append(f"cnf/c{n}.cnf chain")
        for h in (2, 3, 4):
            (d / f"p{h}.cnf").write_text(format_dimacs(pigeonhole_formula(h)))
            rows.append(f"cnf/p{h}.cnf hole")
        man = tmp_path / "corpus.txt"
        man.write_text("\n".join(rows) + "\n")
        return str(man)

    def test_predictions_table(self, manifest, capsys):
        assert main(["classify", manifest, "--k", "3"]) == 0
        out, _ = capsys.readouterr()
        lines = out.strip().splitlines()
        assert lines[0] == "name,label,predicted"
        assert len(lines) == 8  # 6 rows + header + accuracy
        assert lines[-1].startswith("accuracy,")

    def test_polarity_flag_runs(self, manifest, capsys):
        assert main(["classify", manifest, "--k", "1", "--polarity", "on"]) == 0
        out, _ = capsys.readouterr()
        assert out.splitlines()[-1].startswith("accuracy,")

    def test_bad_k_is_config_error(self, manifest, capsys):
        assert main(["classify", manifest, "--k", "99"]) == 2

    def test_repeat_runs_identical(self, manifest, capsys):
        assert main(["classify", manifest, "--k", "3"]) == 0
        first = capsys.readouterr().out
        assert main(["classify", manifest, "--k", "3"]) == 0
        second = capsys.readouterr().out
        assert first == second
