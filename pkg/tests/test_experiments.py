import io

import numpy as np
import pytest

from graphsim import (
    METHOD_ORDER,
    CnfInstance,
    ParseError,
    SubgraphExperimentConfig,
    chain_formula,
    format_dimacs,
    knn_classify,
    parse_dimacs,
    pigeonhole_formula,
    read_manifest,
    read_report_csv,
    read_report_json,
    run_subgraph_experiment,
    variable_clause_graph,
    write_report_csv,
    write_report_json,
)

TINY = dict(n=8, m_values=(7, 8), p_values=(0.3,), trials=3, seed=5)


class TestConfig:
    def test_defaults_match_reference_grid(self):
        cfg = SubgraphExperimentConfig()
        assert cfg.n == 15
        assert cfg.m_values == (8, 9, 10, 11, 12, 13, 14, 15)
        assert cfg.p_values == (0.2, 0.4, 0.6, 0.8)
        assert cfg.trials == 50
        assert cfg.methods == METHOD_ORDER

    def test_methods_normalized_to_canonical_order(self):
        cfg = SubgraphExperimentConfig(methods=("ZV", "NM"))
        assert cfg.methods == ("NM", "ZV")

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"n": 0},
            {"m_values": ()},
            {"m_values": (16,)},  # larger than n
            {"m_values": (0,)},
            {"p_values": (1.5,)},
            {"trials": 0},
            {"methods": ("NM", "PageRank")},
            {"methods": ()},
        ],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValueError):
            SubgraphExperimentConfig(**kwargs)


class TestHarness:
    def test_tiny_run_shape_and_order(self):
        rep = run_subgraph_experiment(SubgraphExperimentConfig(**TINY))
        keys = [(c.method, c.m, c.p) for c in rep.cells]
        expected = [(meth, m, 0.3) for meth in METHOD_ORDER for m in (7, 8)]
        assert keys == expected
        assert [s.method for s in rep.overall] == list(METHOD_ORDER)
        assert set(rep.wall_times) == set(METHOD_ORDER)
        for c in rep.cells:
            assert c.trials == 3
            assert 0 <= c.successes <= c.trials
            assert c.accuracy == c.successes / c.trials

    def test_full_size_planting_always_recovered(self):
        rep = run_subgraph_experiment(SubgraphExperimentConfig(**TINY))
        for c in rep.cells:
            if c.m == 8:
                assert c.accuracy == 1.0

    def test_same_seed_same_report(self):
        a = run_subgraph_experiment(SubgraphExperimentConfig(**TINY))
        b = run_subgraph_experiment(SubgraphExperimentConfig(**TINY))
        assert a == b

    def test_parallel_equals_serial(self):
        a = run_subgraph_experiment(SubgraphExperimentConfig(**TINY), jobs=1)
        b = run_subgraph_experiment(SubgraphExperimentConfig(**TINY), jobs=3)
        assert a == b

    def test_different_seed_differs(self):
        a = run_subgraph_experiment(SubgraphExperimentConfig(**TINY))
        kwargs = dict(TINY, seed=6)
        b = run_subgraph_experiment(SubgraphExperimentConfig(**kwargs))
        assert a != b

    def test_method_subset(self):
        cfg = SubgraphExperimentConfig(methods=("ZV", "Blondel"), **TINY)
        rep = run_subgraph_experiment(cfg)
        assert {c.method for c in rep.cells} == {"ZV", "Blondel"}


@pytest.fixture(scope="module")
def report():
    return run_subgraph_experiment(SubgraphExperimentConfig(**TINY))


class TestReportFiles:
    def test_csv_roundtrip(self, report, tmp_path):
        p = tmp_path / "r.csv"
        write_report_csv(report, p)
        assert read_report_csv(p) == report

    def test_json_roundtrip(self, report, tmp_path):
        p = tmp_path / "r.json"
        write_report_json(report, p)
        assert read_report_json(p) == report

    def test_files_exclude_wall_times(self, report, tmp_path):
        cp, jp = tmp_path / "r.csv", tmp_path / "r.json"
        write_report_csv(report, cp)
        write_report_json(report, jp)
        for text in (cp.read_text(), jp.read_text()):
            assert "wall" not in text
            assert "time" not in text

    def test_csv_headers(self, report, tmp_path):
        p = tmp_path / "r.csv"
        write_report_csv(report, p)
        lines = p.read_text().splitlines()
        assert lines[0] == "method,m,p,trials,successes,accuracy"
        assert "overall" in lines
        assert lines[lines.index("overall") + 1] == "method,trials,successes,accuracy"

    def test_csv_rejects_corrupt_rows(self, report, tmp_path):
        p = tmp_path / "r.csv"
        write_report_csv(report, p)
        broken = tmp_path / "broken.csv"
        broken.write_text(p.read_text().replace("NM,7,0.3,3", "NM,7,0.3"))
        with pytest.raises(ParseError):
            read_report_csv(broken)


DIMACS_TOLERANT = """\
c a comment before the header
c
p cnf 4 3
1 -2 0
-1 2
3 0
4 -3 0
%
0
this trailer is ignored
"""


class TestDimacs:
    def test_parse_tolerant_layout(self):
        f = parse_dimacs(io.StringIO(DIMACS_TOLERANT))
        assert f.num_vars == 4
        assert f.clauses == ((1, -2), (-1, 2, 3), (4, -3))

    def test_percent_line_ends_instance(self):
        f = parse_dimacs(io.StringIO("p cnf 1 1\n1 0\n%\nnot parsed 99 0\n"))
        assert f.clauses == ((1,),)

    def test_unterminated_final_clause_accepted(self):
        f = parse_dimacs(io.StringIO("p cnf 2 1\n1 2\n"))
        assert f.clauses == ((1, 2),)

    def test_clause_count_mismatch_warns(self):
        with pytest.warns(UserWarning, match="clause"):
            parse_dimacs(io.StringIO("p cnf 2 5\n1 0\n"))

    @pytest.mark.parametrize(
        "text,fragment",
        [
            ("1 2 0\n", "header"),
            ("p cnf x 1\n1 0\n", "header"),
            ("p cnf 2 1\np cnf 2 1\n", "header"),
            ("p cnf 2 1\n1 5 0\n", "range"),
            ("p cnf 2 1\n0\n", "empty clause"),
            ("p cnf 2 1\n1 junk 0\n", "literal"),
        ],
    )
    def test_parse_errors(self, text, fragment):
        with pytest.raises(ParseError) as info:
            parse_dimacs(io.StringIO(text))
        assert fragment in str(info.value)

    def test_roundtrip(self):
        for f in (chain_formula(5), pigeonhole_formula(3)):
            again = parse_dimacs(io.StringIO(format_dimacs(f)))
            assert again.num_vars == f.num_vars
            assert again.clauses == f.clauses

    def test_instance_validation(self):
        with pytest.raises(ValueError):
            CnfInstance(2, ((),))  # empty clause
        with pytest.raises(ValueError):
            CnfInstance(2, ((0,),))  # zero literal
        with pytest.raises(ValueError):
            CnfInstance(2, ((3,),))  # out of range


class TestFormulaGenerators:
    def test_chain_structure(self):
        f = chain_formula(4)
        assert f.num_vars == 4
        assert f.clauses == ((-1, 2), (-2, 3), (-3, 4))
        with pytest.raises(ValueError):
            chain_formula(1)

    def test_pigeonhole_counts(self):
        f = pigeonhole_formula(2)
        assert f.num_vars == 6  # 3 pigeons x 2 holes
        # 3 pigeon clauses + 2 holes x 3 pigeon pairs
        assert len(f.clauses) == 9
        wide = pigeonhole_formula(2, pigeons=5)
        assert wide.num_vars == 10
        assert len(wide.clauses) == 5 + 2 * 10


class TestVariableClauseGraph:
    def test_bipartite_colors_and_edges(self):
        g = variable_clause_graph(chain_formula(2))  # one clause (-1, 2)
        assert g.n == 3
        assert g.colors == (0, 0, 1)
        assert g.edges == {(0, 2), (2, 0), (1, 2), (2, 1)}

    def test_polarity_mode_orients_edges(self):
        g = variable_clause_graph(chain_formula(2), polarity_mode=True)
        # negative literal: clause -> variable; positive: variable -> clause
        assert g.edges == {(2, 0), (1, 2)}

    def test_duplicate_occurrences_collapse(self):
        f = CnfInstance(2, ((1, -1, 2),))
        g = variable_clause_graph(f)
        assert g.edges == {(0, 2), (2, 0), (1, 2), (2, 1)}
        gp = variable_clause_graph(f, polarity_mode=True)
        assert gp.edges == {(0, 2), (2, 0), (1, 2)}


class TestManifest:
    def test_reads_relative_paths_and_labels(self, tmp_path):
        sub = tmp_path / "data"
        sub.mkdir()
        (sub / "a.cnf").write_text(format_dimacs(chain_formula(3)))
        (sub / "b.cnf").write_text(format_dimacs(pigeonhole_formula(2)))
        man = tmp_path / "corpus.txt"
        man.write_text("# comment\ndata/a.cnf easy\n\ndata/b.cnf hard\n")
        corpus = read_manifest(man)
        assert [c.label for c in corpus] == ["easy", "hard"]
        assert corpus[0].name == "data/a.cnf"
        assert corpus[0].num_vars == 3

    def test_rejects_malformed_line(self, tmp_path):
        man = tmp_path / "corpus.txt"
        man.write_text("lonely-field\n")
        with pytest.raises(ParseError):
            read_manifest(man)

    def test_missing_file_raises_oserror(self, tmp_path):
        man = tmp_path / "corpus.txt"
        man.write_text("ghost.cnf label\n")
        with pytest.raises(OSError):
            read_manifest(man)


def _labeled(f, label, name):
    import dataclasses

    return dataclasses.replace(f, label=label, name=name)


class TestKnnClassify:
    def corpus(self):
        out = []
        for n in (3, 4, 5, 6):
            out.append(_labeled(chain_formula(n), "chain", f"chain{n}"))
        for h, p in ((2, 3), (2, 4), (3, 4), (3, 5)):
            out.append(_labeled(pigeonhole_formula(h, p), "hole", f"php{h}_{p}"))
        return out

    def test_separates_two_families(self):
        result = knn_classify(self.corpus(), k=3)
        assert result.accuracy == 1.0
        names = [name for name, _, _ in result.predictions]
        assert names == [c.name for c in self.corpus()]

    def test_tied_votes_break_by_label(self):
        # two identical neighbors with different labels: equal votes and
        # equal summed similarity, so the smaller label must win
        corpus = [
            _labeled(chain_formula(3), "b", "x1"),
            _labeled(chain_formula(3), "a", "x2"),
            _labeled(chain_formula(3), "zz", "x3"),
        ]
        result = knn_classify(corpus, k=2)
        assert result.predictions[2][2] == "a"

    def test_validation(self):
        corpus = self.corpus()
        with pytest.raises(ValueError):
            knn_classify(corpus[:1], k=1)
        with pytest.raises(ValueError):
            knn_classify(corpus, k=0)
        with pytest.raises(ValueError):
            knn_classify(corpus, k=len(corpus))
        unlabeled = corpus + [chain_formula(7)]
        with pytest.raises(ValueError):
            knn_classify(unlabeled, k=1)
