import pytest
from hypothesis import given
from hypothesis import strategies as st

from rolesearch.evaluation import (
    EvalReport,
    Qrels,
    QrelsError,
    load_qrels,
    precision_at_k,
    run_benchmark,
    save_qrels,
)


class TestLoadQrels:
    def test_relevant_pair(self, tmp_path):
        path = tmp_path / "qrels.txt"
        path.write_text("101 0 doc7 1\n")
        qrels = load_qrels(path)
        assert qrels.is_relevant("101", "doc7")

    def test_zero_relevance_pair(self, tmp_path):
        path = tmp_path / "qrels.txt"
        path.write_text("101 0 doc7 0\n")
        qrels = load_qrels(path)
        assert not qrels.is_relevant("101", "doc7")
        assert ("101", "doc7") in qrels.judgments

    def test_graded_relevance_collapses_to_binary(self, tmp_path):
        path = tmp_path / "qrels.txt"
        path.write_text("101 0 doc7 2\n")
        assert load_qrels(path).is_relevant("101", "doc7")

    def test_duplicate_pair_rejected(self, tmp_path):
        path = tmp_path / "qrels.txt"
        path.write_text("101 0 doc7 1\n101 0 doc7 0\n")
        with pytest.raises(QrelsError, match="qrels.txt:2"):
            load_qrels(path)

    def test_malformed_line_reports_number(self, tmp_path):
        path = tmp_path / "qrels.txt"
        path.write_text("101 0 doc7 1\n101 doc8 1\n")
        with pytest.raises(QrelsError, match="qrels.txt:2"):
            load_qrels(path)

    def test_round_trip(self, tmp_path):
        qrels = Qrels()
        qrels.add("q1", "d1", 1)
        qrels.add("q1", "d2", 0)
        qrels.add("q2", "d1", 1)
        path = tmp_path / "qrels.txt"
        save_qrels(qrels, path)
        assert load_qrels(path).judgments == qrels.judgments


class TestPrecisionAtK:
    def _qrels(self, relevant: set[str], query_id="q") -> Qrels:
        qrels = Qrels()
        for doc_id in relevant:
            qrels.add(query_id, doc_id, 1)
        return qrels

    def test_fifteen_of_twenty(self):
        qrels = self._qrels({f"d{i}" for i in range(15)})
        ranked = [f"d{i}" for i in range(20)]
        assert precision_at_k(ranked, "q", qrels, k=20) == 0.75

    def test_none_relevant(self):
        qrels = self._qrels({"other"})
        assert precision_at_k(["d1", "d2"], "q", qrels, k=20) == 0.0

    def test_all_relevant(self):
        qrels = self._qrels({f"d{i}" for i in range(25)})
        ranked = [f"d{i}" for i in range(20)]
        assert precision_at_k(ranked, "q", qrels, k=20) == 1.0

    def test_unjudged_counts_as_irrelevant(self):
        qrels = self._qrels({"d0"})
        assert precision_at_k(["d0", "mystery"], "q", qrels, k=2) == 0.5

    def test_k_must_be_positive(self):
        with pytest.raises(ValueError):
            precision_at_k(["d0"], "q", self._qrels({"d0"}), k=0)

    @given(st.permutations(list(range(10))))
    def test_permutation_invariant_within_top_k(self, order):
        qrels = self._qrels({f"d{i}" for i in range(0, 10, 2)})
        ranked = [f"d{i}" for i in order]
        assert precision_at_k(ranked, "q", qrels, k=10) == 0.5


class TestRunBenchmark:
    def test_single_cell(self):
        qrels = Qrels()
        qrels.add("q1", "d1", 1)
        report = run_benchmark(
            {"fixed": lambda qid: ["d1", "d2"]}, {"q1": "anything"}, qrels, k=2
        )
        assert report.per_query == {"fixed": {"q1": 0.5}}
        assert report.means == {"fixed": 0.5}

    def test_means_recompute_from_cells(self):
        qrels = Qrels()
        for q, docs in [("q1", ["d1"]), ("q2", ["d2", "d3"])]:
            for d in docs:
                qrels.add(q, d, 1)
        strategies = {
            "a": lambda qid: ["d1", "d2"],
            "b": lambda qid: ["d3", "d4"],
        }
        report = run_benchmark(strategies, {"q1": "x", "q2": "y"}, qrels, k=2)
        for strategy, cells in report.per_query.items():
            assert report.means[strategy] == pytest.approx(
                sum(cells.values()) / len(cells)
            )

    def test_report_renders_and_serializes(self, tmp_path):
        qrels = Qrels()
        qrels.add("q1", "d1", 1)
        report = run_benchmark({"only": lambda qid: ["d1"]}, {"q1": "x"}, qrels, k=1)
        text = report.render_text()
        assert "only" in text and "unjudged" in text
        out = tmp_path / "records.jsonl"
        report.write_records(out)
        lines = out.read_text().splitlines()
        assert len(lines) == 2  # one cell + one mean row

    def test_three_row_comparison_shape(self):
        # the benchmark table shape: three strategies, one mean each
        qrels = Qrels()
        qrels.add("q1", "d1", 1)
        strategies = {
            "keyword": lambda qid: ["d9"],
            "keyword+entity-keyword": lambda qid: ["d1", "d9"],
            "role": lambda qid: ["d1"],
        }
        report = run_benchmark(strategies, {"q1": "x"}, qrels, k=1)
        assert list(report.means) == ["keyword", "keyword+entity-keyword", "role"]
        assert report.means["role"] > report.means["keyword"]
