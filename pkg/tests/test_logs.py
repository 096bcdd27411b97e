from __future__ import annotations

import json
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rankeval.logs import (
    Doc,
    LogRecord,
    TruncatedRecord,
    read_jsonl,
    record_from_json,
    record_to_json,
    truncate,
    validate,
    write_jsonl,
)

from statutil import assert_binomial


def make_record(presented, clicks=(), n=None):
    n = n if n is not None else len(presented)
    docs = tuple(Doc(doc_id=f"d{i}") for i in range(1, n + 1))
    return LogRecord("q1", docs, tuple(presented), tuple(clicks))


@st.composite
def log_records(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    perm = draw(st.permutations(list(range(1, n + 1))))
    docs = tuple(Doc(doc_id=f"d{i}") for i in range(1, n + 1))
    presented = tuple(f"d{i}" for i in perm)
    clicks = tuple(
        sorted(draw(st.lists(st.integers(1, n), unique=True, max_size=n)))
    )
    return LogRecord("q", docs, presented, clicks)


class TestValidate:
    def test_valid_record(self):
        assert validate(make_record(["d1", "d2"], clicks=[1])) == []

    def test_duplicate_presented(self):
        record = make_record(["d1", "d1"], n=2)
        assert "duplicate in presented" in validate(record)

    def test_click_out_of_range(self):
        record = make_record(["d1", "d2"], clicks=[3])
        assert "click position out of range" in validate(record)

    def test_duplicate_candidates(self):
        docs = (Doc("d1"), Doc("d1"))
        record = LogRecord("q", docs, ("d1", "d1"))
        assert "duplicate doc_id in candidates" in validate(record)

    def test_empty_doc_id(self):
        record = LogRecord("q", (Doc(""),), ("",))
        assert "empty doc_id" in validate(record)

    def test_relevance_out_of_range(self):
        docs = (Doc("d1", relevance=1.5),)
        record = LogRecord("q", docs, ("d1",))
        assert any(v.startswith("relevance out of range") for v in validate(record))

    def test_presented_candidate_mismatch(self):
        docs = (Doc("d1"), Doc("d2"))
        record = LogRecord("q", docs, ("d1", "d3"))
        assert "presented/candidate mismatch" in validate(record)

    def test_clicks_not_increasing(self):
        record = make_record(["d1", "d2", "d3"], clicks=[2, 2])
        assert "clicks not strictly increasing" in validate(record)

    def test_single_click_mode(self):
        record = make_record(["d1", "d2"], clicks=[1, 2])
        assert validate(record) == []
        assert "multiple clicks in single-click mode" in validate(
            record, single_click=True
        )


class TestTruncate:
    def test_click_outside_cut_is_dropped(self):
        record = make_record(["d3", "d1", "d2"], clicks=[3], n=3)
        trec = truncate(record, 2)
        assert trec.top_docs == ("d3", "d1")
        assert trec.clicks == ()

    def test_click_inside_cut_is_kept_unchanged(self):
        record = make_record(["d3", "d1", "d2"], clicks=[2], n=3)
        trec = truncate(record, 2)
        assert trec.top_docs == ("d3", "d1")
        assert trec.clicks == (2,)

    def test_too_short(self):
        with pytest.raises(ValueError, match="record too short"):
            truncate(make_record(["d1", "d2"]), 3)

    def test_k_must_be_positive(self):
        with pytest.raises(ValueError, match="k must be positive"):
            truncate(make_record(["d1"]), 0)

    @given(log_records(), st.integers(1, 6))
    def test_prefix_and_click_filter(self, record, k):
        if k > record.n:
            with pytest.raises(ValueError):
                truncate(record, k)
            return
        trec = truncate(record, k)
        assert trec.top_docs == record.presented[:k]
        assert trec.clicks == tuple(p for p in record.clicks if p <= k)
        assert len(trec.clicks) <= len(record.clicks)

    @given(log_records(), st.integers(1, 6))
    def test_idempotent_at_same_k(self, record, k):
        if k > record.n:
            return
        trec = truncate(record, k)
        lifted = LogRecord(
            query_id=trec.query_id,
            candidates=tuple(record.doc(d) for d in trec.top_docs),
            presented=trec.top_docs,
            clicks=trec.clicks,
        )
        again = truncate(lifted, k)
        assert again.top_docs == trec.top_docs
        assert again.clicks == trec.clicks

    def test_uniform_orders_stay_uniform(self, corpus_60k_n3):
        # Every one of the 3! = 6 truncated orders should appear ~1/6 of the time.
        logs, _ = corpus_60k_n3
        counts = Counter(
            tuple(d.rsplit("-d", 1)[1] for d in truncate(r, 3).top_docs)
            for r in logs
        )
        assert len(counts) == 6
        for pattern, count in counts.items():
            assert_binomial(count, len(logs), 1 / 6, label=str(pattern))

    def test_subset_order_uniform_after_truncation(self, corpus_small_n4):
        # At k=2 each ordered pair of distinct docs is one of 4*3 equally
        # likely outcomes of a uniform permutation of 4.
        logs, _ = corpus_small_n4
        counts = Counter(
            tuple(d.rsplit("-d", 1)[1] for d in truncate(r, 2).top_docs)
            for r in logs
        )
        assert len(counts) == 12
        for pattern, count in counts.items():
            assert_binomial(count, len(logs), 1 / 12, label=str(pattern))


class TestJsonl:
    RECORD = {
        "query_id": "q7",
        "candidates": [
            {"doc_id": "d1", "relevance": 0.7, "scores": {"bm25": 1.2}, "lang": "en"},
            {"doc_id": "d2"},
        ],
        "presented": ["d2", "d1"],
        "clicks": [2],
        "session": "s-99",
    }

    def test_round_trip_preserves_unknown_fields(self):
        record = record_from_json(self.RECORD)
        assert record.extra == {"session": "s-99"}
        assert record.candidates[0].extra == {"lang": "en"}
        assert record_to_json(record) == self.RECORD

    def test_file_round_trip_is_byte_stable(self, tmp_path):
        records = [record_from_json(self.RECORD)]
        first = tmp_path / "a.jsonl"
        second = tmp_path / "b.jsonl"
        write_jsonl(records, first)
        write_jsonl(read_jsonl(first), second)
        assert first.read_bytes() == second.read_bytes()

    def test_parse_error_reports_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        good = json.dumps(record_to_json(record_from_json(self.RECORD)))
        path.write_text(good + "\n{not json}\n")
        with pytest.raises(ValueError, match="line 2"):
            read_jsonl(path)

    def test_missing_field_reports_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"query_id": "q1"}\n')
        with pytest.raises(ValueError, match="line 1"):
            read_jsonl(path)


def test_clicked_doc_ids_view():
    record = make_record(["d3", "d1", "d2"], clicks=[1, 3], n=3)
    assert record.clicked_doc_ids() == ("d3", "d2")


def test_truncated_record_k():
    assert TruncatedRecord("q", ("d1", "d2")).k == 2
