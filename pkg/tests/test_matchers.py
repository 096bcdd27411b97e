from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rankeval.logs import Doc, LogRecord, truncate
from rankeval.matchers import Method, direct_match, trunc_match
from rankeval.pipeline import eval_direct, eval_trunc, full_rankings
from rankeval.rankers import NoisyOracleRanker, ScoreFieldRanker
from rankeval.simulate import retention_oracle

from statutil import assert_binomial


def scored_record(presented, scores, clicks=()):
    docs = tuple(Doc(doc_id=d, scores={"s": v}) for d, v in scores.items())
    return LogRecord("q1", docs, tuple(presented), tuple(clicks))


RANKER = ScoreFieldRanker("s")


class TestDirectMatch:
    def test_identity_matches(self):
        record = scored_record(["d1", "d2"], {"d1": 1.0, "d2": 0.0})
        outcome = direct_match(record, RANKER, 1)
        assert outcome.matched
        assert outcome.method is Method.DIRECT
        assert outcome.leader is None

    def test_mismatch(self):
        record = scored_record(["d2", "d1"], {"d1": 1.0, "d2": 0.0})
        assert not direct_match(record, RANKER, 1).matched

    def test_k_larger_than_n(self):
        record = scored_record(["d1", "d2"], {"d1": 1.0, "d2": 0.0})
        with pytest.raises(ValueError, match="record too short"):
            direct_match(record, RANKER, 3)

    @given(
        st.permutations(["d1", "d2", "d3", "d4"]),
        st.permutations([0.9, 0.7, 0.5, 0.3]),
    )
    def test_match_at_k_implies_match_below(self, presented, score_values):
        scores = dict(zip(["d1", "d2", "d3", "d4"], score_values))
        record = scored_record(presented, scores)
        for k in range(4, 1, -1):
            if direct_match(record, RANKER, k).matched:
                for smaller in range(1, k):
                    assert direct_match(record, RANKER, smaller).matched


class TestTruncMatch:
    def test_k1_always_matches(self):
        record = scored_record(["d2", "d1"], {"d1": 1.0, "d2": 0.0})
        trec = truncate(record, 1)
        outcome = trunc_match(trec, RANKER, [record.doc("d2")])
        assert outcome.matched
        assert outcome.method is Method.TRUNC

    def test_matches_iff_subset_order_agrees(self):
        record = scored_record(["d2", "d3", "d1"], {"d1": 0.2, "d2": 0.9, "d3": 0.5})
        trec = truncate(record, 2)
        docs = [record.doc("d2"), record.doc("d3")]
        assert trunc_match(trec, RANKER, docs).matched
        worse = scored_record(["d3", "d2", "d1"], {"d1": 0.2, "d2": 0.9, "d3": 0.5})
        assert not trunc_match(truncate(worse, 2), RANKER, docs).matched

    def test_candidate_mismatch(self):
        record = scored_record(["d2", "d1"], {"d1": 1.0, "d2": 0.0})
        trec = truncate(record, 1)
        with pytest.raises(ValueError, match="candidate/truncation mismatch"):
            trunc_match(trec, RANKER, [record.doc("d1")])


class TestRetentionLaws:
    """Frequency checks against the enumeration oracle on a 20k corpus."""

    def test_direct_rate(self, corpus_small_n4):
        logs, _ = corpus_small_n4
        ranker = NoisyOracleRanker(0.0, 1)
        rankings = full_rankings(logs, ranker)
        for k in (1, 2, 3):
            ev = eval_direct(logs, ranker, k, rankings)
            expected = retention_oracle(Method.DIRECT, 4, k, rankings[0])
            assert_binomial(
                ev.matched_count, ev.eligible_count, float(expected), f"direct k={k}"
            )

    def test_trunc_rate(self, corpus_small_n4):
        logs, _ = corpus_small_n4
        ranker = NoisyOracleRanker(0.0, 1)
        rankings = full_rankings(logs, ranker)
        for k in (1, 2, 3, 4):
            ev = eval_trunc(logs, ranker, k, rankings)
            expected = retention_oracle(Method.TRUNC, 4, k, list(rankings[0][:k]))
            assert_binomial(
                ev.matched_count, ev.eligible_count, float(expected), f"trunc k={k}"
            )

    def test_rates_do_not_depend_on_ranker(self, corpus_small_n4):
        logs, _ = corpus_small_n4
        for ranker in (NoisyOracleRanker(0.1, 5), NoisyOracleRanker(0.8, 9)):
            ev = eval_trunc(logs, ranker, 3)
            assert_binomial(ev.matched_count, ev.eligible_count, 1 / 6, ranker.name)

    def test_trunc_retains_at_least_direct(self, corpus_small_n4):
        logs, _ = corpus_small_n4
        ranker = NoisyOracleRanker(0.2, 5)
        rankings = full_rankings(logs, ranker)
        for k in (2, 3):
            direct = eval_direct(logs, ranker, k, rankings)
            trunc = eval_trunc(logs, ranker, k, rankings)
            assert trunc.matched_count >= direct.matched_count

    def test_direct_match_implies_trunc_match(self, corpus_small_n4):
        logs, _ = corpus_small_n4
        ranker = NoisyOracleRanker(0.2, 5)
        rankings = full_rankings(logs, ranker)
        for k in (2, 3):
            direct = eval_direct(logs, ranker, k, rankings)
            trunc = eval_trunc(logs, ranker, k, rankings)
            assert bool((~trunc.matched[direct.matched]).sum() == 0)
