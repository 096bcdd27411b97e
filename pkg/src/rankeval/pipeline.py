"""Corpus-level evaluation shared by the CLI and the test suite.

Match decisions and per-record metric contributions are computed once per
(method, k, ranker) and stored as flat arrays; half-sample slices then
reduce to cheap index sums. Rankings over the full candidate set are
computed once per ranker and reused across cutoffs: restricting a ranking
to a subset gives the same order as reranking the subset, because scores
depend only on (query, doc).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .interleaving import attribute_clicks, rand_interleave_match
from .logs import LogRecord, truncate
from .matchers import Method
from .metrics import MetricSample
from .rankers import Ranker, rank
from .seeds import DEFAULT_SEED

Rankings = list[tuple[str, ...]]


def full_rankings(records: Sequence[LogRecord], ranker: Ranker) -> Rankings:
    """Each record's full candidate ordering under the ranker (scored once)."""
    return [tuple(rank(ranker, r.query_id, r.candidates)) for r in records]


def _first_reciprocal(clicks: Sequence[int], k: int) -> float:
    first = min((p for p in clicks if p <= k), default=None)
    return 1.0 / first if first else 0.0


@dataclass(frozen=True)
class RankedEval:
    """Per-record outcomes of one matching method for one ranker at one k."""

    method: Method
    k: int
    ranker: str
    eligible: np.ndarray
    matched: np.ndarray
    rr: np.ndarray

    @property
    def eligible_count(self) -> int:
        return int(self.eligible.sum())

    @property
    def matched_count(self) -> int:
        return int(self.matched.sum())

    @property
    def retention(self) -> float:
        eligible = self.eligible_count
        if eligible == 0:
            raise ValueError("no eligible records")
        return self.matched_count / eligible

    def mrr(self) -> float:
        """MRR over all matched records (equals mrr_at_k on that subset)."""
        matched = self.matched_count
        if matched == 0:
            raise ValueError("no matched queries")
        return float(self.rr.sum() / matched)

    def mrr_samples(self, slices: Sequence[Sequence[int]]) -> list[MetricSample]:
        """Per-slice MRR over the slice's matched records."""
        samples = []
        for si, idx in enumerate(slices):
            ix = np.asarray(idx, dtype=np.intp)
            matched = int(self.matched[ix].sum())
            if matched == 0:
                raise ValueError("no matched queries")
            value = float(self.rr[ix].sum() / matched)
            samples.append(
                MetricSample(self.method, self.k, self.ranker, si, value, matched)
            )
        return samples


def eval_direct(
    records: Sequence[LogRecord],
    ranker: Ranker,
    k: int,
    rankings: Rankings | None = None,
) -> RankedEval:
    """Direct matching over a corpus: full top-k must equal the logged top-k."""
    if k < 1:
        raise ValueError("k must be positive")
    if rankings is None:
        rankings = full_rankings(records, ranker)
    total = len(records)
    eligible = np.zeros(total, dtype=bool)
    matched = np.zeros(total, dtype=bool)
    rr = np.zeros(total, dtype=float)
    for i, (record, ranking) in enumerate(zip(records, rankings)):
        if record.n < k:
            continue
        eligible[i] = True
        if ranking[:k] != record.presented[:k]:
            continue
        matched[i] = True
        rr[i] = _first_reciprocal(record.clicks, k)
    return RankedEval(Method.DIRECT, k, ranker.name, eligible, matched, rr)


def eval_trunc(
    records: Sequence[LogRecord],
    ranker: Ranker,
    k: int,
    rankings: Rankings | None = None,
) -> RankedEval:
    """Truncated matching over a corpus: rerank only the k logged top docs."""
    if k < 1:
        raise ValueError("k must be positive")
    if rankings is None:
        rankings = full_rankings(records, ranker)
    total = len(records)
    eligible = np.zeros(total, dtype=bool)
    matched = np.zeros(total, dtype=bool)
    rr = np.zeros(total, dtype=float)
    for i, (record, ranking) in enumerate(zip(records, rankings)):
        if record.n < k:
            continue
        eligible[i] = True
        top = record.presented[:k]
        top_set = set(top)
        induced = tuple(d for d in ranking if d in top_set)
        if induced != top:
            continue
        matched[i] = True
        rr[i] = _first_reciprocal(record.clicks, k)
    return RankedEval(Method.TRUNC, k, ranker.name, eligible, matched, rr)


@dataclass(frozen=True)
class DuelEval:
    """Per-record rand-interleaving outcomes for a ranker pair at one k."""

    k: int
    ranker_a: str
    ranker_b: str
    eligible: np.ndarray
    matched: np.ndarray
    h_a: np.ndarray
    h_b: np.ndarray
    winner: np.ndarray  # 0 tie, 1 ranker A, 2 ranker B; meaningful where matched

    @property
    def eligible_count(self) -> int:
        return int(self.eligible.sum())

    @property
    def matched_count(self) -> int:
        return int(self.matched.sum())

    @property
    def retention(self) -> float:
        eligible = self.eligible_count
        if eligible == 0:
            raise ValueError("no eligible records")
        return self.matched_count / eligible

    @property
    def clicks(self) -> tuple[int, int]:
        return int(self.h_a.sum()), int(self.h_b.sum())

    @property
    def wins(self) -> tuple[int, int, int]:
        """(wins A, wins B, ties) over matched records."""
        wins_a = int(((self.winner == 1) & self.matched).sum())
        wins_b = int(((self.winner == 2) & self.matched).sum())
        return wins_a, wins_b, self.matched_count - wins_a - wins_b

    def click_samples(
        self, slices: Sequence[Sequence[int]]
    ) -> tuple[list[MetricSample], list[MetricSample]]:
        """Per-slice attributed-click totals for each side of the duel."""
        samples_a, samples_b = [], []
        for si, idx in enumerate(slices):
            ix = np.asarray(idx, dtype=np.intp)
            matched = int(self.matched[ix].sum())
            samples_a.append(
                MetricSample(
                    Method.RAND_INTERLEAVE,
                    self.k,
                    self.ranker_a,
                    si,
                    float(self.h_a[ix].sum()),
                    matched,
                )
            )
            samples_b.append(
                MetricSample(
                    Method.RAND_INTERLEAVE,
                    self.k,
                    self.ranker_b,
                    si,
                    float(self.h_b[ix].sum()),
                    matched,
                )
            )
        return samples_a, samples_b


def eval_interleave(
    records: Sequence[LogRecord],
    ranker_a: Ranker,
    ranker_b: Ranker,
    k: int,
    *,
    seed: int = DEFAULT_SEED,
    rankings_a: Rankings | None = None,
    rankings_b: Rankings | None = None,
) -> DuelEval:
    """Rand-interleaving over a corpus: match each record, then credit clicks."""
    if k < 1:
        raise ValueError("k must be positive")
    if rankings_a is None:
        rankings_a = full_rankings(records, ranker_a)
    if rankings_b is None:
        rankings_b = full_rankings(records, ranker_b)
    total = len(records)
    eligible = np.zeros(total, dtype=bool)
    matched = np.zeros(total, dtype=bool)
    h_a = np.zeros(total, dtype=np.int64)
    h_b = np.zeros(total, dtype=np.int64)
    winner = np.zeros(total, dtype=np.int8)
    for i, record in enumerate(records):
        if record.n < k:
            continue
        eligible[i] = True
        trec = truncate(record, k)
        top_set = set(trec.top_docs)
        a_k = [d for d in rankings_a[i] if d in top_set]
        b_k = [d for d in rankings_b[i] if d in top_set]
        outcome = rand_interleave_match(trec, a_k, b_k, seed=seed)
        if not outcome.matched:
            continue
        matched[i] = True
        attr = attribute_clicks(trec, a_k, b_k)
        h_a[i] = attr.h_a
        h_b[i] = attr.h_b
        winner[i] = 1 if attr.winner == "A" else 2 if attr.winner == "B" else 0
    return DuelEval(
        k, ranker_a.name, ranker_b.name, eligible, matched, h_a, h_b, winner
    )
