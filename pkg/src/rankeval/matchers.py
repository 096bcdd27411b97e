"""Retention procedures that match logged presentations against a ranker.

``direct_match`` reranks the full candidate set and keeps a record only if
the ranker's top k equals the logged top k. ``trunc_match`` reranks just
the k logged top documents, which retains far more records; the truncated
log is still uniformly randomized, so matching stays fair.

Records with fewer than k results are ineligible rather than unmatched:
both functions raise on them, and evaluation drivers exclude them from
retention denominators.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Literal

from .logs import Doc, LogRecord, TruncatedRecord
from .rankers import Ranker, rank


class Method(str, Enum):
    """Retention method identifiers, as they appear in CSV output."""

    DIRECT = "direct"
    TRUNC = "trunc"
    RAND_INTERLEAVE = "rand_interleave"


@dataclass(frozen=True, slots=True)
class MatchOutcome:
    """Whether one record was retained by a method at cutoff k.

    ``leader`` is set only for matched rand-interleave outcomes: which
    leader's interleaving the recorded list equalled.
    """

    query_id: str
    matched: bool
    method: Method
    k: int
    leader: Literal["A", "B"] | None = None


def direct_match(record: LogRecord, ranker: Ranker, k: int) -> MatchOutcome:
    """Match iff the ranker's top k over all n candidates equals the logged top k."""
    if k < 1:
        raise ValueError("k must be positive")
    if k > record.n:
        raise ValueError(f"record too short: n={record.n} < k={k}")
    order = rank(ranker, record.query_id, record.candidates)
    matched = tuple(order[:k]) == record.presented[:k]
    return MatchOutcome(record.query_id, matched, Method.DIRECT, k)


def trunc_match(
    trec: TruncatedRecord, ranker: Ranker, docs: Iterable[Doc]
) -> MatchOutcome:
    """Match iff the ranker's ordering of the k retained docs equals the log's.

    ``docs`` must be exactly the documents named by ``trec.top_docs``.
    """
    docs = list(docs)
    if sorted(d.doc_id for d in docs) != sorted(trec.top_docs):
        raise ValueError("candidate/truncation mismatch")
    order = rank(ranker, trec.query_id, docs)
    matched = tuple(order) == trec.top_docs
    return MatchOutcome(trec.query_id, matched, Method.TRUNC, trec.k)
