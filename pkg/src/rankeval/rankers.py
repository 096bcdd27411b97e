"""Rankers: deterministic scoring rules over a query's candidate documents.

Two built-ins cover the offline use cases. ``ScoreFieldRanker`` replays a
precomputed score stored on each document. ``NoisyOracleRanker`` perturbs
the simulation ground truth with seeded gaussian noise, giving synthetic
rankers of controllable quality (smaller sigma is a better ranker).

CLI designators: ``score:<field>`` and ``oracle:<sigma>:<seed>``.
"""

from __future__ import annotations

from typing import Iterable

from .logs import Doc
from .seeds import unit_normal


class Ranker:
    """A named, deterministic scoring rule over (query_id, doc)."""

    name: str

    def score(self, query_id: str, doc: Doc) -> float:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"


class ScoreFieldRanker(Ranker):
    """Ranks by a precomputed score read from ``Doc.scores``."""

    def __init__(self, field: str):
        self.field = field
        self.name = f"score:{field}"

    def score(self, query_id: str, doc: Doc) -> float:
        try:
            return doc.scores[self.field]
        except KeyError:
            raise ValueError(
                f"unscored document: {doc.doc_id!r} has no {self.field!r} score"
            ) from None


class NoisyOracleRanker(Ranker):
    """Ground-truth relevance plus per-(query, doc) gaussian noise.

    The noise draw is a pure function of (seed, query_id, doc_id), so the
    same triple always yields the same score, across runs and regardless
    of which other documents are in the candidate set. Query-dependent
    noise also guarantees two rankers with different seeds disagree on
    some queries.
    """

    def __init__(self, noise_sigma: float, seed: int):
        if noise_sigma < 0:
            raise ValueError("noise_sigma must be nonnegative")
        self.noise_sigma = noise_sigma
        self.seed = seed
        self.name = f"oracle:{noise_sigma:g}:{seed}"

    def score(self, query_id: str, doc: Doc) -> float:
        if doc.relevance is None:
            raise ValueError(f"no ground truth: doc {doc.doc_id!r} has no relevance")
        if self.noise_sigma == 0:
            return doc.relevance
        return doc.relevance + self.noise_sigma * unit_normal(
            self.seed, query_id, doc.doc_id
        )


def rank(ranker: Ranker, query_id: str, docs: Iterable[Doc]) -> list[str]:
    """Order doc ids by ranker score, best first.

    Ties break by ascending doc_id, so the result is a total, deterministic
    order that never peeks at how the docs happened to be presented.
    """
    docs = list(docs)
    if not docs:
        raise ValueError("docs must be non-empty")
    docs.sort(key=lambda d: (-ranker.score(query_id, d), d.doc_id))
    return [d.doc_id for d in docs]


def parse_ranker(designator: str) -> Ranker:
    """Build a ranker from a CLI designator.

    Supported forms: ``score:<field>`` and ``oracle:<sigma>:<seed>``.
    """
    parts = designator.split(":")
    if parts[0] == "score" and len(parts) == 2 and parts[1]:
        return ScoreFieldRanker(parts[1])
    if parts[0] == "oracle" and len(parts) == 3:
        try:
            sigma, seed = float(parts[1]), int(parts[2])
        except ValueError:
            raise ValueError(f"unknown ranker designator: {designator!r}") from None
        return NoisyOracleRanker(sigma, seed)
    raise ValueError(f"unknown ranker designator: {designator!r}")
