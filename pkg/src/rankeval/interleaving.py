"""Balanced interleaving of two rankings and click-credit attribution.

The interleaved list is built by greedy alternation: whichever ranking has
contributed fewer documents supplies its highest-ranked document not yet
in the output, with the leader going first on ties. A logged truncated
list matches the pair when it equals the interleaving under either leader,
which is symmetric in the two rankers and retains slightly more records
than single-ranker truncated matching whenever the interleavings differ.

Clicks on a matched list are credited by the lowest-click cutoff rule:
take the clicked document that sits deepest in the recorded list, set the
cutoff to the better of its two ranks, and credit each ranker with the
clicked documents inside its own top-cutoff prefix. With a single click
this reduces to "the ranker that ranks the clicked document higher wins".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

from .logs import TruncatedRecord
from .matchers import MatchOutcome, Method
from .seeds import DEFAULT_SEED, substream

Leader = Literal["A", "B"]


@dataclass(frozen=True, slots=True)
class Attribution:
    """Per-query click credit for the two rankers of a matched record."""

    query_id: str
    winner: Literal["A", "B", "tie"]
    h_a: int
    h_b: int


def balanced_interleave(
    ranking_a: Sequence[str], ranking_b: Sequence[str], leader: Leader
) -> list[str]:
    """Merge two rankings of the same doc set into one list by alternation.

    Counters track how many documents each ranking has contributed; every
    step the ranking that is behind (the leader on ties) appends its
    highest-ranked document not yet in the output and advances its counter.
    The result has the same length as the inputs and is a permutation of
    their shared doc set.
    """
    if leader not in ("A", "B"):
        raise ValueError(f"leader must be 'A' or 'B', got {leader!r}")
    a, b = list(ranking_a), list(ranking_b)
    if len(set(a)) != len(a) or sorted(a) != sorted(b):
        raise ValueError("incomparable rankings: A and B must order the same doc set")
    out: list[str] = []
    placed: set[str] = set()
    took_a = took_b = 0
    next_a = next_b = 0  # scan positions; already-placed docs only move them forward
    while len(out) < len(a):
        if took_a < took_b or (took_a == took_b and leader == "A"):
            while a[next_a] in placed:
                next_a += 1
            out.append(a[next_a])
            placed.add(a[next_a])
            took_a += 1
        else:
            while b[next_b] in placed:
                next_b += 1
            out.append(b[next_b])
            placed.add(b[next_b])
            took_b += 1
    return out


def rand_interleave_match(
    trec: TruncatedRecord,
    ranking_a: Sequence[str],
    ranking_b: Sequence[str],
    *,
    seed: int = DEFAULT_SEED,
) -> MatchOutcome:
    """Match the logged truncated list against either leader's interleaving.

    When both leaders produce the same list and it matches, the recorded
    leader is a fair coin from the per-record stream; attribution never
    depends on that coin.
    """
    if sorted(ranking_a) != sorted(trec.top_docs):
        raise ValueError("incomparable rankings: rankings must cover the truncated docs")
    lead_a = balanced_interleave(ranking_a, ranking_b, "A")
    lead_b = balanced_interleave(ranking_a, ranking_b, "B")
    top = list(trec.top_docs)
    if top == lead_a:
        if lead_a == lead_b:
            coin = substream(seed, "leader", trec.query_id).random()
            leader: Leader = "A" if coin < 0.5 else "B"
        else:
            leader = "A"
        return MatchOutcome(trec.query_id, True, Method.RAND_INTERLEAVE, trec.k, leader)
    if top == lead_b:
        return MatchOutcome(trec.query_id, True, Method.RAND_INTERLEAVE, trec.k, "B")
    return MatchOutcome(trec.query_id, False, Method.RAND_INTERLEAVE, trec.k)


def attribute_clicks(
    trec: TruncatedRecord, ranking_a: Sequence[str], ranking_b: Sequence[str]
) -> Attribution:
    """Credit the logged clicks of a matched record to the two rankers.

    Clickless records are ties with zero credit on both sides.
    """
    if sorted(ranking_a) != sorted(trec.top_docs) or sorted(ranking_b) != sorted(
        trec.top_docs
    ):
        raise ValueError("incomparable rankings: rankings must cover the truncated docs")
    if any(not 1 <= p <= trec.k for p in trec.clicks):
        raise ValueError("click outside truncation")
    if not trec.clicks:
        return Attribution(trec.query_id, "tie", 0, 0)
    clicked = {trec.top_docs[p - 1] for p in trec.clicks}
    lowest = trec.top_docs[max(trec.clicks) - 1]
    rank_a = {doc: i for i, doc in enumerate(ranking_a, start=1)}
    rank_b = {doc: i for i, doc in enumerate(ranking_b, start=1)}
    cutoff = min(rank_a[lowest], rank_b[lowest])
    h_a = sum(1 for doc in clicked if rank_a[doc] <= cutoff)
    h_b = sum(1 for doc in clicked if rank_b[doc] <= cutoff)
    winner = "A" if h_a > h_b else "B" if h_b > h_a else "tie"
    return Attribution(trec.query_id, winner, h_a, h_b)
