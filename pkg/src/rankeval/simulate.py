"""Synthetic randomized logs, click modeling, and brute-force oracles.

``generate_logs`` presents each query's documents in a uniformly random
order (all n! orders equiprobable) and then simulates clicks with a
position-bias model, optionally stopping at the first click so every
record carries at most one. ``expected_metric_oracle`` computes the exact
expected MRR a ranker would earn if its own ordering were presented, and
``retention_oracle`` computes exact match probabilities by enumerating
presentation orders. Both exist to check the evaluation pipeline against
values that never flow through it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Callable, Iterator, Sequence

from .interleaving import balanced_interleave
from .logs import Doc, LogRecord
from .matchers import Method
from .rankers import Ranker, rank
from .seeds import DEFAULT_SEED, substream


def _identity(relevance: float) -> float:
    return relevance


@dataclass(frozen=True, slots=True)
class ClickModel:
    """Position-bias click model with an optional single-click cascade.

    ``position_bias[p-1]`` is the probability of examining position p (it
    must be nonincreasing), and ``click_prob`` maps a document's relevance
    to the probability of clicking it once examined. With ``single_click``
    the scan stops at the first click, so records have at most one click.
    """

    position_bias: tuple[float, ...] = (1.0, 0.6, 0.4, 0.3, 0.25)
    click_prob: Callable[[float], float] = _identity
    single_click: bool = True

    def __post_init__(self) -> None:
        bias = tuple(self.position_bias)
        object.__setattr__(self, "position_bias", bias)
        if not bias:
            raise ValueError("position_bias must be non-empty")
        if any(not 0.0 <= b <= 1.0 for b in bias):
            raise ValueError("position_bias values must lie in [0, 1]")
        if any(later > earlier for earlier, later in zip(bias, bias[1:])):
            raise ValueError("position_bias must be nonincreasing")


@dataclass(frozen=True, slots=True)
class SimConfig:
    """Shape of a synthetic randomized log.

    Relevances are drawn i.i.d. uniformly from ``relevance_grid``; the
    discrete grid keeps oracle enumeration and test fixtures exact.
    """

    num_queries: int
    n: int = 5
    relevance_grid: tuple[float, ...] = (0.1, 0.3, 0.5, 0.7, 0.9)
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        object.__setattr__(self, "relevance_grid", tuple(self.relevance_grid))
        if self.num_queries < 1:
            raise ValueError("num_queries must be at least 1")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not self.relevance_grid:
            raise ValueError("relevance_grid must be non-empty")
        if any(not 0.0 <= r <= 1.0 for r in self.relevance_grid):
            raise ValueError("relevance_grid values must lie in [0, 1]")


def _query_stream(cfg: SimConfig) -> Iterator[tuple[str, tuple[Doc, ...], "random.Random"]]:
    """Per-query docs plus the query's RNG, positioned after the relevance draws."""
    grid = cfg.relevance_grid
    for qi in range(cfg.num_queries):
        rng = substream(cfg.seed, "query", qi)
        query_id = f"q{qi:07d}"
        docs = tuple(
            Doc(doc_id=f"{query_id}-d{j}", relevance=rng.choice(grid))
            for j in range(cfg.n)
        )
        yield query_id, docs, rng


def sample_queries(cfg: SimConfig) -> Iterator[tuple[str, tuple[Doc, ...]]]:
    """The query population of a config: ids and docs, without interactions.

    Log generation and the expected-metric oracle both draw from this
    population, so one config pins down one reproducible set of queries.
    """
    for query_id, docs, _ in _query_stream(cfg):
        yield query_id, docs


def generate_logs(cfg: SimConfig, model: ClickModel | None = None) -> list[LogRecord]:
    """Simulate a uniformly randomized log: shuffle, then click.

    Each query draws from its own stream keyed by (seed, query index), so
    generation is reproducible record by record and identical configs yield
    byte-identical JSONL.
    """
    if model is None:
        model = ClickModel()
    if len(model.position_bias) < cfg.n:
        raise ValueError(
            f"position_bias has {len(model.position_bias)} entries but n={cfg.n}"
        )
    bias = model.position_bias
    click_prob = model.click_prob
    single_click = model.single_click
    records = []
    for query_id, docs, rng in _query_stream(cfg):
        presented = [doc.doc_id for doc in docs]
        rng.shuffle(presented)
        relevance = {doc.doc_id: doc.relevance for doc in docs}
        clicks = []
        for pos, doc_id in enumerate(presented, start=1):
            theta = bias[pos - 1] * click_prob(relevance[doc_id])
            if rng.random() < theta:
                clicks.append(pos)
                if single_click:
                    break
        records.append(LogRecord(query_id, docs, tuple(presented), tuple(clicks)))
    return records


def expected_metric_oracle(
    ranker: Ranker, cfg: SimConfig, model: ClickModel, k: int
) -> float:
    """Exact expected MRR@k if the ranker's own ordering were presented.

    Per query, the chance the first click lands at position p is the
    product of no-click probabilities before p times the click probability
    at p; the expectation accumulates 1/p over p <= k and averages over the
    config's query population. No simulation is involved, so this value is
    independent of the matching pipeline it is used to check.
    """
    if cfg.n > 7:
        raise ValueError("enumeration infeasible: n must be at most 7")
    if not 1 <= k <= cfg.n:
        raise ValueError(f"k must lie in 1..{cfg.n}")
    if len(model.position_bias) < cfg.n:
        raise ValueError(
            f"position_bias has {len(model.position_bias)} entries but n={cfg.n}"
        )
    total = 0.0
    for query_id, docs in sample_queries(cfg):
        ordering = rank(ranker, query_id, docs)
        relevance = {doc.doc_id: doc.relevance for doc in docs}
        survive = 1.0
        expected = 0.0
        for pos, doc_id in enumerate(ordering[:k], start=1):
            theta = model.position_bias[pos - 1] * model.click_prob(relevance[doc_id])
            expected += survive * theta / pos
            survive *= 1.0 - theta
        total += expected
    return total / cfg.num_queries


def retention_oracle(
    method: Method | str,
    n: int,
    k: int,
    ranking_a: Sequence[str] | None = None,
    ranking_b: Sequence[str] | None = None,
) -> Fraction:
    """Exact probability that a uniformly random presented order matches.

    Computed by enumerating presentation orders rather than by closed
    forms, so it doubles as an independent oracle for the matchers. Bounds:
    direct needs k <= n <= 8; trunc and rand_interleave need k <= 8.
    """
    method = Method(method)
    if k < 1:
        raise ValueError("k must be positive")
    if method is Method.DIRECT:
        if not k <= n <= 8:
            raise ValueError("enumeration infeasible: direct needs k <= n <= 8")
        if ranking_a is None or len(ranking_a) != n:
            raise ValueError("direct needs ranking_a over all n docs")
        top = tuple(ranking_a[:k])
        count = sum(1 for perm in permutations(sorted(ranking_a)) if perm[:k] == top)
        return Fraction(count, math.factorial(n))
    if k > 8:
        raise ValueError("enumeration infeasible: need k <= 8")
    if ranking_a is None or len(ranking_a) != k:
        raise ValueError(f"{method.value} needs ranking_a over the k truncated docs")
    if method is Method.TRUNC:
        target = tuple(ranking_a)
        count = sum(1 for perm in permutations(sorted(ranking_a)) if perm == target)
        return Fraction(count, math.factorial(k))
    if ranking_b is None:
        raise ValueError("rand_interleave needs ranking_b")
    lead_a = tuple(balanced_interleave(ranking_a, ranking_b, "A"))
    lead_b = tuple(balanced_interleave(ranking_a, ranking_b, "B"))
    count = sum(
        1 for perm in permutations(sorted(ranking_a)) if perm in (lead_a, lead_b)
    )
    return Fraction(count, math.factorial(k))
