"""Offline comparison of ranking functions on uniformly randomized logs."""

from .interleaving import (
    Attribution,
    attribute_clicks,
    balanced_interleave,
    rand_interleave_match,
)
from .logs import (
    Doc,
    LogRecord,
    TruncatedRecord,
    read_jsonl,
    truncate,
    validate,
    write_jsonl,
)
from .matchers import MatchOutcome, Method, direct_match, trunc_match
from .metrics import (
    ComparisonReport,
    MetricSample,
    half_sample_indices,
    half_sample_slices,
    interleave_clicks,
    mrr_at_k,
    relative_report,
    summarize,
)
from .rankers import NoisyOracleRanker, Ranker, ScoreFieldRanker, parse_ranker, rank
from .seeds import DEFAULT_SEED, substream
from .simulate import (
    ClickModel,
    SimConfig,
    expected_metric_oracle,
    generate_logs,
    retention_oracle,
    sample_queries,
)

__version__ = "0.1.0"

__all__ = [
    "Attribution",
    "ClickModel",
    "ComparisonReport",
    "DEFAULT_SEED",
    "Doc",
    "LogRecord",
    "MatchOutcome",
    "Method",
    "MetricSample",
    "NoisyOracleRanker",
    "Ranker",
    "ScoreFieldRanker",
    "SimConfig",
    "TruncatedRecord",
    "attribute_clicks",
    "balanced_interleave",
    "direct_match",
    "expected_metric_oracle",
    "generate_logs",
    "half_sample_indices",
    "half_sample_slices",
    "interleave_clicks",
    "mrr_at_k",
    "parse_ranker",
    "rand_interleave_match",
    "rank",
    "read_jsonl",
    "relative_report",
    "retention_oracle",
    "sample_queries",
    "substream",
    "summarize",
    "trunc_match",
    "truncate",
    "validate",
    "write_jsonl",
]
