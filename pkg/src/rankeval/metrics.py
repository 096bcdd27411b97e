"""Metrics over retained records and dispersion across half-sample slices.

Error bars come from resampled 50% slices of the log: each slice is an
independent uniform half-subset, the metric is computed per slice, and the
reported spread is the sample standard deviation across slices (slices
overlap heavily, so dividing by the number of slices would understate the
dispersion). Relative reports normalize ranker 2 against ranker 1 at 100,
per slice, then average the per-slice ratios.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Iterable, Sequence, TypeVar

from .interleaving import Attribution
from .logs import LogRecord, TruncatedRecord
from .matchers import Method
from .seeds import substream

T = TypeVar("T")


@dataclass(frozen=True, slots=True)
class MetricSample:
    """One metric value measured on one half-sample slice."""

    method: Method
    k: int
    ranker: str
    slice_index: int
    value: float
    matched_count: int


@dataclass(frozen=True, slots=True)
class ComparisonReport:
    """Ranker 2 relative to ranker 1 (pinned at 100) for one method and k.

    ``stderr`` is the across-slice spread of the per-slice ratios;
    ``stderr1_norm`` is ranker 1's own raw-value spread rescaled to the
    100 base, used to decide whether the two error bars are disjoint.
    """

    method: Method
    k: int
    ranker1: str
    ranker2: str
    ranker2_norm: float
    stderr: float
    stderr1_norm: float
    slices: int
    separation: bool

    @property
    def ranker1_norm(self) -> float:
        return 100.0


def mrr_at_k(records: Iterable[LogRecord | TruncatedRecord], k: int) -> float:
    """Mean reciprocal rank of the first click at position <= k.

    Records with no click inside the top k contribute 0 rather than being
    dropped; dropping them would inflate the mean.
    """
    if k < 1:
        raise ValueError("k must be positive")
    records = list(records)
    if not records:
        raise ValueError("no matched queries")
    total = 0.0
    for record in records:
        first = min((p for p in record.clicks if p <= k), default=None)
        if first is not None:
            total += 1.0 / first
    return total / len(records)


def interleave_clicks(attributions: Iterable[Attribution]) -> tuple[int, int]:
    """Total click credit per ranker over matched records."""
    h_a = h_b = 0
    for attr in attributions:
        h_a += attr.h_a
        h_b += attr.h_b
    return h_a, h_b


def half_sample_indices(total: int, num_slices: int, seed: int) -> list[list[int]]:
    """Sorted index sets of floor(total/2) items, one per slice.

    Each slice is sampled without replacement from its own stream keyed by
    (seed, slice index), so slices are independent of each other and of
    processing order.
    """
    if num_slices < 2:
        raise ValueError("num_slices must be at least 2")
    if total < 2:
        raise ValueError("too few records")
    half = total // 2
    slices = []
    for i in range(num_slices):
        rng = substream(seed, "slice", i)
        slices.append(sorted(rng.sample(range(total), half)))
    return slices


def half_sample_slices(
    records: Sequence[T], num_slices: int, seed: int
) -> list[list[T]]:
    """Resampled 50% subsets of the records, deterministic given the seed."""
    records = list(records)
    return [
        [records[j] for j in idx]
        for idx in half_sample_indices(len(records), num_slices, seed)
    ]


def summarize(values: Sequence[float]) -> tuple[float, float]:
    """Mean and across-slice sample standard deviation of per-slice values."""
    if len(values) < 2:
        raise ValueError("insufficient slices")
    return statistics.fmean(values), statistics.stdev(values)


def relative_report(
    samples1: Sequence[MetricSample], samples2: Sequence[MetricSample]
) -> ComparisonReport:
    """Normalize ranker 2 against ranker 1 at 100, slice by slice.

    Both sample lists must cover the same method, k, and slice indices.
    The ratio is taken per slice and then summarized, so the error bar has
    the same per-slice semantics as the underlying metric.
    """
    if not samples1 or len(samples1) != len(samples2):
        raise ValueError("mismatched samples: need one sample per slice per ranker")
    s1 = sorted(samples1, key=lambda s: s.slice_index)
    s2 = sorted(samples2, key=lambda s: s.slice_index)
    method, k = s1[0].method, s1[0].k
    if any(s.method != method or s.k != k for s in s1) or any(
        s.method != method or s.k != k for s in s2
    ):
        raise ValueError("mismatched samples: mixed method or k")
    if [s.slice_index for s in s1] != [s.slice_index for s in s2]:
        raise ValueError("mismatched samples: slice indices differ")
    if any(s.value <= 0 for s in s1):
        raise ValueError("degenerate baseline: ranker-1 slice value is not positive")
    ratios = [100.0 * b.value / a.value for a, b in zip(s1, s2)]
    ranker2_norm, spread = summarize(ratios)
    base_mean, base_spread = summarize([s.value for s in s1])
    stderr1_norm = 100.0 * base_spread / base_mean
    if ranker2_norm > 100.0:
        separated = (ranker2_norm - spread) > (100.0 + stderr1_norm)
    elif ranker2_norm < 100.0:
        separated = (ranker2_norm + spread) < (100.0 - stderr1_norm)
    else:
        separated = False
    return ComparisonReport(
        method=method,
        k=k,
        ranker1=s1[0].ranker,
        ranker2=s2[0].ranker,
        ranker2_norm=ranker2_norm,
        stderr=spread,
        stderr1_norm=stderr1_norm,
        slices=len(ratios),
        separation=separated,
    )
