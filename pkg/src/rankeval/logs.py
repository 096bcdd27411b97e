"""Domain types for uniformly randomized interaction logs.

A log record captures one query: the candidate documents, the uniformly
shuffled order in which they were shown, and the 1-based positions the
user clicked. Logs are stored as JSONL, one record per line:

    {"query_id": "q1",
     "candidates": [{"doc_id": "d1", "relevance": 0.7, "scores": {"bm25": 1.2}}],
     "presented": ["d1"],
     "clicks": [1]}

Unknown fields are preserved on read and round-tripped on write. Clicks
are stored as positions into ``presented`` rather than doc ids; the doc-id
view is derived. All types are immutable, so records can be processed in
parallel without coordination.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from types import MappingProxyType
from typing import Any, Iterable, Iterator, Mapping

_EMPTY_MAP: Mapping[str, Any] = MappingProxyType({})


@dataclass(frozen=True, slots=True)
class Doc:
    """One candidate document for a query.

    ``relevance`` is simulation ground truth in [0, 1] when present;
    ``scores`` carries precomputed per-ranker scores for offline replay.
    """

    doc_id: str
    relevance: float | None = None
    scores: Mapping[str, float] = _EMPTY_MAP
    extra: Mapping[str, Any] = _EMPTY_MAP


@dataclass(frozen=True, slots=True)
class LogRecord:
    """One logged query: candidates, shuffled presentation, clicks."""

    query_id: str
    candidates: tuple[Doc, ...]
    presented: tuple[str, ...]
    clicks: tuple[int, ...] = ()
    extra: Mapping[str, Any] = _EMPTY_MAP

    @property
    def n(self) -> int:
        return len(self.candidates)

    def doc(self, doc_id: str) -> Doc:
        for doc in self.candidates:
            if doc.doc_id == doc_id:
                return doc
        raise KeyError(doc_id)

    def clicked_doc_ids(self) -> tuple[str, ...]:
        """Clicks as doc ids (derived view of the stored positions)."""
        return tuple(self.presented[p - 1] for p in self.clicks)


@dataclass(frozen=True, slots=True)
class TruncatedRecord:
    """The first k presented results of a record, with the surviving clicks."""

    query_id: str
    top_docs: tuple[str, ...]
    clicks: tuple[int, ...] = ()

    @property
    def k(self) -> int:
        return len(self.top_docs)


def validate(record: LogRecord, *, single_click: bool = False) -> list[str]:
    """Check a record against the log invariants.

    Returns a list of violation descriptions; an empty list means the
    record is valid. Violations are returned rather than raised so callers
    can triage bad records in bulk.
    """
    violations: list[str] = []
    ids = [doc.doc_id for doc in record.candidates]
    if any(not i for i in ids):
        violations.append("empty doc_id")
    if len(set(ids)) != len(ids):
        violations.append("duplicate doc_id in candidates")
    for doc in record.candidates:
        if doc.relevance is not None and not 0.0 <= doc.relevance <= 1.0:
            violations.append(f"relevance out of range: {doc.doc_id}")
    if len(set(record.presented)) != len(record.presented):
        violations.append("duplicate in presented")
    if set(record.presented) != set(ids) or len(record.presented) != len(ids):
        violations.append("presented/candidate mismatch")
    if any(not 1 <= p <= record.n for p in record.clicks):
        violations.append("click position out of range")
    if any(b <= a for a, b in zip(record.clicks, record.clicks[1:])):
        violations.append("clicks not strictly increasing")
    if single_click and len(record.clicks) > 1:
        violations.append("multiple clicks in single-click mode")
    return violations


def truncate(record: LogRecord, k: int) -> TruncatedRecord:
    """Keep the first k presented results and the clicks that fall inside.

    Click positions are carried over unchanged. Raises ``ValueError``
    ("record too short") when the record has fewer than k results; callers
    decide whether to skip such records.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if k > record.n:
        raise ValueError(f"record too short: n={record.n} < k={k}")
    return TruncatedRecord(
        query_id=record.query_id,
        top_docs=record.presented[:k],
        clicks=tuple(p for p in record.clicks if p <= k),
    )


_DOC_FIELDS = ("doc_id", "relevance", "scores")
_RECORD_FIELDS = ("query_id", "candidates", "presented", "clicks")


def doc_from_json(obj: Mapping[str, Any]) -> Doc:
    extra = {k: v for k, v in obj.items() if k not in _DOC_FIELDS}
    return Doc(
        doc_id=obj["doc_id"],
        relevance=obj.get("relevance"),
        scores=dict(obj.get("scores") or {}),
        extra=extra or _EMPTY_MAP,
    )


def doc_to_json(doc: Doc) -> dict[str, Any]:
    obj: dict[str, Any] = {"doc_id": doc.doc_id}
    if doc.relevance is not None:
        obj["relevance"] = doc.relevance
    if doc.scores:
        obj["scores"] = dict(doc.scores)
    obj.update(sorted(doc.extra.items()))
    return obj


def record_from_json(obj: Mapping[str, Any]) -> LogRecord:
    extra = {k: v for k, v in obj.items() if k not in _RECORD_FIELDS}
    return LogRecord(
        query_id=obj["query_id"],
        candidates=tuple(doc_from_json(d) for d in obj["candidates"]),
        presented=tuple(obj["presented"]),
        clicks=tuple(obj.get("clicks") or ()),
        extra=extra or _EMPTY_MAP,
    )


def record_to_json(record: LogRecord) -> dict[str, Any]:
    obj: dict[str, Any] = {
        "query_id": record.query_id,
        "candidates": [doc_to_json(d) for d in record.candidates],
        "presented": list(record.presented),
        "clicks": list(record.clicks),
    }
    obj.update(sorted(record.extra.items()))
    return obj


def iter_jsonl(path: str | os.PathLike[str]) -> Iterator[LogRecord]:
    """Yield records from a JSONL log, reporting the line number on failure."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                yield record_from_json(json.loads(line))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}: line {lineno}: bad record ({exc})") from exc


def read_jsonl(path: str | os.PathLike[str]) -> list[LogRecord]:
    return list(iter_jsonl(path))


def write_jsonl(records: Iterable[LogRecord], path: str | os.PathLike[str]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record_to_json(record), ensure_ascii=False))
            fh.write("\n")
