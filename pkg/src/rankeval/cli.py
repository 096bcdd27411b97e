"""Command-line pipelines: generate, evaluate, compare, report, oracle.

All randomness flows from a single seed (the ``--seed`` flag, falling back
to the ``RANKEVAL_SEED`` environment variable and then a fixed constant),
so two runs with identical flags produce byte-identical outputs.
"""

from __future__ import annotations

import csv
import os
from collections import defaultdict
from pathlib import Path
from typing import IO, Sequence

import click

from .matchers import Method
from .metrics import MetricSample, half_sample_indices, relative_report
from .pipeline import eval_direct, eval_interleave, eval_trunc, full_rankings
from .rankers import parse_ranker
from .logs import read_jsonl, write_jsonl
from .seeds import DEFAULT_SEED
from .simulate import ClickModel, SimConfig, expected_metric_oracle, generate_logs, retention_oracle

_METHOD_BY_FLAG = {
    "direct": Method.DIRECT,
    "trunc": Method.TRUNC,
    "rand-interleave": Method.RAND_INTERLEAVE,
    "rand_interleave": Method.RAND_INTERLEAVE,
}


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    return int(os.environ.get("RANKEVAL_SEED", DEFAULT_SEED))


def _parse_k_range(text: str) -> list[int]:
    """Parse '3' or an inclusive range 'a..b' into a list of cutoffs."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            ks = list(range(int(lo), int(hi) + 1))
        else:
            ks = [int(text)]
    except ValueError:
        raise click.UsageError(f"bad k range: {text!r} (use '3' or '1..4')") from None
    if not ks or any(k < 1 for k in ks):
        raise click.UsageError(f"bad k range: {text!r} (cutoffs must be >= 1)")
    return ks


def _parse_floats(text: str, flag: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise click.UsageError(f"bad {flag}: {text!r} (comma-separated floats)") from None


def _load_records(path: str):
    try:
        records = read_jsonl(path)
    except (OSError, ValueError) as exc:
        raise click.UsageError(str(exc)) from exc
    if not records:
        raise click.UsageError(f"{path}: no records")
    return records


def _ranker_or_usage(designator: str):
    try:
        return parse_ranker(designator)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc


def _writer(stream: IO[str]):
    return csv.writer(stream, lineterminator="\n")


def _write_samples(path: str, samples: Sequence[MetricSample]) -> None:
    with click.open_file(path, "w") as fh:
        writer = _writer(fh)
        writer.writerow(["method", "k", "ranker", "slice_index", "value", "matched_count"])
        for s in samples:
            writer.writerow(
                [s.method.value, s.k, s.ranker, s.slice_index, repr(s.value), s.matched_count]
            )


def _read_samples(paths: Sequence[str]) -> list[MetricSample]:
    samples = []
    for path in paths:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            try:
                for row in reader:
                    samples.append(
                        MetricSample(
                            method=Method(row["method"]),
                            k=int(row["k"]),
                            ranker=row["ranker"],
                            slice_index=int(row["slice_index"]),
                            value=float(row["value"]),
                            matched_count=int(row["matched_count"]),
                        )
                    )
            except (KeyError, TypeError, ValueError) as exc:
                raise click.UsageError(
                    f"{path}: line {reader.line_num}: bad sample row ({exc})"
                ) from exc
    return samples


@click.group()
@click.version_option()
def main() -> None:
    """Offline comparison of ranking functions on uniformly randomized logs."""


@main.command()
@click.option("--queries", type=int, required=True, help="Number of queries to simulate.")
@click.option("--n", type=int, default=5, show_default=True, help="Results per query.")
@click.option("--seed", type=int, default=None, help="Seed (default: RANKEVAL_SEED or 42).")
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Output JSONL path.")
@click.option("--bias", default=None, help="Comma-separated examination probabilities per position.")
@click.option("--grid", default=None, help="Comma-separated relevance grid values.")
@click.option("--single-click/--multi-click", default=True, show_default=True,
              help="Stop the click scan at the first click.")
def generate(queries: int, n: int, seed: int | None, out: str, bias: str | None,
             grid: str | None, single_click: bool) -> None:
    """Write a synthetic uniformly randomized log as JSONL."""
    seed = _resolve_seed(seed)
    try:
        cfg_kwargs = {"num_queries": queries, "n": n, "seed": seed}
        if grid is not None:
            cfg_kwargs["relevance_grid"] = _parse_floats(grid, "--grid")
        cfg = SimConfig(**cfg_kwargs)
        model_kwargs = {"single_click": single_click}
        if bias is not None:
            model_kwargs["position_bias"] = _parse_floats(bias, "--bias")
        model = ClickModel(**model_kwargs)
        records = generate_logs(cfg, model)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    write_jsonl(records, out)
    click.echo(f"wrote {len(records)} records to {out}", err=True)


@main.command()
@click.option("--logs", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--method", "method_flag", type=click.Choice(["direct", "trunc"]), required=True)
@click.option("--k", "k_range", required=True, help="Cutoff: '3' or inclusive range '1..4'.")
@click.option("--ranker", "designator", required=True,
              help="Ranker designator: score:<field> or oracle:<sigma>:<seed>.")
@click.option("--seed", type=int, default=None, help="Seed (default: RANKEVAL_SEED or 42).")
@click.option("--slices", type=int, default=20, show_default=True,
              help="Half-sample slices for --samples-out.")
@click.option("--out", default="-", help="Summary CSV path ('-' for stdout).")
@click.option("--samples-out", default=None, type=click.Path(dir_okay=False),
              help="Write per-slice metric samples CSV (for 'report').")
def evaluate(logs: str, method_flag: str, k_range: str, designator: str, seed: int | None,
             slices: int, out: str, samples_out: str | None) -> None:
    """Retention counts and MRR for one ranker under direct or trunc matching."""
    seed = _resolve_seed(seed)
    ks = _parse_k_range(k_range)
    records = _load_records(logs)
    ranker = _ranker_or_usage(designator)
    method = _METHOD_BY_FLAG[method_flag]
    evaluator = eval_direct if method is Method.DIRECT else eval_trunc
    try:
        rankings = full_rankings(records, ranker)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    slice_idx = None
    if samples_out is not None:
        slice_idx = half_sample_indices(len(records), slices, seed)
    samples: list[MetricSample] = []
    with click.open_file(out, "w") as fh:
        writer = _writer(fh)
        writer.writerow(["method", "k", "eligible", "matched", "metric_name", "metric_value"])
        for k in ks:
            ev = evaluator(records, ranker, k, rankings)
            if ev.matched_count == 0:
                writer.writerow([method.value, k, ev.eligible_count, 0, f"mrr@{k}", "NA"])
                continue
            writer.writerow(
                [method.value, k, ev.eligible_count, ev.matched_count, f"mrr@{k}", repr(ev.mrr())]
            )
            if slice_idx is not None:
                try:
                    samples.extend(ev.mrr_samples(slice_idx))
                except ValueError:
                    click.echo(f"k={k}: a slice has no matched queries; samples skipped", err=True)
    if samples_out is not None:
        _write_samples(samples_out, samples)


@main.command()
@click.option("--logs", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--method", "method_flag", type=click.Choice(["rand-interleave"]),
              default="rand-interleave", show_default=True)
@click.option("--k", "k_range", required=True, help="Cutoff: '3' or inclusive range '1..4'.")
@click.option("--ranker-a", "designator_a", required=True, help="Baseline ranker designator.")
@click.option("--ranker-b", "designator_b", required=True, help="Contender ranker designator.")
@click.option("--seed", type=int, default=None, help="Seed (default: RANKEVAL_SEED or 42).")
@click.option("--slices", type=int, default=20, show_default=True)
@click.option("--out", default="-", help="Summary CSV path ('-' for stdout).")
@click.option("--tsv", default=None, type=click.Path(dir_okay=False),
              help="Plot-ready TSV of (k, ranker2_norm, stderr).")
@click.option("--samples-out", default=None, type=click.Path(dir_okay=False),
              help="Write per-slice click samples CSV for both rankers.")
def compare(logs: str, method_flag: str, k_range: str, designator_a: str, designator_b: str,
            seed: int | None, slices: int, out: str, tsv: str | None,
            samples_out: str | None) -> None:
    """Compare two rankers by rand-interleaving: match, attribute clicks, report."""
    seed = _resolve_seed(seed)
    ks = _parse_k_range(k_range)
    records = _load_records(logs)
    ranker_a = _ranker_or_usage(designator_a)
    ranker_b = _ranker_or_usage(designator_b)
    try:
        rankings_a = full_rankings(records, ranker_a)
        rankings_b = full_rankings(records, ranker_b)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    slice_idx = half_sample_indices(len(records), slices, seed)
    samples: list[MetricSample] = []
    tsv_rows: list[tuple[int, str, str]] = []
    with click.open_file(out, "w") as fh:
        writer = _writer(fh)
        writer.writerow(
            ["k", "eligible", "matched", "clicks_a", "clicks_b", "wins_a", "wins_b", "ties"]
        )
        for k in ks:
            duel = eval_interleave(
                records, ranker_a, ranker_b, k,
                seed=seed, rankings_a=rankings_a, rankings_b=rankings_b,
            )
            clicks_a, clicks_b = duel.clicks
            wins_a, wins_b, ties = duel.wins
            writer.writerow(
                [k, duel.eligible_count, duel.matched_count,
                 clicks_a, clicks_b, wins_a, wins_b, ties]
            )
            samples_a, samples_b = duel.click_samples(slice_idx)
            samples.extend(samples_a)
            samples.extend(samples_b)
            try:
                report = relative_report(samples_a, samples_b)
                tsv_rows.append((k, f"{report.ranker2_norm:.6f}", f"{report.stderr:.6f}"))
            except ValueError:
                tsv_rows.append((k, "NA", "NA"))
    if tsv is not None:
        with click.open_file(tsv, "w") as fh:
            for row in tsv_rows:
                fh.write("\t".join(str(cell) for cell in row) + "\n")
    if samples_out is not None:
        _write_samples(samples_out, samples)


@main.command()
@click.option("--samples", "sample_paths", multiple=True, required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Per-slice sample CSVs from 'evaluate --samples-out' or 'compare --samples-out'.")
@click.option("--ranker1", default=None, help="Baseline ranker name (default: first seen).")
@click.option("--ranker2", default=None, help="Contender ranker name (default: second seen).")
@click.option("--out", default="-", help="Comparison table CSV path ('-' for stdout).")
@click.option("--tsv-dir", default=None, type=click.Path(file_okay=False),
              help="Directory for per-method plot-ready TSVs.")
def report(sample_paths: Sequence[str], ranker1: str | None, ranker2: str | None,
           out: str, tsv_dir: str | None) -> None:
    """Merge per-slice samples into normalized comparisons (ranker 1 = 100)."""
    samples = _read_samples(sample_paths)
    groups: dict[tuple[Method, int], dict[str, list[MetricSample]]] = defaultdict(dict)
    for s in samples:
        groups[(s.method, s.k)].setdefault(s.ranker, []).append(s)
    method_order = {m: i for i, m in enumerate(Method)}
    rows = []
    tsv_data: dict[Method, list[tuple[int, str, str]]] = defaultdict(list)
    for (method, k) in sorted(groups, key=lambda mk: (method_order[mk[0]], mk[1])):
        by_ranker = groups[(method, k)]
        names = list(by_ranker)
        if ranker1 is not None and ranker2 is not None:
            if ranker1 not in by_ranker or ranker2 not in by_ranker:
                raise click.UsageError(
                    f"{method.value} k={k}: samples lack ranker {ranker1!r} or {ranker2!r}"
                )
            first, second = ranker1, ranker2
        elif len(names) == 2:
            first, second = names
        else:
            raise click.UsageError(
                f"{method.value} k={k}: need exactly two rankers, got {names}"
            )
        try:
            rep = relative_report(by_ranker[first], by_ranker[second])
            rows.append(
                [method.value, k, rep.ranker1, rep.ranker2,
                 f"{rep.ranker2_norm:.6f}", f"{rep.stderr:.6f}",
                 rep.slices, str(rep.separation).lower()]
            )
            tsv_data[method].append((k, f"{rep.ranker2_norm:.6f}", f"{rep.stderr:.6f}"))
        except ValueError:
            rows.append([method.value, k, first, second, "NA", "NA",
                         len(by_ranker[first]), "NA"])
            tsv_data[method].append((k, "NA", "NA"))
    with click.open_file(out, "w") as fh:
        writer = _writer(fh)
        writer.writerow(
            ["method", "k", "ranker1", "ranker2", "ranker2_norm", "stderr", "slices", "separation"]
        )
        writer.writerows(rows)
    if tsv_dir is not None:
        Path(tsv_dir).mkdir(parents=True, exist_ok=True)
        for method, data in tsv_data.items():
            path = Path(tsv_dir) / f"{method.value}.tsv"
            with open(path, "w", encoding="utf-8") as fh:
                for row in sorted(data):
                    fh.write("\t".join(str(cell) for cell in row) + "\n")


@main.group()
def oracle() -> None:
    """Exact brute-force reference values (retention probabilities, metrics)."""


@oracle.command()
@click.option("--method", "method_flag",
              type=click.Choice(["direct", "trunc", "rand-interleave"]), required=True)
@click.option("--n", type=int, default=None, help="Candidates per record (direct only).")
@click.option("--k", type=int, required=True)
@click.option("--ranking", default=None, help="Comma-separated doc ids (default: d1,d2,...).")
@click.option("--ranking-b", default=None, help="Second ranking (rand-interleave only).")
def retention(method_flag: str, n: int | None, k: int, ranking: str | None,
              ranking_b: str | None) -> None:
    """Exact per-record match probability under a uniformly random order."""
    method = _METHOD_BY_FLAG[method_flag]
    if method is Method.DIRECT:
        if n is None:
            raise click.UsageError("direct needs --n")
        size = n
    else:
        size = k
    ranking_a = ranking.split(",") if ranking else [f"d{i}" for i in range(1, size + 1)]
    b = ranking_b.split(",") if ranking_b else None
    if method is Method.RAND_INTERLEAVE and b is None:
        raise click.UsageError("rand-interleave needs --ranking-b")
    try:
        prob = retention_oracle(method, n if n is not None else k, k, ranking_a, b)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    click.echo(f"{prob} = {float(prob):.10g}")


@oracle.command()
@click.option("--ranker", "designator", required=True)
@click.option("--k", type=int, required=True)
@click.option("--queries", type=int, required=True)
@click.option("--n", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=None, help="Seed (default: RANKEVAL_SEED or 42).")
@click.option("--bias", default=None, help="Comma-separated examination probabilities.")
@click.option("--grid", default=None, help="Comma-separated relevance grid values.")
@click.option("--single-click/--multi-click", default=True, show_default=True)
def metric(designator: str, k: int, queries: int, n: int, seed: int | None,
           bias: str | None, grid: str | None, single_click: bool) -> None:
    """Exact expected MRR@k if the ranker's own ordering were presented."""
    seed = _resolve_seed(seed)
    ranker = _ranker_or_usage(designator)
    try:
        cfg_kwargs = {"num_queries": queries, "n": n, "seed": seed}
        if grid is not None:
            cfg_kwargs["relevance_grid"] = _parse_floats(grid, "--grid")
        cfg = SimConfig(**cfg_kwargs)
        model_kwargs = {"single_click": single_click}
        if bias is not None:
            model_kwargs["position_bias"] = _parse_floats(bias, "--bias")
        model = ClickModel(**model_kwargs)
        value = expected_metric_oracle(ranker, cfg, model, k)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    click.echo(f"{value:.10g}")


if __name__ == "__main__":
    main()
