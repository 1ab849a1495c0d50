"""Corpus-level studies: coverage limits of extraction, compressibility,
solver benchmarks and summarizer comparison.

Scoring fans out over a worker pool when jobs > 1; results are reduced in
corpus order, so the emitted bytes never depend on the worker count.
"""

from __future__ import annotations

import hashlib
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial
from statistics import fmean, pstdev
from typing import Callable, Iterable, Sequence

from .corpus import Corpus, ReportTable
from .errors import EmptyReferenceError, MissingReferencesError
from .model import ThoughtUnitScheme, WeightPolicy, build_instance
from .rouge import LCS, RougeConfig, rouge_l, rouge_n
from .solvers import (
    GreedyOptions,
    SolverLimits,
    exact_min_cover,
    greedy_cover,
    mcdonald_summarize,
)
from .textproc import TokenizedDocument, document_from_sentences

__all__ = [
    "Stats",
    "LimitsReport",
    "CompressibilityReport",
    "GenreReport",
    "BenchReport",
    "ComparisonReport",
    "document_as_summary_limits",
    "superdocument_limits",
    "per_document_average_limits",
    "compressibility",
    "compressibility_table",
    "genre_report",
    "benchmark_runtimes",
    "summarizer_comparison",
    "synthetic_documents",
    "COMPARISON_SOLVERS",
]

HISTOGRAM_BINS = 10


@dataclass(frozen=True)
class Stats:
    """Population statistics (stddev divides by N)."""

    count: int
    mean: float
    stddev: float
    minimum: float
    maximum: float

    @classmethod
    def over(cls, values: Iterable[float]) -> "Stats":
        vals = list(values)
        return cls(len(vals), fmean(vals), pstdev(vals), min(vals), max(vals))

    def as_dict(self) -> dict:
        return {
            "count": self.count,
            "mean": self.mean,
            "stddev": self.stddev,
            "min": self.minimum,
            "max": self.maximum,
        }


def _base_header(corpus: Corpus, configs: Sequence[RougeConfig], mode: str, extra: dict) -> dict:
    header = {
        "tool": "coversum",
        "report": mode,
        "corpus": corpus.name,
        "fingerprint": corpus.fingerprint,
        "pipeline": dict(corpus.pipeline),
        "stddev": "population",
        "metrics": [
            {
                "label": c.label,
                "n": c.n,
                "stem": c.stem,
                "remove_stopwords": c.remove_stopwords,
                "legacy_numbers": c.legacy_numbers,
                "truncate_candidate_words": c.truncate_candidate_words,
                "multi_ref": c.multi_ref,
            }
            for c in configs
        ],
        "exclusions": list(corpus.exclusions),
        "duplicates": list(corpus.duplicates),
    }
    header.update(extra)
    return header


@dataclass(frozen=True)
class LimitsReport:
    """Per-unit scores plus per-metric distribution statistics."""

    mode: str
    header: dict
    rows: tuple          # (unit id, metric label, recall, precision, f1)
    stats: dict          # metric label -> component -> Stats
    document_count: int
    skipped: tuple = ()  # (unit id, metric label, reason)
    histograms: dict = field(default_factory=dict)

    def to_table(self) -> ReportTable:
        aggregates = {
            "document_count": self.document_count,
            "metrics": {
                label: {comp: st.as_dict() for comp, st in comps.items()}
                for label, comps in self.stats.items()
            },
        }
        if self.histograms:
            aggregates["histograms"] = self.histograms
        if self.skipped:
            aggregates["skipped"] = [list(s) for s in self.skipped]
        return ReportTable(
            kind=f"limits-{self.mode}",
            header=self.header,
            columns=("unit_id", "metric", "recall", "precision", "f1"),
            rows=self.rows,
            aggregates=aggregates,
        )


def _parallel_map(fn: Callable, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        chunk = max(1, len(items) // (jobs * 4))
        return list(pool.map(fn, items, chunksize=chunk))


def _flat_tokens(doc: TokenizedDocument) -> list:
    return doc.surface_tokens()


def _sentence_tokens(doc: TokenizedDocument) -> list:
    return [[t.surface for t in s.tokens] for s in doc.sentences]


def _score_unit(configs: Sequence[RougeConfig], unit) -> tuple:
    """Score one candidate against its references under every config.

    unit: (unit_id, flat candidate, sentence-split candidate,
    flat references, sentence-split references). Returns (rows, skipped).
    """
    unit_id, cand_flat, cand_sents, refs_flat, refs_sents = unit
    rows = []
    skipped = []
    for config in configs:
        try:
            if config.n == LCS:
                score = rouge_l(cand_sents, refs_sents, config)
            else:
                score = rouge_n(cand_flat, refs_flat, config)
        except EmptyReferenceError as exc:
            skipped.append((unit_id, config.label, str(exc)))
            continue
        rows.append((unit_id, config.label, score.recall, score.precision, score.f1))
    return rows, skipped


def _check_references(corpus: Corpus):
    for cluster in corpus.clusters:
        if cluster.documents and not cluster.references:
            raise MissingReferencesError(
                f"cluster {cluster.id!r} has no reference summaries"
            )


def _low_signal(configs) -> list:
    """High n-gram orders carry little signal at corpus level; flag them."""
    return sorted({c.label for c in configs if c.n in (3, 4)})


def _aggregate(rows, configs) -> dict:
    stats: dict = {}
    for config in configs:
        sub = [r for r in rows if r[1] == config.label]
        if not sub:
            continue
        stats[config.label] = {
            "recall": Stats.over(r[2] for r in sub),
            "precision": Stats.over(r[3] for r in sub),
            "f1": Stats.over(r[4] for r in sub),
        }
    return stats


def document_as_summary_limits(
    corpus: Corpus,
    configs: Sequence[RougeConfig],
    jobs: int = 1,
    dedupe: bool = True,
) -> LimitsReport:
    """Score every document, untruncated, against its cluster references."""
    _check_references(corpus)
    units = []
    docs = corpus.unique_documents() if dedupe else corpus.documents()
    for cluster, doc in docs:
        units.append((
            doc.id,
            _flat_tokens(doc),
            _sentence_tokens(doc),
            [_flat_tokens(r) for r in cluster.references],
            [_sentence_tokens(r) for r in cluster.references],
        ))
    results = _parallel_map(partial(_score_unit, list(configs)), units, jobs)
    rows = tuple(row for unit_rows, _ in results for row in unit_rows)
    skipped = tuple(s for _, unit_skips in results for s in unit_skips)
    header = _base_header(corpus, configs, "document", {"dedupe": dedupe})
    return LimitsReport("document", header, rows, _aggregate(rows, configs),
                        document_count=len(units), skipped=skipped)


def superdocument_limits(
    corpus: Corpus,
    configs: Sequence[RougeConfig],
    jobs: int = 1,
) -> LimitsReport:
    """Concatenate each cluster into one candidate and score it."""
    _check_references(corpus)
    units = []
    for cluster in corpus.clusters:
        flat = [t for doc in cluster.documents for t in _flat_tokens(doc)]
        sents = [s for doc in cluster.documents for s in _sentence_tokens(doc)]
        units.append((
            cluster.id,
            flat,
            sents,
            [_flat_tokens(r) for r in cluster.references],
            [_sentence_tokens(r) for r in cluster.references],
        ))
    results = _parallel_map(partial(_score_unit, list(configs)), units, jobs)
    rows = tuple(row for unit_rows, _ in results for row in unit_rows)
    skipped = tuple(s for _, unit_skips in results for s in unit_skips)
    header = _base_header(corpus, configs, "superdoc",
                          {"low_signal_metrics": _low_signal(configs)})
    return LimitsReport("superdoc", header, rows, _aggregate(rows, configs),
                        document_count=len(units), skipped=skipped)


def _histogram(values: Sequence[float], bins: int = HISTOGRAM_BINS) -> dict:
    """Equal-width bins over [0, 1]; a value of exactly 1.0 lands in the last."""
    counts = [0] * bins
    for v in values:
        idx = min(int(v * bins), bins - 1)
        counts[idx] += 1
    edges = [i / bins for i in range(bins + 1)]
    return {"edges": edges, "counts": counts}


def per_document_average_limits(
    corpus: Corpus,
    configs: Sequence[RougeConfig],
    jobs: int = 1,
    dedupe: bool = True,
) -> LimitsReport:
    """Average per-document scores within each cluster; emit the distribution."""
    per_doc = document_as_summary_limits(corpus, configs, jobs=jobs, dedupe=dedupe)
    doc_cluster = {}
    docs = corpus.unique_documents() if dedupe else corpus.documents()
    for cluster, doc in docs:
        doc_cluster[doc.id] = cluster.id
    grouped: dict = {}
    for unit_id, label, recall, precision, f1 in per_doc.rows:
        grouped.setdefault((doc_cluster[unit_id], label), []).append(
            (recall, precision, f1)
        )
    rows = []
    for cluster in corpus.clusters:
        for config in configs:
            scores = grouped.get((cluster.id, config.label))
            if not scores:
                continue
            rows.append((
                cluster.id,
                config.label,
                fmean(s[0] for s in scores),
                fmean(s[1] for s in scores),
                fmean(s[2] for s in scores),
            ))
    rows = tuple(rows)
    histograms = {}
    for config in configs:
        values = [r[2] for r in rows if r[1] == config.label]
        if values:
            histograms[config.label] = _histogram(values)
    header = _base_header(corpus, configs, "average",
                          {"dedupe": dedupe,
                           "low_signal_metrics": _low_signal(configs)})
    return LimitsReport("average", header, rows, _aggregate(rows, configs),
                        document_count=len({r[0] for r in rows}),
                        skipped=per_doc.skipped, histograms=histograms)


@dataclass(frozen=True)
class CompressibilityReport:
    """Minimum cover size of one document, in sentences."""

    document_id: str
    kappa: int
    n_sentences: int
    incompressibility: float
    solver: str
    optimal: bool


def compressibility(
    document: TokenizedDocument,
    scheme: ThoughtUnitScheme = ThoughtUnitScheme.ALL_WORDS,
    solver: str = "exact",
    limits: SolverLimits | None = None,
) -> CompressibilityReport:
    """Smallest number of sentences covering every unit, over sentence count.

    solver "exact" proves optimality (unless a resource cap intervenes);
    "greedy" gives an upper bound and always reports optimal=False.
    """
    instance = build_instance(document, scheme=scheme, weighting=WeightPolicy.UNIFORM)
    if solver == "exact":
        summary = exact_min_cover(instance, limits)
        optimal = bool(summary.optimal)
    elif solver == "greedy":
        summary = greedy_cover(instance, GreedyOptions(metric="size_distinct", update=True))
        optimal = False
    else:
        raise ValueError(f"solver must be 'exact' or 'greedy', got {solver!r}")
    kappa = len(summary.selected)
    n = len(document.sentences)
    return CompressibilityReport(
        document_id=document.id,
        kappa=kappa,
        n_sentences=n,
        incompressibility=kappa / n,
        solver=solver,
        optimal=optimal,
    )


def compressibility_table(reports: Sequence[CompressibilityReport], header: dict) -> ReportTable:
    rows = tuple(
        (r.document_id, r.kappa, r.n_sentences, r.incompressibility, r.solver, r.optimal)
        for r in reports
    )
    aggregates = {}
    if reports:
        aggregates["incompressibility"] = Stats.over(
            r.incompressibility for r in reports
        ).as_dict()
    return ReportTable(
        kind="compressibility",
        header=header,
        columns=("document_id", "kappa", "n_sentences", "incompressibility",
                 "solver", "optimal"),
        rows=rows,
        aggregates=aggregates,
    )


@dataclass(frozen=True)
class GenreReport:
    """Mean incompressibility per genre plus the size-vs-ratio scatter."""

    header: dict
    genre_rows: tuple    # (genre, document count, mean incompressibility)
    points: tuple        # (genre, document id, sentence count, incompressibility)

    def to_table(self) -> ReportTable:
        return ReportTable(
            kind="genre",
            header=self.header,
            columns=("genre", "document_id", "n_sentences", "incompressibility"),
            rows=self.points,
            aggregates={
                "genres": [
                    {"genre": g, "documents": c, "mean_incompressibility": m}
                    for g, c, m in self.genre_rows
                ]
            },
        )


def _compress_args(args):
    document, scheme, solver, limits = args
    return compressibility(document, scheme, solver, limits)


def genre_report(
    tagged_documents: Sequence[tuple],
    scheme: ThoughtUnitScheme = ThoughtUnitScheme.ALL_WORDS,
    solver: str = "exact",
    limits: SolverLimits | None = None,
    jobs: int = 1,
    header: dict | None = None,
) -> GenreReport:
    """Compressibility scatter for (genre, document) pairs."""
    items = [(doc, scheme, solver, limits) for _, doc in tagged_documents]
    reports = _parallel_map(_compress_args, items, jobs)
    points = tuple(
        (genre, rep.document_id, rep.n_sentences, rep.incompressibility)
        for (genre, _), rep in zip(tagged_documents, reports)
    )
    by_genre: dict = {}
    for genre, _, _, ratio in points:
        by_genre.setdefault(genre, []).append(ratio)
    genre_rows = tuple(
        (genre, len(vals), fmean(vals)) for genre, vals in sorted(by_genre.items())
    )
    return GenreReport(header or {"tool": "coversum", "report": "genre"},
                       genre_rows, points)


def synthetic_documents(sizes: Sequence[int], seed: int) -> dict:
    """Deterministic synthetic documents keyed by sentence count.

    Sentences come from a fixed pool over a rank-weighted vocabulary.
    Half the pool draws only from a small core (those sentences overlap
    heavily, so covers have real structure); the rest mix in tail words
    that recur rarely, like content words in natural text.
    """
    rng = random.Random(seed)
    core = [f"c{i:02d}" for i in range(40)]
    tail = [f"t{i:03d}" for i in range(260)]
    core_weights = [1.0 / (rank + 1) for rank in range(len(core))]
    tail_weights = [1.0 / (rank + 2) for rank in range(len(tail))]
    pool_size = max(512, max(sizes) if sizes else 0)
    pool = []
    for _ in range(pool_size):
        k = rng.randint(6, 16)
        if rng.random() < 0.5:
            words = rng.choices(core, weights=core_weights, k=k)
        else:
            n_tail = max(1, k // 4)
            words = rng.choices(core, weights=core_weights, k=k - n_tail)
            words += rng.choices(tail, weights=tail_weights, k=n_tail)
            rng.shuffle(words)
        pool.append(" ".join(words))
    docs = {}
    for size in sizes:
        if size < 1:
            raise ValueError(f"sizes must be positive, got {size}")
        sentences = rng.sample(pool, size)
        docs[size] = document_from_sentences(f"synthetic-{size}", sentences)
    return docs


BENCH_SOLVERS = ("greedy-size", "greedy-size-distinct", "greedy-tfidf",
                 "exact", "mcdonald")
NA = "n/a"


def _run_solver(name: str, instance, limits: SolverLimits, mcdonald_budget: int):
    """Returns the produced summary; raises nothing for the greedy family."""
    if name == "greedy-size":
        return greedy_cover(instance, GreedyOptions(metric="size", update=True))
    if name == "greedy-size-distinct":
        return greedy_cover(instance, GreedyOptions(metric="size_distinct", update=True))
    if name == "greedy-tfidf":
        return greedy_cover(instance, GreedyOptions(metric="tfidf", update=True))
    if name == "exact":
        return exact_min_cover(instance, limits)
    if name == "mcdonald":
        return mcdonald_summarize(instance, budget=mcdonald_budget)
    raise ValueError(f"unknown solver {name!r}")


@dataclass(frozen=True)
class BenchReport:
    header: dict
    sizes: tuple
    solvers: tuple
    cells: dict          # (size, solver) -> milliseconds (float) or "n/a"

    def to_table(self) -> ReportTable:
        rows = tuple(
            (size, *(self._cell(size, solver) for solver in self.solvers))
            for size in self.sizes
        )
        return ReportTable(
            kind="bench",
            header=self.header,
            columns=("size", *self.solvers),
            rows=rows,
        )

    def _cell(self, size, solver):
        value = self.cells[(size, solver)]
        return value if value == NA else f"{value:.3f}"


def benchmark_runtimes(
    sizes: Sequence[int],
    solvers: Sequence[str] = BENCH_SOLVERS,
    seed: int = 0,
    trials: int = 1,
    limits: SolverLimits | None = None,
    mcdonald_budget: int = 100,
    documents: dict | None = None,
) -> BenchReport:
    """Wall-clock per solver per synthetic document size, in milliseconds.

    An exact-solver run that ends at its resource cap (optimality not
    proven) is recorded as "n/a". Timings vary run to run; the documents
    do not (fixed seed). Pass ``documents`` (size -> TokenizedDocument)
    to benchmark your own corpus instead of the synthetic one.
    """
    limits = limits or SolverLimits()
    docs = documents if documents is not None else synthetic_documents(sizes, seed)
    instances = {size: build_instance(doc) for size, doc in docs.items()}
    cells: dict = {}
    for size in sizes:
        for name in solvers:
            elapsed = []
            failed = False
            for _ in range(max(1, trials)):
                start = time.perf_counter()
                summary = _run_solver(name, instances[size], limits, mcdonald_budget)
                elapsed.append((time.perf_counter() - start) * 1000.0)
                if name == "exact" and not summary.optimal:
                    failed = True
                    break
            cells[(size, name)] = NA if failed else fmean(elapsed)
    digest = hashlib.sha256()
    for size in sizes:
        for sent in docs[size].sentences:
            digest.update(sent.raw.encode())
    header = {
        "tool": "coversum",
        "report": "bench",
        "seed": seed,
        "trials": max(1, trials),
        "mcdonald_budget": mcdonald_budget,
        "documents_fingerprint": digest.hexdigest(),
    }
    return BenchReport(header, tuple(sizes), tuple(solvers), cells)


COMPARISON_SOLVERS = BENCH_SOLVERS


def _summary_text(doc: TokenizedDocument, summary) -> list:
    """Selected sentences of one document, in source order, as raw strings."""
    wanted = {idx for _, idx in summary.selected}
    return [s.raw for s in doc.sentences if s.index in wanted]


def _compare_unit(configs, solver_names, scheme, threshold, limits_caps, unit):
    doc, refs_flat, refs_sents = unit
    instance = build_instance(doc, scheme=scheme)
    rows = []
    for name in solver_names:
        if name.startswith("greedy-"):
            metric = {"greedy-size": "size", "greedy-size-distinct": "size_distinct",
                      "greedy-tfidf": "tfidf"}[name]
            summary = greedy_cover(
                instance, GreedyOptions(metric=metric, update=True, threshold=threshold)
            )
        else:
            summary = _run_solver(name, instance, limits_caps, threshold)
        sentences = _summary_text(doc, summary)
        flat = [t for s in sentences for t in s.split()]
        sents = [s.split() for s in sentences]
        for config in configs:
            try:
                if config.n == LCS:
                    score = rouge_l(sents, refs_sents, config)
                else:
                    score = rouge_n(flat, refs_flat, config)
            except EmptyReferenceError:
                continue
            rows.append((doc.id, name, config.label,
                         score.recall, score.precision, score.f1))
    return rows


@dataclass(frozen=True)
class ComparisonReport:
    header: dict
    rows: tuple   # (document id, solver, metric, recall, precision, f1)
    stats: dict   # solver -> metric -> component -> Stats

    def to_table(self) -> ReportTable:
        aggregates = {
            "solvers": {
                solver: {
                    label: {comp: st.as_dict() for comp, st in comps.items()}
                    for label, comps in metrics.items()
                }
                for solver, metrics in self.stats.items()
            }
        }
        return ReportTable(
            kind="comparison",
            header=self.header,
            columns=("document_id", "solver", "metric", "recall", "precision", "f1"),
            rows=self.rows,
            aggregates=aggregates,
        )


def summarizer_comparison(
    corpus: Corpus,
    configs: Sequence[RougeConfig],
    solvers: Sequence[str] = COMPARISON_SOLVERS,
    scheme: ThoughtUnitScheme = ThoughtUnitScheme.ALL_WORDS,
    truncate: int = 100,
    limits: SolverLimits | None = None,
    jobs: int = 1,
    dedupe: bool = True,
) -> ComparisonReport:
    """Run each solver over each document and score the truncated output.

    Unlike the limits reports, both candidate summaries and references are
    truncated to the word limit here, so configs should carry
    truncate_candidate_words=truncate (references are cut in the harness).
    """
    _check_references(corpus)
    limits = limits or SolverLimits()
    configs = [replace(c, truncate_candidate_words=truncate) for c in configs]
    units = []
    docs = corpus.unique_documents() if dedupe else corpus.documents()
    for cluster, doc in docs:
        refs_flat = [_flat_tokens(r)[:truncate] for r in cluster.references]
        refs_sents = []
        for ref in cluster.references:
            remaining = truncate
            cut = []
            for sent in _sentence_tokens(ref):
                if remaining <= 0:
                    break
                cut.append(sent[:remaining])
                remaining -= len(cut[-1])
            refs_sents.append(cut)
        units.append((doc, refs_flat, refs_sents))
    worker = partial(_compare_unit, list(configs), list(solvers), scheme,
                     truncate, limits)
    results = _parallel_map(worker, units, jobs)
    rows = tuple(row for unit_rows in results for row in unit_rows)
    stats: dict = {}
    for name in solvers:
        sub_rows = [r for r in rows if r[1] == name]
        metric_stats: dict = {}
        for config in configs:
            sub = [r for r in sub_rows if r[2] == config.label]
            if not sub:
                continue
            metric_stats[config.label] = {
                "recall": Stats.over(r[3] for r in sub),
                "precision": Stats.over(r[4] for r in sub),
                "f1": Stats.over(r[5] for r in sub),
            }
        stats[name] = metric_stats
    header = _base_header(corpus, configs, "comparison", {
        "solvers": list(solvers),
        "scheme": scheme.value,
        "truncate_words": truncate,
        "dedupe": dedupe,
    })
    return ComparisonReport(header, rows, stats)
