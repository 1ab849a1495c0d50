"""Command-line interface.

Subcommands: summarize, rouge, limits, compare, compress, bench. Data goes
to standard output (or to --out files); diagnostics go to standard error.
Every emitted report embeds the resolved scoring configuration and corpus
fingerprint; execution-only knobs such as --jobs are deliberately not part
of that echo so reruns with different parallelism stay byte-identical.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import analysis, corpus as corpus_mod
from .errors import (
    CoversumError,
    EmptyDocumentError,
    EmptyReferenceError,
    ManifestError,
    MissingFileError,
    MissingReferencesError,
    ResourceLimitError,
    UnknownMetricError,
    ZeroBudgetError,
)
from .model import ThoughtUnitScheme, WeightPolicy, build_instance
from .rouge import LCS, RougeConfig, rouge_l, rouge_n
from .solvers import (
    GreedyOptions,
    SolverLimits,
    exact_min_cover,
    greedy_cover,
    mcdonald_summarize,
    truncate_to_words,
)
from .stopwords import DEFAULT_LIST_NAME, default_stopwords, load_stopword_file
from .textproc import TokenizerConfig, tokenize_document

log = logging.getLogger("coversum")

EXIT_CODES = (
    (ManifestError, 3),
    (MissingFileError, 4),
    (EmptyDocumentError, 5),
    (MissingReferencesError, 6),
    (ZeroBudgetError, 7),
    (ResourceLimitError, 8),
    (UnknownMetricError, 9),
    (EmptyReferenceError, 10),
)

_EPILOG = """\
exit codes:
  0   success
  2   usage error
  3   manifest parse/schema error
  4   missing input file
  5   empty document under the chosen scheme
  6   cluster without reference summaries
  7   zero or negative budget
  8   solver resource cap exceeded
  9   unknown scoring metric
  10  reference empty after preprocessing
  11  invalid option value
  12  input/output failure

environment:
  COVERSUM_STOPWORDS  default stopword list file (one token per line)
"""

STOPWORD_ENV = "COVERSUM_STOPWORDS"


def _stopword_set(path: str | None):
    path = path or os.environ.get(STOPWORD_ENV)
    if path:
        return load_stopword_file(path), str(path)
    return default_stopwords(), DEFAULT_LIST_NAME


def _read_text(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise MissingFileError(f"input file not found: {p}")
    return p.read_text("utf-8")


def _scheme_from_flags(stem: bool, remove_stopwords: bool) -> ThoughtUnitScheme:
    if stem and remove_stopwords:
        return ThoughtUnitScheme.STEMS_MINUS_STOPWORDS
    if stem:
        return ThoughtUnitScheme.STEMS
    if remove_stopwords:
        return ThoughtUnitScheme.WORDS_MINUS_STOPWORDS
    return ThoughtUnitScheme.ALL_WORDS


def _parse_int_list(text: str, flag: str) -> list:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"{flag} expects a comma-separated integer list, got {text!r}")


def _emit(report, fmt: str, out: str | None, name: str) -> None:
    """Write to --out directory, or stream a single format to stdout."""
    if out:
        formats = ("csv", "json") if fmt == "both" else (fmt,)
        for f in formats:
            path = Path(out) / f"{name}.{f}"
            corpus_mod.write_report(report, f, path)
            log.info("wrote %s", path)
    else:
        f = "csv" if fmt == "both" else fmt
        sys.stdout.write(corpus_mod.render_report(report, f))


def _rouge_configs(args, stopword_set) -> list:
    """The metric matrix for limits/compare runs."""
    configs = []
    truncate = getattr(args, "truncate", None)
    for n in _parse_int_list(args.ngrams, "--ngrams"):
        variants = (False, True) if args.stopword_variants else (False,)
        for remove in variants:
            configs.append(RougeConfig(
                n=n, stem=args.stem, remove_stopwords=remove,
                legacy_numbers=args.legacy_numbers,
                truncate_candidate_words=truncate,
                multi_ref=args.multi_ref, stopwords=stopword_set,
            ))
    if getattr(args, "lcs", False):
        variants = (False, True) if args.stopword_variants else (False,)
        for remove in variants:
            configs.append(RougeConfig(
                n=LCS, stem=args.stem, remove_stopwords=remove,
                legacy_numbers=args.legacy_numbers,
                truncate_candidate_words=truncate,
                multi_ref=args.multi_ref, stopwords=stopword_set,
            ))
    return configs


def cmd_summarize(args) -> int:
    stopword_set, _ = _stopword_set(args.stopword_file)
    config = TokenizerConfig(stem=False, legacy_numbers=args.legacy_numbers,
                             stopwords=stopword_set)
    doc = tokenize_document(args.input, _read_text(args.input), config)
    if not doc.sentences:
        raise EmptyDocumentError(f"{args.input}: no sentences after tokenization")
    scheme = _scheme_from_flags(args.stem, args.stopword)
    instance = build_instance(doc, scheme=scheme, weighting=WeightPolicy.UNIFORM,
                              budget=args.threshold)
    limits = SolverLimits()
    if args.solver == "greedy":
        metric = "tfidf" if args.metric == "tfidf" else (
            "size_distinct" if args.distinct else "size")
        opts = GreedyOptions(metric=metric, update=args.update,
                             normalize=args.normalize, threshold=args.threshold,
                             smooth_idf=args.smooth_idf)
        summary = greedy_cover(instance, opts)
    elif args.solver == "exact":
        summary = exact_min_cover(instance, limits)
    else:
        budget = args.threshold if args.threshold else 100
        summary = mcdonald_summarize(instance, budget=budget,
                                     lambda_redundancy=args.lambda_redundancy,
                                     smooth_idf=args.smooth_idf)

    wanted = {idx for _, idx in summary.selected}
    sentences = [s.raw for s in doc.sentences if s.index in wanted]
    if args.echo:
        text = " ".join(sentences)
        if args.threshold:
            text = truncate_to_words(text, args.threshold)
        print(text)
    else:
        for sentence in sentences:
            print(sentence)

    if args.record:
        record = {
            "input": args.input,
            "solver": args.solver,
            "solver_tag": summary.solver_tag,
            "scheme": scheme.value,
            "selected": [{"document": d, "sentence": i} for d, i in summary.selected],
            "size": summary.size,
            "utility": round(summary.utility, 6),
            "optimal": summary.optimal,
        }
        Path(args.record).write_text(json.dumps(record, indent=2) + "\n", "utf-8")
    return 0


def cmd_rouge(args) -> int:
    stopword_set, _ = _stopword_set(args.stopword_file)
    config = RougeConfig(
        n=LCS if args.lcs else args.n,
        stem=args.stem,
        remove_stopwords=args.stopwords,
        legacy_numbers=args.legacy_numbers,
        truncate_candidate_words=args.truncate,
        multi_ref=args.multi_ref,
        stopwords=stopword_set,
    )
    tok = TokenizerConfig(stem=False, legacy_numbers=args.legacy_numbers,
                          stopwords=stopword_set)
    cand = tokenize_document(args.candidate, _read_text(args.candidate), tok)
    refs = [tokenize_document(p, _read_text(p), tok) for p in args.ref]
    if config.n == LCS:
        score = rouge_l(
            [[t.surface for t in s.tokens] for s in cand.sentences],
            [[[t.surface for t in s.tokens] for s in r.sentences] for r in refs],
            config,
        )
    else:
        score = rouge_n(cand.surface_tokens(),
                        [r.surface_tokens() for r in refs], config)
    print(json.dumps({
        "metric": config.label,
        "recall": round(score.recall, 6),
        "precision": round(score.precision, 6),
        "f1": round(score.f1, 6),
    }))
    return 0


def cmd_limits(args) -> int:
    stopword_set, _ = _stopword_set(args.stopword_file)
    loaded = corpus_mod.load_corpus(args.manifest)
    configs = _rouge_configs(args, stopword_set)
    if args.mode == "document":
        report = analysis.document_as_summary_limits(
            loaded, configs, jobs=args.jobs, dedupe=args.dedupe)
    elif args.mode == "superdoc":
        report = analysis.superdocument_limits(loaded, configs, jobs=args.jobs)
    else:
        report = analysis.per_document_average_limits(
            loaded, configs, jobs=args.jobs, dedupe=args.dedupe)
    for line in loaded.exclusions:
        log.warning("excluded: %s", line)
    _emit(report, args.format, args.out, f"limits-{args.mode}")
    return 0


def cmd_compare(args) -> int:
    stopword_set, _ = _stopword_set(args.stopword_file)
    loaded = corpus_mod.load_corpus(args.manifest)
    args.truncate = args.truncate_words
    configs = _rouge_configs(args, stopword_set)
    solvers = [s.strip() for s in args.solvers.split(",") if s.strip()]
    report = analysis.summarizer_comparison(
        loaded, configs, solvers=solvers,
        scheme=ThoughtUnitScheme(args.scheme),
        truncate=args.truncate_words, jobs=args.jobs, dedupe=args.dedupe,
    )
    _emit(report, args.format, args.out, "comparison")
    return 0


def cmd_compress(args) -> int:
    stopword_set, name = _stopword_set(args.stopword_file)
    scheme = ThoughtUnitScheme(args.scheme)
    header = {
        "tool": "coversum",
        "report": "compressibility",
        "scheme": scheme.value,
        "solver": args.solver,
        "stopword_list": name,
        "stemmer": "porter",
    }
    if args.input.endswith(".json"):
        loaded = corpus_mod.load_corpus(args.input)
        header["corpus"] = loaded.name
        header["fingerprint"] = loaded.fingerprint
        tagged = [
            (cluster.genre or "untagged", doc)
            for cluster, doc in loaded.documents()
        ]
        if args.genre_from_manifest:
            report = analysis.genre_report(
                tagged, scheme=scheme, solver=args.solver, jobs=args.jobs,
                header=header)
            _emit(report, args.format, args.out, "genre")
            return 0
        docs = [doc for _, doc in tagged]
    else:
        tok = TokenizerConfig(stem=False, legacy_numbers=args.legacy_numbers,
                              stopwords=stopword_set)
        doc = tokenize_document(args.input, _read_text(args.input), tok)
        if not doc.sentences:
            raise EmptyDocumentError(f"{args.input}: no sentences after tokenization")
        docs = [doc]
    reports = [
        analysis.compressibility(doc, scheme=scheme, solver=args.solver)
        for doc in docs
    ]
    table = analysis.compressibility_table(reports, header)
    _emit(table, args.format, args.out, "compressibility")
    return 0


def cmd_bench(args) -> int:
    sizes = _parse_int_list(args.sizes, "--sizes")
    solvers = [s.strip() for s in args.solvers.split(",") if s.strip()]
    for name in solvers:
        if name not in analysis.BENCH_SOLVERS:
            raise ValueError(
                f"unknown solver {name!r}; choose from {', '.join(analysis.BENCH_SOLVERS)}")
    report = analysis.benchmark_runtimes(
        sizes, solvers, seed=args.seed, trials=args.trials)
    _emit(report, args.format, args.out, "bench")
    return 0


def _add_common_output(p: argparse.ArgumentParser):
    p.add_argument("--out", help="output directory (default: stream to stdout)")
    p.add_argument("--format", choices=("csv", "json", "both"), default="both",
                   help="report format(s) when --out is set; stdout uses csv unless json")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                   help="worker processes for per-document scoring")


def _add_pipeline_flags(p: argparse.ArgumentParser):
    p.add_argument("--stopword-file", help="replacement stopword list file")
    p.add_argument("--legacy-numbers", action=argparse.BooleanOptionalAction,
                   default=True,
                   help="split comma/decimal numbers into digit groups "
                        "(--no-legacy-numbers keeps them whole)")


def _add_metric_matrix(p: argparse.ArgumentParser):
    p.add_argument("--ngrams", default="1,2,3,4",
                   help="comma-separated n-gram orders (default 1,2,3,4)")
    p.add_argument("--lcs", action="store_true", help="also score the LCS metric")
    p.add_argument("--stem", dest="stem", action="store_true", default=True,
                   help="stem before matching (default on)")
    p.add_argument("--no-stem", dest="stem", action="store_false")
    p.add_argument("--stopword-variants", dest="stopword_variants",
                   action="store_true", default=True,
                   help="score each metric with and without stopword removal "
                        "(default on)")
    p.add_argument("--no-stopword-variants", dest="stopword_variants",
                   action="store_false")
    p.add_argument("--multi-ref", choices=("average", "best"), default="average")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coversum",
        description="Coverage-based extractive summarization toolkit",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("summarize", help="summarize one document")
    p.add_argument("input", help="plain-text document")
    p.add_argument("-c", "--metric", choices=("size", "tfidf"), default="size",
                   help="greedy scoring metric")
    p.add_argument("-d", "--distinct", action="store_true",
                   help="count distinct words per sentence")
    p.add_argument("-n", "--normalize", action="store_true",
                   help="normalize scores by sentence word count")
    p.add_argument("-u", "--update", action="store_true",
                   help="rescore against uncovered words after each pick")
    p.add_argument("-s", "--stem", action="store_true", help="stem coverage units")
    p.add_argument("-w", "--stopword", action="store_true",
                   help="drop stopwords from coverage units")
    p.add_argument("-t", "--threshold", type=int,
                   help="word budget for the summary")
    p.add_argument("-e", "--echo", action="store_true",
                   help="summary mode: emit one text truncated to the threshold")
    p.add_argument("--solver", choices=("greedy", "exact", "mcdonald"),
                   default="greedy")
    p.add_argument("--lambda", dest="lambda_redundancy", type=float, default=1.0,
                   help="redundancy penalty for the mcdonald solver")
    p.add_argument("--smooth-idf", action="store_true",
                   help="use ln(1 + N/df) instead of ln(N/df)")
    p.add_argument("--record", help="also write a JSON summary record here")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("rouge", help="score a candidate against references")
    p.add_argument("candidate", help="candidate text file")
    p.add_argument("--ref", action="append", required=True,
                   help="reference text file (repeatable)")
    p.add_argument("--n", type=int, default=1, help="n-gram order (1-4)")
    p.add_argument("--lcs", action="store_true", help="score the LCS metric instead")
    p.add_argument("--stem", action="store_true")
    p.add_argument("--stopwords", action="store_true",
                   help="remove stopwords before matching")
    p.add_argument("--truncate", type=int,
                   help="truncate the candidate to this many words")
    p.add_argument("--multi-ref", choices=("average", "best"), default="average")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_rouge)

    p = sub.add_parser("limits", help="coverage-limit study over a corpus")
    p.add_argument("manifest", help="corpus manifest JSON")
    p.add_argument("--mode", choices=("document", "superdoc", "average"),
                   default="document")
    p.add_argument("--dedupe", dest="dedupe", action="store_true", default=True,
                   help="skip duplicate-content documents (default on)")
    p.add_argument("--no-dedupe", dest="dedupe", action="store_false")
    _add_metric_matrix(p)
    _add_pipeline_flags(p)
    _add_common_output(p)
    p.set_defaults(func=cmd_limits, truncate=None)

    p = sub.add_parser("compare", help="run summarizers over a corpus and score them")
    p.add_argument("manifest", help="corpus manifest JSON")
    p.add_argument("--solvers", default=",".join(analysis.COMPARISON_SOLVERS),
                   help="comma-separated solver list")
    p.add_argument("--scheme",
                   choices=[s.value for s in ThoughtUnitScheme], default="words")
    p.add_argument("--truncate-words", type=int, default=100,
                   help="truncate candidates and references to this many words")
    p.add_argument("--dedupe", dest="dedupe", action="store_true", default=True)
    p.add_argument("--no-dedupe", dest="dedupe", action="store_false")
    _add_metric_matrix(p)
    _add_pipeline_flags(p)
    _add_common_output(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("compress", help="compressibility of documents")
    p.add_argument("input", help="text file, or corpus manifest (*.json)")
    p.add_argument("--scheme",
                   choices=[s.value for s in ThoughtUnitScheme], default="words")
    p.add_argument("--solver", choices=("exact", "greedy"), default="exact")
    p.add_argument("--genre-from-manifest", action="store_true",
                   help="aggregate by the manifest's genre tags")
    _add_pipeline_flags(p)
    _add_common_output(p)
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("bench", help="solver timing table on synthetic documents")
    p.add_argument("--sizes", default="4,8,12,16,20",
                   help="comma-separated sentence counts")
    p.add_argument("--solvers", default=",".join(analysis.BENCH_SOLVERS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    _add_common_output(p)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
    )
    try:
        return args.func(args)
    except CoversumError as exc:
        for klass, code in EXIT_CODES:
            if isinstance(exc, klass):
                log.error("%s", exc)
                return code
        log.error("%s", exc)
        return 1
    except ValueError as exc:
        log.error("%s", exc)
        return 11
    except OSError as exc:
        log.error("%s", exc)
        return 12


if __name__ == "__main__":
    sys.exit(main())
