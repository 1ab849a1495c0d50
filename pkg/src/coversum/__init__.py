"""Coverage-based extractive summarization toolkit.

Pipelines text into sentences and tokens, materializes documents as
weighted coverage problems, solves them with greedy, exact and knapsack
selectors, scores summaries with self-contained n-gram/LCS metrics, and
runs corpus-level limit and compressibility studies.
"""

from .analysis import (
    BenchReport,
    CompressibilityReport,
    ComparisonReport,
    GenreReport,
    LimitsReport,
    Stats,
    benchmark_runtimes,
    compressibility,
    document_as_summary_limits,
    genre_report,
    per_document_average_limits,
    summarizer_comparison,
    superdocument_limits,
)
from .corpus import Cluster, Corpus, ReportTable, load_corpus, write_report
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
from .model import (
    CoverageInstance,
    Summary,
    ThoughtUnitScheme,
    WeightPolicy,
    build_instance,
    ts_score,
    utility,
)
from .rouge import RougeConfig, RougeScore, lcs_length, rouge_l, rouge_n
from .solvers import (
    GreedyOptions,
    SentenceScoreVector,
    SolverLimits,
    exact_min_cover,
    greedy_cover,
    mcdonald_summarize,
    score_sentences,
    truncate_to_words,
)
from .textproc import (
    Token,
    TokenizedDocument,
    TokenizedSentence,
    TokenizerConfig,
    document_from_sentences,
    ngrams,
    split_sentences,
    stem,
    tokenize,
    tokenize_document,
)

__version__ = "0.1.0"
