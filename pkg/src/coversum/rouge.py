"""Self-contained n-gram overlap and LCS scoring.

Scores are computed from the documented formulas: clipped multiset n-gram
overlap for the n-gram metrics, and summary-level union LCS for the LCS
metric. Candidate truncation happens on surface words before any
normalization; references are never truncated here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from statistics import fmean
from typing import Sequence

from . import kernels
from .errors import EmptyReferenceError
from .stopwords import default_stopwords
from .textproc import TokenizerConfig, ngrams, tokenize

__all__ = ["RougeConfig", "RougeScore", "rouge_n", "rouge_l", "lcs_length"]

LCS = "L"


@dataclass(frozen=True)
class RougeConfig:
    """One metric configuration.

    n is 1..4 for n-gram scoring or "L" for the LCS metric. multi_ref
    picks how several references combine: "average" takes the arithmetic
    mean of each component, "best" the reference with the highest
    (f1, recall, precision) triple, so both are reference-order-free.
    """

    n: int | str = 1
    stem: bool = False
    remove_stopwords: bool = False
    legacy_numbers: bool = True
    truncate_candidate_words: int | None = None
    multi_ref: str = "average"
    stopwords: frozenset = field(default_factory=default_stopwords)

    def __post_init__(self):
        if self.n != LCS and self.n not in (1, 2, 3, 4):
            raise ValueError(f"n must be 1..4 or {LCS!r}, got {self.n!r}")
        if self.multi_ref not in ("average", "best"):
            raise ValueError(f"multi_ref must be 'average' or 'best', got {self.multi_ref!r}")
        if self.truncate_candidate_words is not None and self.truncate_candidate_words < 1:
            raise ValueError("truncate_candidate_words must be >= 1")

    @property
    def label(self) -> str:
        base = "RL" if self.n == LCS else f"R{self.n}"
        return base + ("s" if self.remove_stopwords else "")

    def tokenizer(self) -> TokenizerConfig:
        return TokenizerConfig(
            stem=self.stem,
            legacy_numbers=self.legacy_numbers,
            stopwords=self.stopwords,
        )


@dataclass(frozen=True)
class RougeScore:
    recall: float
    precision: float
    f1: float

    @classmethod
    def from_counts(cls, matched: float, ref_total: int, cand_total: int) -> "RougeScore":
        recall = matched / ref_total if ref_total else 0.0
        precision = matched / cand_total if cand_total else 0.0
        denom = recall + precision
        f1 = 2.0 * recall * precision / denom if denom > 0 else 0.0
        return cls(recall, precision, f1)


def _normalize(tokens: Sequence[str], config: RougeConfig) -> list:
    """Lowercase/split/stem surface tokens and drop stopwords if asked."""
    out = []
    for tok in tokenize(" ".join(tokens), config.tokenizer()):
        if config.remove_stopwords and tok.is_stopword:
            continue
        out.append(tok.normalized)
    return out


def _combine(scores: list, multi_ref: str) -> RougeScore:
    if len(scores) == 1:
        return scores[0]
    if multi_ref == "best":
        return max(scores, key=lambda s: (s.f1, s.recall, s.precision))
    return RougeScore(
        fmean(s.recall for s in scores),
        fmean(s.precision for s in scores),
        fmean(s.f1 for s in scores),
    )


def rouge_n(
    candidate: Sequence[str],
    references: Sequence[Sequence[str]],
    config: RougeConfig,
) -> RougeScore:
    """Clipped n-gram overlap of one candidate against the references.

    Per reference, recall divides the clipped multiset intersection by
    the reference n-gram count and precision by the candidate's. An empty
    candidate scores zero; a reference with no n-grams after
    preprocessing is an error.
    """
    if config.n == LCS:
        raise ValueError("use rouge_l for the LCS metric")
    if not references:
        raise EmptyReferenceError("at least one reference is required")
    n = config.n
    cand = candidate
    if config.truncate_candidate_words is not None:
        cand = list(cand)[: config.truncate_candidate_words]
    cand_ngrams = ngrams(_normalize(cand, config), n)
    cand_total = sum(cand_ngrams.values())
    scores = []
    for ref_tokens in references:
        ref_ngrams = ngrams(_normalize(ref_tokens, config), n)
        ref_total = sum(ref_ngrams.values())
        if ref_total == 0:
            raise EmptyReferenceError(
                f"reference has no {n}-grams after preprocessing"
            )
        matched = sum((cand_ngrams & ref_ngrams).values())
        scores.append(RougeScore.from_counts(matched, ref_total, cand_total))
    return _combine(scores, config.multi_ref)


def _truncate_sentences(sentences: list, limit: int | None) -> list:
    if limit is None:
        return sentences
    out = []
    used = 0
    for sent in sentences:
        if used >= limit:
            break
        take = list(sent)[: limit - used]
        used += len(take)
        if take:
            out.append(take)
    return out


def rouge_l(
    candidate: Sequence[Sequence[str]],
    references: Sequence[Sequence[Sequence[str]]],
    config: RougeConfig,
) -> RougeScore:
    """Summary-level LCS score over sentence-split token sequences.

    For each reference sentence the union of its LCS matches against
    every candidate sentence is credited; the total matched count is
    divided by reference length (recall) and candidate length (precision).
    """
    if not references:
        raise EmptyReferenceError("at least one reference is required")
    cand_sents = _truncate_sentences(list(candidate), config.truncate_candidate_words)
    vocab: dict = {}

    def ids(tokens):
        return [vocab.setdefault(t, len(vocab)) for t in tokens]

    cand_ids = [ids(_normalize(s, config)) for s in cand_sents]
    cand_total = sum(len(s) for s in cand_ids)
    scores = []
    for ref in references:
        ref_ids = [ids(_normalize(s, config)) for s in ref]
        ref_total = sum(len(s) for s in ref_ids)
        if ref_total == 0:
            raise EmptyReferenceError("reference has no tokens after preprocessing")
        matched = 0
        for r in ref_ids:
            union: set = set()
            for c in cand_ids:
                union.update(kernels.lcs_match_mask(r, c))
            matched += len(union)
        scores.append(RougeScore.from_counts(matched, ref_total, cand_total))
    return _combine(scores, config.multi_ref)


def lcs_length(a: Sequence, b: Sequence) -> int:
    """Longest common subsequence length of two token sequences."""
    vocab: dict = {}
    a_ids = [vocab.setdefault(t, len(vocab)) for t in a]
    b_ids = [vocab.setdefault(t, len(vocab)) for t in b]
    return kernels.lcs_length(a_ids, b_ids)
