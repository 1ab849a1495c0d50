"""Coverage model: sentences cover weighted units under a size budget.

A document (or document collection) is materialized as a CoverageInstance:
a universe of units (words or stems), per-sentence cover sets with
implication degrees, per-unit importance weights, and a budget. Solvers
maximize the utility objective: sum over units of weight(t) times the best
degree any selected sentence gives t.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from statistics import fmean
from typing import Sequence

from .errors import EmptyDocumentError, ZeroBudgetError
from .porter import stem
from .textproc import TokenizedDocument

__all__ = [
    "ThoughtUnitScheme",
    "WeightPolicy",
    "CoverageInstance",
    "Summary",
    "build_instance",
    "ts_score",
    "utility",
]


class ThoughtUnitScheme(str, Enum):
    """Which normalized token form counts as a coverage unit.

    Stemming for the stems schemes is applied here, so documents should be
    tokenized without the tokenizer-level stem option.
    """

    ALL_WORDS = "words"
    WORDS_MINUS_STOPWORDS = "words-nostop"
    STEMS = "stems"
    STEMS_MINUS_STOPWORDS = "stems-nostop"

    def unit_of(self, token) -> str | None:
        if self in (ThoughtUnitScheme.WORDS_MINUS_STOPWORDS,
                    ThoughtUnitScheme.STEMS_MINUS_STOPWORDS):
            if token.is_stopword:
                return None
        if self in (ThoughtUnitScheme.STEMS, ThoughtUnitScheme.STEMS_MINUS_STOPWORDS):
            return stem(token.normalized)
        return token.normalized


class WeightPolicy(str, Enum):
    UNIFORM = "uniform"
    FREQUENCY = "frequency"
    POSITION = "position"


@dataclass(frozen=True)
class Summary:
    """An ordered selection of sentences with budget accounting.

    selected holds (document_id, sentence index) pairs in source order.
    optimal is set by the exact solver (False when a resource cap stopped
    the search before optimality was proven); other solvers leave it None.
    """

    selected: tuple
    size: int
    utility: float
    solver_tag: str
    optimal: bool | None = None


@dataclass(frozen=True)
class CoverageInstance:
    """One summarization problem over one or more documents.

    The universe is sorted lexicographically, so it does not depend on
    sentence order. Degrees are built boolean (1.0 on containment); the
    field accepts fractional values in [0, 1] for models that provide
    them. Position weights depend on sentence order by design.
    """

    document_ids: tuple
    universe: tuple
    sentence_covers: tuple       # per sentence: {unit index: degree}
    weights: tuple               # per unit index
    sentence_sizes: tuple        # per sentence, in budget units
    sentence_word_counts: tuple  # per sentence, surface words
    sentence_unit_seqs: tuple    # per sentence: unit indices incl. repeats
    sentence_keys: tuple         # per sentence: (document_id, sentence index)
    budget: int | None
    budget_unit: str
    scheme: ThoughtUnitScheme
    weighting: WeightPolicy
    _cover_sets: tuple = field(default=None, repr=False, compare=False)
    _key_to_pos: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        covers = tuple(
            frozenset(u for u, d in cover.items() if d > 0)
            for cover in self.sentence_covers
        )
        object.__setattr__(self, "_cover_sets", covers)
        object.__setattr__(
            self, "_key_to_pos", {key: i for i, key in enumerate(self.sentence_keys)}
        )

    @property
    def n_sentences(self) -> int:
        return len(self.sentence_keys)

    @property
    def cover_sets(self) -> tuple:
        return self._cover_sets

    def position_of(self, key) -> int:
        return self._key_to_pos[key]


def _document_weights(doc_units: list, sentence_indices: list, policy: WeightPolicy) -> dict:
    """Per-unit weight within one document.

    doc_units: unit occurrence list per sentence; sentence_indices: the
    within-document index of each of those sentences.
    """
    weights: dict = {}
    if policy is WeightPolicy.UNIFORM:
        for units in doc_units:
            for u in units:
                weights[u] = 1.0
    elif policy is WeightPolicy.FREQUENCY:
        for units in doc_units:
            for u in units:
                weights[u] = weights.get(u, 0.0) + 1.0
    elif policy is WeightPolicy.POSITION:
        for units, idx in zip(doc_units, sentence_indices):
            score = 1.0 / (1.0 + idx)
            for u in set(units):
                if score > weights.get(u, 0.0):
                    weights[u] = score
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unknown weight policy: {policy}")
    return weights


def build_instance(
    docs: TokenizedDocument | Sequence[TokenizedDocument],
    scheme: ThoughtUnitScheme = ThoughtUnitScheme.ALL_WORDS,
    weighting: WeightPolicy = WeightPolicy.UNIFORM,
    budget: int | None = None,
    budget_unit: str = "words",
) -> CoverageInstance:
    """Materialize documents as a coverage instance.

    Unit degrees are boolean (a sentence covers a unit iff it contains
    it). With several documents the universe is the union of the
    per-document unit sets and each shared unit gets the arithmetic mean
    of its per-document weights (consensus rule).
    """
    if isinstance(docs, TokenizedDocument):
        docs = [docs]
    docs = list(docs)
    if not docs:
        raise EmptyDocumentError("no documents given")
    if budget is not None and budget < 1:
        raise ZeroBudgetError(f"budget must be >= 1, got {budget}")
    if budget_unit not in ("words", "sentences"):
        raise ValueError(f"budget_unit must be 'words' or 'sentences', got {budget_unit!r}")

    per_doc_weights = []
    flat_unit_seqs = []   # per flat sentence: unit label occurrences
    flat_keys = []
    flat_words = []
    for doc in docs:
        doc_units = []
        indices = []
        for sent in doc.sentences:
            units = [u for u in (scheme.unit_of(t) for t in sent.tokens) if u is not None]
            if not units:
                continue
            doc_units.append(units)
            indices.append(sent.index)
            flat_unit_seqs.append(units)
            flat_keys.append((doc.id, sent.index))
            flat_words.append(len(sent.tokens))
        if not doc_units:
            raise EmptyDocumentError(
                f"document {doc.id!r} has no units under scheme {scheme.value}"
            )
        per_doc_weights.append(_document_weights(doc_units, indices, weighting))

    merged: dict = {}
    for weights in per_doc_weights:
        for unit, w in weights.items():
            merged.setdefault(unit, []).append(w)
    universe = tuple(sorted(merged))
    unit_index = {u: i for i, u in enumerate(universe)}
    weights = tuple(fmean(merged[u]) for u in universe)

    covers = []
    unit_seqs = []
    for units in flat_unit_seqs:
        seq = tuple(unit_index[u] for u in units)
        unit_seqs.append(seq)
        covers.append({u: 1.0 for u in set(seq)})

    if budget_unit == "words":
        sizes = tuple(flat_words)
    else:
        sizes = tuple(1 for _ in flat_keys)

    return CoverageInstance(
        document_ids=tuple(doc.id for doc in docs),
        universe=universe,
        sentence_covers=tuple(covers),
        weights=weights,
        sentence_sizes=sizes,
        sentence_word_counts=tuple(flat_words),
        sentence_unit_seqs=tuple(unit_seqs),
        sentence_keys=tuple(flat_keys),
        budget=budget,
        budget_unit=budget_unit,
        scheme=scheme,
        weighting=weighting,
    )


def ts_score(unit: int, summary: Summary, instance: CoverageInstance) -> float:
    """Best implication degree any selected sentence gives the unit."""
    if not 0 <= unit < len(instance.universe):
        raise IndexError(f"unit index {unit} outside universe of size {len(instance.universe)}")
    best = 0.0
    for key in summary.selected:
        degree = instance.sentence_covers[instance.position_of(key)].get(unit, 0.0)
        if degree > best:
            best = degree
    return best


def utility(summary: Summary, instance: CoverageInstance) -> float:
    """Objective value: sum over units of weight times best degree."""
    best: dict = {}
    for key in summary.selected:
        for unit, degree in instance.sentence_covers[instance.position_of(key)].items():
            if degree > best.get(unit, 0.0):
                best[unit] = degree
    return sum(instance.weights[u] * d for u, d in best.items())
