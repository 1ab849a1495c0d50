"""Deterministic text normalization: sentence splitting, tokenization,
stemming, stopword flagging and n-gram extraction.

Everything here is a pure function of its inputs; identical input and
config always produce identical output.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .porter import stem
from .stopwords import default_stopwords

__all__ = [
    "Token",
    "TokenizedSentence",
    "TokenizedDocument",
    "TokenizerConfig",
    "split_sentences",
    "tokenize",
    "tokenize_document",
    "document_from_sentences",
    "ngrams",
    "stem",
]

# Words that end with a period without terminating a sentence. Titles,
# months and weekdays are only abbreviations when capitalized ("sat." is
# usually the verb); the second tier matches in any case.
_CAP_ABBREVIATIONS = frozenset(
    """
    Dr Mr Mrs Ms Prof Rev Fr Sr Jr St Gen Sen Rep Gov Capt Sgt Col Lt Cmdr
    Maj Adm Hon Pres Supt Det Insp Mt Ft Rd Ave Blvd Dept Univ Assn Bros
    Inc Ltd Co Corp Jan Feb Mar Apr Jun Jul Aug Sep Sept Oct Nov Dec Mon
    Tue Tues Wed Thu Thurs Fri Sat Sun
    """.split()
)
_ANY_ABBREVIATIONS = frozenset("vs etc al eg ie cf approx fig vol".split())

_PARAGRAPH = re.compile(r"\n\s*\n")
_BOUNDARY = re.compile(r"[.!?]+[\"'”’)\]]*\s+(?=[\"'“‘(\[]*[A-Z0-9])")
_TRAILING_WORD = re.compile(r"[A-Za-z]+$")

_WORD_LEGACY = re.compile(r"[A-Za-z0-9]+")
_WORD_MODERN = re.compile(r"\d+(?:[.,]\d+)+|[A-Za-z0-9]+")
_NUM_WITH_SEP = re.compile(r"\d+(?:[.,]\d+)+$")


@dataclass(frozen=True)
class TokenizerConfig:
    """Normalization options.

    legacy_numbers replicates the historical scorer behavior: numbers are
    split at commas and decimal points ("50,000" -> "50", "000") and
    numeric tokens survive stopword removal. The modern mode keeps such
    numbers as a single token with the separators removed.
    """

    stem: bool = False
    legacy_numbers: bool = True
    stopwords: frozenset = field(default_factory=default_stopwords)


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    is_stopword: bool = False
    is_numeric: bool = False


@dataclass(frozen=True)
class TokenizedSentence:
    index: int
    raw: str
    tokens: tuple


@dataclass(frozen=True)
class TokenizedDocument:
    id: str
    sentences: tuple

    @property
    def word_count(self) -> int:
        return sum(len(s.tokens) for s in self.sentences)

    def surface_tokens(self) -> list:
        return [t.surface for s in self.sentences for t in s.tokens]


def split_sentences(text: str) -> list:
    """Split text into sentences with a rule-based boundary detector.

    Boundaries are terminal punctuation (plus closing quotes) followed by
    whitespace and an uppercase/digit start; a known abbreviation or a
    single-letter initial before the period suppresses the split. Blank
    lines always separate sentences. All non-whitespace characters of the
    input are preserved, in order, across the returned pieces.
    """
    sentences = []
    for block in _PARAGRAPH.split(text):
        start = 0
        for match in _BOUNDARY.finditer(block):
            word = _TRAILING_WORD.search(block, start, match.start())
            if word:
                w = word.group()
                if (w in _CAP_ABBREVIATIONS or w.lower() in _ANY_ABBREVIATIONS
                        or (len(w) == 1 and w.isupper())):
                    continue
            piece = block[start : match.end()].strip()
            if piece:
                sentences.append(piece)
            start = match.end()
        tail = block[start:].strip()
        if tail:
            sentences.append(tail)
    return sentences


def _normalize_word(surface: str, legacy_numbers: bool) -> str:
    lowered = surface.lower()
    if not legacy_numbers and _NUM_WITH_SEP.fullmatch(lowered):
        return lowered.replace(",", "").replace(".", "")
    return lowered


def tokenize(sentence: str, config: TokenizerConfig | None = None) -> list:
    """Tokenize one sentence into Token records.

    Tokens are maximal ASCII alphanumeric runs; in legacy-number mode a
    comma or decimal point therefore splits a number into separate digit
    groups, while the modern mode keeps it whole.
    """
    config = config or TokenizerConfig()
    pattern = _WORD_LEGACY if config.legacy_numbers else _WORD_MODERN
    tokens = []
    for match in pattern.finditer(sentence):
        surface = match.group()
        base = _normalize_word(surface, config.legacy_numbers)
        numeric = base.isdigit()
        if numeric and config.legacy_numbers:
            stopword = False
        else:
            stopword = base in config.stopwords
        normalized = stem(base) if config.stem else base
        tokens.append(Token(surface, normalized, stopword, numeric))
    return tokens


def document_from_sentences(
    doc_id: str, sentences: Iterable[str], config: TokenizerConfig | None = None
) -> TokenizedDocument:
    """Build a document from pre-split sentences; token-less ones are dropped."""
    config = config or TokenizerConfig()
    kept = []
    for raw in sentences:
        tokens = tokenize(raw, config)
        if tokens:
            kept.append(TokenizedSentence(len(kept), raw, tuple(tokens)))
    return TokenizedDocument(doc_id, tuple(kept))


def tokenize_document(doc_id: str, text: str, config: TokenizerConfig | None = None) -> TokenizedDocument:
    """Run the full pipeline on raw text."""
    return document_from_sentences(doc_id, split_sentences(text), config)


def ngrams(tokens: Sequence[str] | Iterable[str], n: int) -> Counter:
    """Multiset of n-grams as a Counter of tuples; n must be >= 1."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    items = list(tokens)
    return Counter(tuple(items[i : i + n]) for i in range(len(items) - n + 1))
