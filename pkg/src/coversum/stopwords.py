"""Stopword lists: the embedded default plus file-based replacements."""

from functools import lru_cache
from importlib import resources
from pathlib import Path

DEFAULT_LIST_NAME = "smart-en-571"


def _parse(lines) -> frozenset:
    words = set()
    for line in lines:
        word = line.split("#", 1)[0].strip().lower()
        if word:
            words.add(word)
    return frozenset(words)


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset:
    """The embedded English list."""
    text = resources.files("coversum.data").joinpath("stopwords_smart.txt").read_text("utf-8")
    return _parse(text.splitlines())


def load_stopword_file(path) -> frozenset:
    """Load a replacement list: one token per line, '#' starts a comment."""
    return _parse(Path(path).read_text("utf-8").splitlines())
