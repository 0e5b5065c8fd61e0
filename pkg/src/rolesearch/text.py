"""Word extraction, stop-word filtering, and a light rule-based lemmatizer.

The lemmatizer only undoes plural/third-person ``-s`` inflection; past
participles and gerunds pass through untouched ("closed" stays "closed",
"dealings" becomes "dealing"). Unknown forms pass through unchanged and
the mapping is idempotent.
"""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path

_WORD_RE = re.compile(r"[a-z0-9]+")

# Irregular plurals and forms the suffix rules would mangle.
_IRREGULAR = {
    "men": "man",
    "women": "woman",
    "children": "child",
    "feet": "foot",
    "teeth": "tooth",
    "geese": "goose",
    "mice": "mouse",
    "oxen": "ox",
    "movies": "movie",
    "shoes": "shoe",
    "heroes": "hero",
    "buses": "bus",
    "goes": "go",
    "does": "do",
    "analyses": "analysis",
    "crises": "crisis",
    "indices": "index",
    "matrices": "matrix",
    "appendices": "appendix",
    "criteria": "criterion",
    "phenomena": "phenomenon",
}

# Singulars that happen to end in -s; never stripped.
_NOT_PLURAL = frozenset(
    """
    news series species bias alias atlas canvas gas lens chaos tennis
    texas kansas wales athens brussels christmas diabetes measles
    """.split()
)


def lemmatize(word: str) -> str:
    """Return the singular form of a plural word; other words unchanged.

    Expects a single lowercased, whitespace-free token.
    """
    if word in _IRREGULAR:
        return _IRREGULAR[word]
    if word in _NOT_PLURAL:
        return word
    if len(word) < 4 or not word.endswith("s"):
        return word
    if word.endswith(("ss", "us", "is", "ics")):
        return word
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith(("xes", "ches", "shes", "sses", "zes", "oes")) and len(word) > 4:
        return word[:-2]
    return word[:-1]


def extract_words(text: str) -> list[str]:
    """Split raw text into lowercase word tokens.

    Apostrophes are elided ("Iran's" -> "irans"), everything else
    non-alphanumeric separates tokens. Single characters and pure
    numbers are dropped.
    """
    text = text.lower().replace("'", "").replace("’", "")
    return [w for w in _WORD_RE.findall(text) if len(w) >= 2 and not w.isdigit()]


def normalize_words(text: str, stop_words: frozenset[str]) -> list[str]:
    """Extract, stop-filter, and lemmatize, preserving source order.

    Stop words are checked both on the surface form and on the lemma, so
    plural stop words do not sneak through.
    """
    out = []
    for word in extract_words(text):
        if word in stop_words:
            continue
        lemma = lemmatize(word)
        if lemma in stop_words:
            continue
        out.append(lemma)
    return out


def _read_word_file(path: Path) -> frozenset[str]:
    words = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


def load_stop_words(path: str | Path | None = None) -> frozenset[str]:
    """Load a stop-word list; the shipped default when no path is given."""
    if path is not None:
        return _read_word_file(Path(path))
    with resources.as_file(resources.files("rolesearch") / "data" / "stopwords.txt") as p:
        return _read_word_file(p)


def load_city_exclusions(path: str | Path | None = None) -> frozenset[str]:
    """Load the ambiguous-city-name exclusion list (shipped default)."""
    if path is not None:
        return _read_word_file(Path(path))
    with resources.as_file(
        resources.files("rolesearch") / "data" / "city_exclusions.txt"
    ) as p:
        return _read_word_file(p)
