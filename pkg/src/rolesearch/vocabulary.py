"""Two-tier corpus vocabulary and tokenization.

The top ``core_size`` words by corpus frequency form the core tier used
by the topic model, phrase extraction, and role definitions; the top
``keyword_size`` words (a superset) are kept for keyword search only.
Word ids are rank positions in the keyword tier, so ``id < len(core_words)``
tests core membership and ids are stable for a given corpus.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .corpus import RawDocument, TokenizedDocument
from .text import normalize_words

DEFAULT_CORE_SIZE = 10_000
DEFAULT_KEYWORD_SIZE = 100_000


@dataclass
class Vocabulary:
    core_words: list[str]
    keyword_words: list[str]
    word_counts: dict[str, int]
    n_tokens: int
    _ids: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        self._ids = {w: i for i, w in enumerate(self.keyword_words)}

    @property
    def core_size(self) -> int:
        return len(self.core_words)

    def id_of(self, word: str) -> int | None:
        """Keyword-tier id for a (lemmatized) word, or None if absent."""
        return self._ids.get(word)

    def word_of(self, token_id: int) -> str:
        return self.keyword_words[token_id]

    def is_core_id(self, token_id: int) -> bool:
        return 0 <= token_id < len(self.core_words)

    def count_of(self, word: str) -> int:
        return self.word_counts.get(word, 0)


def build_vocabulary(
    corpus: list[RawDocument],
    stop_words: frozenset[str],
    core_size: int = DEFAULT_CORE_SIZE,
    keyword_size: int = DEFAULT_KEYWORD_SIZE,
) -> Vocabulary:
    """Count lemmatized, stop-filtered body tokens and rank the tiers.

    Ranking is by descending corpus frequency, ties broken
    lexicographically. ``n_tokens`` counts every surviving token,
    duplicates included.
    """
    if not corpus:
        raise ValueError("cannot build a vocabulary from an empty corpus")
    if core_size < 1 or keyword_size < core_size:
        raise ValueError("need keyword_size >= core_size >= 1")
    counts: Counter[str] = Counter()
    for doc in corpus:
        counts.update(normalize_words(doc.body, stop_words))
    if not counts:
        raise ValueError("corpus is empty after stop-word filtering; nothing to index")
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    keyword_words = [w for w, _ in ranked[:keyword_size]]
    return Vocabulary(
        core_words=keyword_words[:core_size],
        keyword_words=keyword_words,
        word_counts=dict(counts),
        n_tokens=sum(counts.values()),
    )


def tokenize(
    doc: RawDocument, vocab: Vocabulary, stop_words: frozenset[str]
) -> TokenizedDocument:
    """Map a document body to core-vocabulary word ids in source order.

    Stop words and words outside the core tier are dropped; a document
    whose body survives as nothing is kept with an empty token list.
    """
    tokens = []
    for lemma in normalize_words(doc.body, stop_words):
        token_id = vocab.id_of(lemma)
        if token_id is not None and vocab.is_core_id(token_id):
            tokens.append(token_id)
    return TokenizedDocument(doc_id=doc.doc_id, title=doc.title, tokens=tokens, body=doc.body)
