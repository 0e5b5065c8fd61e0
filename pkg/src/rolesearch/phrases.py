"""N-gram phrase extraction and substitution.

A bigram or trigram is significant when it occurs more often than the
independence expectation built from its constituent word counts:

    bigram:  count - (n1 * n2) / n_tokens
    trigram: count - (n1 * n2 * n3) / n_tokens^2

Uniformly distributed words therefore score zero and never form
phrases. The highest-scoring phrases are kept, up to a budget of 15%
of the core vocabulary (round half up), and are substituted into token
streams as single tokens thereafter.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .corpus import TokenizedDocument
from .vocabulary import Vocabulary

DEFAULT_PHRASE_FRACTION = 0.15


@dataclass(frozen=True)
class Phrase:
    words: tuple[int, ...]  # constituent word ids, length 2 or 3
    phrase_id: int
    score: float
    count: int


@dataclass
class PhraseTable:
    phrases: list[Phrase]
    budget: int
    _by_words: dict[tuple[int, ...], Phrase] = field(init=False, repr=False)
    _by_id: dict[int, Phrase] = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.phrases) > self.budget:
            raise ValueError(f"{len(self.phrases)} phrases exceed the budget {self.budget}")
        for p in self.phrases:
            if len(p.words) not in (2, 3):
                raise ValueError(f"phrase {p.phrase_id} is not a bigram or trigram")
            if p.score <= 0:
                raise ValueError(f"phrase {p.phrase_id} has non-positive score {p.score}")
        self._by_words = {p.words: p for p in self.phrases}
        self._by_id = {p.phrase_id: p for p in self.phrases}

    def __len__(self) -> int:
        return len(self.phrases)

    def lookup(self, words: tuple[int, ...]) -> Phrase | None:
        return self._by_words.get(words)

    def by_id(self, phrase_id: int) -> Phrase | None:
        return self._by_id.get(phrase_id)

    def surface(self, phrase_id: int, vocab: Vocabulary) -> str:
        phrase = self._by_id[phrase_id]
        return " ".join(vocab.word_of(w) for w in phrase.words)


def empty_phrase_table() -> PhraseTable:
    return PhraseTable(phrases=[], budget=0)


def bigram_score(n_phrase: float, n_word1: float, n_word2: float, n_tokens: float) -> float:
    """Observed bigram count minus its independence expectation."""
    if n_tokens <= 0:
        raise ValueError("n_tokens must be positive")
    return n_phrase - (n_word1 * n_word2) / n_tokens


def trigram_score(
    n_phrase: float, n_word1: float, n_word2: float, n_word3: float, n_tokens: float
) -> float:
    """Observed trigram count minus its independence expectation."""
    if n_tokens <= 0:
        raise ValueError("n_tokens must be positive")
    return n_phrase - (n_word1 * n_word2 * n_word3) / (n_tokens * n_tokens)


def phrase_budget(core_size: int, fraction: float = DEFAULT_PHRASE_FRACTION) -> int:
    """Phrase budget: fraction of the core vocabulary, rounded half up."""
    return int(core_size * fraction + 0.5)


def extract_phrases(
    corpus: list[TokenizedDocument],
    vocab: Vocabulary,
    fraction: float = DEFAULT_PHRASE_FRACTION,
) -> PhraseTable:
    """Score every adjacent bigram and trigram and keep the budget best.

    Adjacency is counted on the tokenized (stop-filtered, core-only)
    streams. Only positive scores qualify; ties break by higher raw
    count, then lexicographically on the constituent words. Phrase ids
    start after the keyword tier so they never collide with word ids.
    """
    bigrams: Counter[tuple[int, ...]] = Counter()
    trigrams: Counter[tuple[int, ...]] = Counter()
    for doc in corpus:
        t = doc.tokens
        for i in range(len(t) - 1):
            bigrams[(t[i], t[i + 1])] += 1
        for i in range(len(t) - 2):
            trigrams[(t[i], t[i + 1], t[i + 2])] += 1

    n_tokens = vocab.n_tokens
    counts = vocab.word_counts
    candidates: list[tuple[float, int, tuple[int, ...], tuple[str, ...]]] = []
    for words, count in bigrams.items():
        w1, w2 = (vocab.word_of(w) for w in words)
        score = bigram_score(count, counts[w1], counts[w2], n_tokens)
        if score > 0:
            candidates.append((score, count, words, (w1, w2)))
    for words, count in trigrams.items():
        w1, w2, w3 = (vocab.word_of(w) for w in words)
        score = trigram_score(count, counts[w1], counts[w2], counts[w3], n_tokens)
        if score > 0:
            candidates.append((score, count, words, (w1, w2, w3)))

    candidates.sort(key=lambda c: (-c[0], -c[1], c[3]))
    budget = phrase_budget(vocab.core_size, fraction)
    offset = len(vocab.keyword_words)
    phrases = [
        Phrase(words=words, phrase_id=offset + rank, score=score, count=count)
        for rank, (score, count, words, _) in enumerate(candidates[:budget])
    ]
    return PhraseTable(phrases=phrases, budget=budget)


def apply_phrases(doc: TokenizedDocument, table: PhraseTable) -> TokenizedDocument:
    """Substitute phrase ids greedily left to right, longest match first."""
    tokens = doc.tokens
    out: list[int] = []
    i = 0
    n = len(tokens)
    while i < n:
        phrase = None
        if i + 3 <= n:
            phrase = table.lookup((tokens[i], tokens[i + 1], tokens[i + 2]))
        if phrase is None and i + 2 <= n:
            phrase = table.lookup((tokens[i], tokens[i + 1]))
        if phrase is None:
            out.append(tokens[i])
            i += 1
        else:
            out.append(phrase.phrase_id)
            i += len(phrase.words)
    return TokenizedDocument(doc_id=doc.doc_id, title=doc.title, tokens=out, body=doc.body)
