"""Query Likelihood Model keyword scoring and ranking.

Per-term scores follow the additive smoothing form

    score = nKeywordInDoc + mu * nKeywordInCorpus / nTokens

with mu defaulting to 1000; a query's document score is the product of
its per-term scores, so a term absent from the whole corpus zeroes
every document. This is deliberately the count-plus-smoothing variant,
not a log-probability language model.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass

from .corpus import RawDocument
from .phrases import PhraseTable, empty_phrase_table
from .text import normalize_words
from .vocabulary import Vocabulary

logger = logging.getLogger(__name__)

DEFAULT_MU = 1000.0

# Sentinel id for query words outside the keyword tier; scores 0 everywhere.
OOV_TERM = -1


class EmptyIndexError(ValueError):
    pass


class EmptyQueryError(ValueError):
    pass


@dataclass(frozen=True)
class ScoredHit:
    doc_id: str
    score: float
    per_term_scores: tuple[float, ...]


@dataclass
class KeywordIndex:
    """Immutable postings over keyword-tier words and extracted phrases."""

    postings: dict[int, dict[str, int]]  # token_id -> doc_id -> in-doc count
    corpus_counts: dict[int, int]
    n_tokens: int
    mu: float
    doc_ids: list[str]

    def __post_init__(self):
        if self.n_tokens <= 0:
            raise EmptyIndexError("keyword index has no tokens")
        if self.mu <= 0:
            raise ValueError("mu must be positive")

    def in_doc_count(self, term: int, doc_id: str) -> int:
        return self.postings.get(term, {}).get(doc_id, 0)

    def corpus_count(self, term: int) -> int:
        return self.corpus_counts.get(term, 0)


def build_keyword_index(
    corpus: list[RawDocument],
    vocab: Vocabulary,
    table: PhraseTable | None,
    stop_words: frozenset[str],
    mu: float = DEFAULT_MU,
) -> KeywordIndex:
    """Count keyword-tier words and phrase occurrences per document.

    Word counts come from the full lemmatized stream (so constituent
    words of a phrase still count individually); phrase counts come from
    the phrase-substituted core stream.
    """
    table = table or empty_phrase_table()
    postings: dict[int, dict[str, int]] = {}
    for doc in corpus:
        lemmas = normalize_words(doc.body, stop_words)
        doc_counts: Counter[int] = Counter()
        core_stream: list[int] = []
        for lemma in lemmas:
            token_id = vocab.id_of(lemma)
            if token_id is None:
                continue
            doc_counts[token_id] += 1
            if vocab.is_core_id(token_id):
                core_stream.append(token_id)
        for phrase_id in _phrase_occurrences(core_stream, table):
            doc_counts[phrase_id] += 1
        for token_id, count in doc_counts.items():
            postings.setdefault(token_id, {})[doc.doc_id] = count
    corpus_counts = {t: sum(per_doc.values()) for t, per_doc in postings.items()}
    return KeywordIndex(
        postings=postings,
        corpus_counts=corpus_counts,
        n_tokens=vocab.n_tokens,
        mu=mu,
        doc_ids=sorted(doc.doc_id for doc in corpus),
    )


def _phrase_occurrences(tokens: list[int], table: PhraseTable) -> list[int]:
    if not len(table):
        return []
    out = []
    i = 0
    n = len(tokens)
    while i < n:
        phrase = None
        if i + 3 <= n:
            phrase = table.lookup((tokens[i], tokens[i + 1], tokens[i + 2]))
        if phrase is None and i + 2 <= n:
            phrase = table.lookup((tokens[i], tokens[i + 1]))
        if phrase is None:
            i += 1
        else:
            out.append(phrase.phrase_id)
            i += len(phrase.words)
    return out


def qlm_term_score(n_in_doc: float, n_in_corpus: float, n_tokens: float, mu: float) -> float:
    """One term's contribution: in-document count plus smoothing."""
    if n_tokens <= 0:
        raise EmptyIndexError("n_tokens must be positive; the index is empty")
    return n_in_doc + mu * n_in_corpus / n_tokens


def qlm_query_score(doc_id: str, terms: list[int], index: KeywordIndex) -> ScoredHit:
    """Product of per-term scores for one document."""
    if not terms:
        raise EmptyQueryError("cannot score an empty term list")
    per_term = []
    score = 1.0
    for term in terms:
        s = qlm_term_score(
            index.in_doc_count(term, doc_id), index.corpus_count(term), index.n_tokens, index.mu
        )
        per_term.append(s)
        score *= s
    return ScoredHit(doc_id=doc_id, score=score, per_term_scores=tuple(per_term))


def normalize_query(
    query: str,
    vocab: Vocabulary,
    table: PhraseTable | None,
    stop_words: frozenset[str],
) -> tuple[list[int], list[str]]:
    """Lemmatize, stop-filter, and phrase-substitute a query string.

    Returns (term ids, out-of-vocabulary words). OOV words stay in the
    term list as :data:`OOV_TERM` so they zero the product, matching the
    per-document formula.
    """
    table = table or empty_phrase_table()
    lemmas = normalize_words(query, stop_words)
    raw_terms: list[int] = []
    oov: list[str] = []
    for lemma in lemmas:
        token_id = vocab.id_of(lemma)
        if token_id is None:
            oov.append(lemma)
            raw_terms.append(OOV_TERM)
        else:
            raw_terms.append(token_id)

    terms: list[int] = []
    i = 0
    n = len(raw_terms)
    while i < n:
        phrase = None
        if i + 3 <= n:
            phrase = table.lookup(tuple(raw_terms[i : i + 3]))
        if phrase is None and i + 2 <= n:
            phrase = table.lookup(tuple(raw_terms[i : i + 2]))
        if phrase is None:
            terms.append(raw_terms[i])
            i += 1
        else:
            terms.append(phrase.phrase_id)
            i += len(phrase.words)
    return terms, oov


def rank_by_keywords(
    query: str,
    index: KeywordIndex,
    vocab: Vocabulary,
    table: PhraseTable | None = None,
    k: int = 20,
    stop_words: frozenset[str] = frozenset(),
) -> list[ScoredHit]:
    """Score every indexed document against the query and return top-k.

    Ordering is score descending, doc_id ascending on ties.
    """
    terms, oov = normalize_query(query, vocab, table, stop_words)
    if not terms:
        raise EmptyQueryError(f"query {query!r} is empty after normalization")
    if oov:
        logger.warning("query terms outside the keyword vocabulary: %s", ", ".join(oov))
    hits = [qlm_query_score(doc_id, terms, index) for doc_id in index.doc_ids]
    hits.sort(key=lambda h: (-h.score, h.doc_id))
    return hits[:k]
