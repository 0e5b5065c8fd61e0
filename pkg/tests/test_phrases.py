from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rolesearch.corpus import RawDocument, TokenizedDocument
from rolesearch.phrases import (
    Phrase,
    PhraseTable,
    apply_phrases,
    bigram_score,
    extract_phrases,
    phrase_budget,
    trigram_score,
)
from rolesearch.text import load_stop_words
from rolesearch.vocabulary import build_vocabulary, tokenize

STOP = load_stop_words()


class TestScores:
    def test_bigram_uniform_distribution_scores_zero(self):
        assert bigram_score(1, 10, 20, 200) == 0.0

    def test_bigram_arithmetic(self):
        # 50 - 60*70/100000
        assert bigram_score(50, 60, 70, 100_000) == pytest.approx(49.958, abs=1e-12)

    def test_bigram_never_cooccurring_is_negative(self):
        assert bigram_score(0, 10, 10, 100) == -1.0

    def test_trigram_cancellation(self):
        # n_tokens chosen so product / n_tokens^2 == n_phrase
        assert trigram_score(1, 10, 20, 10, 2000 ** 0.5) == pytest.approx(0.0, abs=1e-9)
        assert trigram_score(1, 100, 100, 100, 1000) == 0.0

    def test_trigram_arithmetic(self):
        # 30 - (100*100*100)/1000^2 = 30 - 1 = 29
        assert trigram_score(30, 100, 100, 100, 1000) == pytest.approx(29.0, abs=1e-12)

    def test_trigram_zero_factor(self):
        assert trigram_score(5, 0, 10, 10, 100) == 5.0

    def test_zero_tokens_rejected(self):
        with pytest.raises(ValueError):
            bigram_score(1, 1, 1, 0)
        with pytest.raises(ValueError):
            trigram_score(1, 1, 1, 1, 0)

    @given(
        st.integers(min_value=1, max_value=10_000),
        st.integers(min_value=1, max_value=10_000),
        st.integers(min_value=1, max_value=1_000_000),
    )
    def test_bigram_zero_property(self, n1, n2, n_tokens):
        n_phrase = n1 * n2 / n_tokens
        assert abs(bigram_score(n_phrase, n1, n2, n_tokens)) <= 1e-9

    @given(
        st.integers(min_value=1, max_value=10_000),
        st.integers(min_value=1, max_value=10_000),
        st.integers(min_value=1, max_value=10_000),
        st.integers(min_value=1, max_value=1_000_000),
    )
    def test_trigram_zero_property(self, n1, n2, n3, n_tokens):
        n_phrase = n1 * n2 * n3 / (n_tokens * n_tokens)
        assert abs(trigram_score(n_phrase, n1, n2, n3, n_tokens)) <= 1e-9


class TestPhraseTableInvariants:
    def test_non_positive_score_rejected(self):
        with pytest.raises(ValueError, match="non-positive"):
            PhraseTable(phrases=[Phrase((0, 1), 10, 0.0, 1)], budget=5)

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError, match="bigram or trigram"):
            PhraseTable(phrases=[Phrase((0,), 10, 1.0, 1)], budget=5)

    def test_budget_overflow_rejected(self):
        phrases = [Phrase((0, i + 1), 10 + i, 1.0, 1) for i in range(3)]
        with pytest.raises(ValueError, match="exceed the budget"):
            PhraseTable(phrases=phrases, budget=2)


def test_phrase_budget_rounds_half_up():
    assert phrase_budget(100) == 15
    assert phrase_budget(110) == 17  # 16.5 rounds up
    assert phrase_budget(10) == 2  # 1.5 rounds up
    assert phrase_budget(3) == 0  # 0.45 rounds down


def _tokenized(vocab, bodies):
    docs = [RawDocument(doc_id=f"d{i}", title="", body=b) for i, b in enumerate(bodies)]
    return [tokenize(d, vocab, STOP) for d in docs]


def _brute_force_phrases(tokenized, vocab, budget):
    """Exhaustive oracle: enumerate all adjacent n-grams, score from raw
    counts, apply the tie rules."""
    bigrams, trigrams = Counter(), Counter()
    for doc in tokenized:
        t = doc.tokens
        bigrams.update(zip(t, t[1:]))
        trigrams.update(zip(t, t[1:], t[2:]))
    rows = []
    for (a, b), c in bigrams.items():
        s = c - vocab.word_counts[vocab.word_of(a)] * vocab.word_counts[
            vocab.word_of(b)] / vocab.n_tokens
        if s > 0:
            rows.append((s, c, (a, b), (vocab.word_of(a), vocab.word_of(b))))
    for (a, b, d), c in trigrams.items():
        s = c - (
            vocab.word_counts[vocab.word_of(a)]
            * vocab.word_counts[vocab.word_of(b)]
            * vocab.word_counts[vocab.word_of(d)]
        ) / vocab.n_tokens ** 2
        if s > 0:
            rows.append((s, c, (a, b, d),
                         (vocab.word_of(a), vocab.word_of(b), vocab.word_of(d))))
    rows.sort(key=lambda r: (-r[0], -r[1], r[3]))
    return [r[2] for r in rows[:budget]]


class TestExtractPhrases:
    def test_inseparable_pair_outranks_incidental(self):
        # 50 documents: "hong kong" always adjacent, never apart; the
        # filler words pair up only incidentally.
        filler = ["alpha", "bravo", "carol", "delta", "echo2", "forge"]
        bodies = []
        for i in range(50):
            mix = [filler[(i + j) % len(filler)] for j in range(6)]
            bodies.append(f"{mix[0]} {mix[1]} hong kong {mix[2]} {mix[3]} {mix[4]} {mix[5]}")
        docs = [RawDocument(doc_id=f"d{i}", title="", body=b) for i, b in enumerate(bodies)]
        vocab = build_vocabulary(docs, STOP)
        tokenized = [tokenize(d, vocab, STOP) for d in docs]
        table = extract_phrases(tokenized, vocab)
        assert len(table) >= 1
        best = table.phrases[0]
        assert [vocab.word_of(w) for w in best.words] == ["hong", "kong"]

    def test_single_repeated_word_scores_zero_everywhere(self):
        docs = [RawDocument(doc_id="d0", title="", body="word " * 40)]
        vocab = build_vocabulary(docs, STOP)
        tokenized = [tokenize(d, vocab, STOP) for d in docs]
        # n - n*n/n = 0: nothing positive, table stays empty
        table = extract_phrases(tokenized, vocab)
        assert len(table) == 0

    def test_budget_limits_table(self):
        words = [f"word{i:03d}" for i in range(100)]
        body = " ".join(words) + " " + " ".join(words)
        docs = [RawDocument(doc_id="d0", title="", body=body)]
        vocab = build_vocabulary(docs, STOP)
        tokenized = [tokenize(d, vocab, STOP) for d in docs]
        table = extract_phrases(tokenized, vocab)
        assert vocab.core_size == 100
        assert table.budget == 15
        assert len(table) <= 15

    def test_matches_brute_force_oracle(self):
        bodies = []
        for i in range(60):
            parts = []
            if i % 2 == 0:
                parts.append("prime minister said")
            if i % 3 == 0:
                parts.append("hong kong market")
            parts.append(f"noise{i % 7} noise{(i + 1) % 5} extra{i % 4}")
            bodies.append(" ".join(parts))
        docs = [RawDocument(doc_id=f"d{i:02d}", title="", body=b) for i, b in enumerate(bodies)]
        vocab = build_vocabulary(docs, STOP)
        tokenized = [tokenize(d, vocab, STOP) for d in docs]
        table = extract_phrases(tokenized, vocab)
        oracle = _brute_force_phrases(tokenized, vocab, table.budget)
        assert [p.words for p in table.phrases] == oracle
        assert all(p.score > 0 for p in table.phrases)

    def test_phrase_ids_disjoint_from_word_ids(self):
        docs = [RawDocument(doc_id="d0", title="", body="hong kong " * 30 + "alpha beta")]
        vocab = build_vocabulary(docs, STOP)
        tokenized = [tokenize(d, vocab, STOP) for d in docs]
        table = extract_phrases(tokenized, vocab)
        word_ids = set(range(len(vocab.keyword_words)))
        assert word_ids.isdisjoint({p.phrase_id for p in table.phrases})


class TestApplyPhrases:
    @pytest.fixture
    def vocab(self):
        docs = [RawDocument(doc_id="d0", title="",
                            body="prime minister said prime minister office")]
        return build_vocabulary(docs, STOP)

    def test_bigram_substitution(self, vocab):
        ids = {w: vocab.id_of(w) for w in ["prime", "minister", "said"]}
        table = PhraseTable(
            phrases=[Phrase(words=(ids["prime"], ids["minister"]), phrase_id=900,
                            score=2.0, count=2)],
            budget=5,
        )
        doc = TokenizedDocument(doc_id="d", title="",
                                tokens=[ids["prime"], ids["minister"], ids["said"]])
        out = apply_phrases(doc, table)
        assert out.tokens == [900, ids["said"]]

    def test_no_match_leaves_document_unchanged(self, vocab):
        table = PhraseTable(phrases=[], budget=0)
        doc = TokenizedDocument(doc_id="d", title="", tokens=[0, 1, 2])
        assert apply_phrases(doc, table).tokens == [0, 1, 2]

    def test_trigram_beats_prefix_bigram(self, vocab):
        ids = {w: vocab.id_of(w) for w in ["prime", "minister", "said"]}
        tri = Phrase(words=(ids["prime"], ids["minister"], ids["said"]), phrase_id=901,
                     score=3.0, count=3)
        bi = Phrase(words=(ids["prime"], ids["minister"]), phrase_id=900, score=2.0, count=2)
        # Longest match must win regardless of table order.
        for phrases in ([tri, bi], [bi, tri]):
            table = PhraseTable(phrases=list(phrases), budget=5)
            doc = TokenizedDocument(
                doc_id="d", title="", tokens=[ids["prime"], ids["minister"], ids["said"]]
            )
            assert apply_phrases(doc, table).tokens == [901]

    def test_non_overlapping_left_to_right(self, vocab):
        ids = {w: vocab.id_of(w) for w in ["prime", "minister", "office"]}
        table = PhraseTable(
            phrases=[
                Phrase(words=(ids["prime"], ids["minister"]), phrase_id=900, score=2.0, count=2),
                Phrase(words=(ids["minister"], ids["office"]), phrase_id=902, score=1.0, count=1),
            ],
            budget=5,
        )
        doc = TokenizedDocument(
            doc_id="d", title="", tokens=[ids["prime"], ids["minister"], ids["office"]]
        )
        # "prime minister" consumes the shared token first.
        assert apply_phrases(doc, table).tokens == [900, ids["office"]]

    @given(st.lists(st.integers(min_value=0, max_value=6), max_size=40))
    def test_substitution_never_increases_token_count(self, tokens):
        table = PhraseTable(
            phrases=[
                Phrase(words=(0, 1), phrase_id=100, score=1.0, count=1),
                Phrase(words=(2, 3, 4), phrase_id=101, score=1.0, count=1),
            ],
            budget=5,
        )
        doc = TokenizedDocument(doc_id="d", title="", tokens=list(tokens))
        out = apply_phrases(doc, table)
        assert len(out.tokens) <= len(tokens)
        # Re-expanding the phrases reproduces the original stream.
        expanded = []
        for t in out.tokens:
            phrase = table.by_id(t)
            expanded.extend(phrase.words if phrase else [t])
        assert expanded == list(tokens)
