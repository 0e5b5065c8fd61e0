"""Plain-text persistence for every index artifact.

An index directory holds:

    documents.jsonl   raw corpus records (doc_id, title, body, entities)
    vocabulary.tsv    rank, word, count (+ n_tokens and tier sizes in header)
    phrases.tsv       phrase id, score, count, word ids, surface
    tokens.tsv        doc_id, final (phrase-substituted) core token stream
    postings.tsv      token id, doc_id, in-document count
    stopwords.txt     the stop-word list the index was built with
    meta.json         sizes, mu, phrase fraction
    structure.tsv     knowledge structure (written by the entities step)
    entities.jsonl    per-document entity distributions and mentions
    model.txt         trained topic model
    topics.jsonl      user-topic registry
    roles.jsonl       role registry

All formats are versioned, line-oriented text.
"""

from __future__ import annotations

import json
from pathlib import Path

from .corpus import RawDocument, TokenizedDocument
from .keyword_search import KeywordIndex
from .knowledge import EntityRelevance, EntityStore
from .phrases import Phrase, PhraseTable
from .vocabulary import Vocabulary

VOCAB_MAGIC = "# rolesearch vocabulary v1"
PHRASES_MAGIC = "# rolesearch phrases v1"
TOKENS_MAGIC = "# rolesearch tokens v1"
POSTINGS_MAGIC = "# rolesearch postings v1"


class StorageError(ValueError):
    pass


def _check_magic(lines: list[str], magic: str, path) -> None:
    if not lines or lines[0] != magic:
        raise StorageError(f"{path}: expected header {magic!r}")


def save_documents(docs: list[RawDocument], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            record = {"doc_id": doc.doc_id, "title": doc.title, "body": doc.body}
            if doc.pre_labeled_entities:
                record["entities"] = list(doc.pre_labeled_entities)
            fh.write(json.dumps(record) + "\n")


def load_documents(path: str | Path) -> list[RawDocument]:
    docs = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        docs.append(
            RawDocument(
                doc_id=record["doc_id"],
                title=record.get("title", ""),
                body=record["body"],
                pre_labeled_entities=tuple(record.get("entities", ())),
            )
        )
    return docs


def save_vocabulary(vocab: Vocabulary, path: str | Path) -> None:
    lines = [
        VOCAB_MAGIC,
        f"# n_tokens={vocab.n_tokens} core_size={len(vocab.core_words)} "
        f"keyword_size={len(vocab.keyword_words)}",
    ]
    for rank, word in enumerate(vocab.keyword_words):
        lines.append(f"{rank}\t{word}\t{vocab.word_counts[word]}")
    # Words beyond the keyword tier still back n_tokens; keep their counts.
    extra = sorted(set(vocab.word_counts) - set(vocab.keyword_words))
    for word in extra:
        lines.append(f"-\t{word}\t{vocab.word_counts[word]}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_vocabulary(path: str | Path) -> Vocabulary:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    _check_magic(lines, VOCAB_MAGIC, path)
    header = dict(kv.split("=") for kv in lines[1].lstrip("# ").split())
    keyword_words: list[str] = []
    counts: dict[str, int] = {}
    for line in lines[2:]:
        if not line.strip():
            continue
        rank, word, count = line.split("\t")
        counts[word] = int(count)
        if rank != "-":
            keyword_words.append(word)
    return Vocabulary(
        core_words=keyword_words[: int(header["core_size"])],
        keyword_words=keyword_words,
        word_counts=counts,
        n_tokens=int(header["n_tokens"]),
    )


def save_phrases(table: PhraseTable, vocab: Vocabulary, path: str | Path) -> None:
    lines = [PHRASES_MAGIC, f"# budget={table.budget}"]
    for p in table.phrases:
        words = ",".join(str(w) for w in p.words)
        surface = " ".join(vocab.word_of(w) for w in p.words)
        lines.append(f"{p.phrase_id}\t{p.score!r}\t{p.count}\t{words}\t{surface}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_phrases(path: str | Path) -> PhraseTable:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    _check_magic(lines, PHRASES_MAGIC, path)
    budget = int(lines[1].lstrip("# ").split("=")[1])
    phrases = []
    for line in lines[2:]:
        if not line.strip():
            continue
        phrase_id, score, count, words, _ = line.split("\t")
        phrases.append(
            Phrase(
                words=tuple(int(w) for w in words.split(",")),
                phrase_id=int(phrase_id),
                score=float(score),
                count=int(count),
            )
        )
    return PhraseTable(phrases=phrases, budget=budget)


def save_tokens(docs: list[TokenizedDocument], path: str | Path) -> None:
    lines = [TOKENS_MAGIC]
    for doc in docs:
        lines.append(f"{doc.doc_id}\t{' '.join(str(t) for t in doc.tokens)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_tokens(
    path: str | Path, documents: dict[str, RawDocument] | None = None
) -> list[TokenizedDocument]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    _check_magic(lines, TOKENS_MAGIC, path)
    docs = []
    documents = documents or {}
    for line in lines[1:]:
        if not line.strip():
            continue
        doc_id, _, ids = line.partition("\t")
        raw = documents.get(doc_id)
        docs.append(
            TokenizedDocument(
                doc_id=doc_id,
                title=raw.title if raw else "",
                tokens=[int(t) for t in ids.split()] if ids else [],
                body=raw.body if raw else "",
            )
        )
    return docs


def save_postings(index: KeywordIndex, path: str | Path) -> None:
    lines = [
        POSTINGS_MAGIC,
        f"# n_tokens={index.n_tokens} mu={index.mu!r} n_docs={len(index.doc_ids)}",
    ]
    for doc_id in index.doc_ids:
        lines.append(f"doc\t{doc_id}")
    for token_id in sorted(index.postings):
        for doc_id, count in sorted(index.postings[token_id].items()):
            lines.append(f"{token_id}\t{doc_id}\t{count}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_postings(path: str | Path) -> KeywordIndex:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    _check_magic(lines, POSTINGS_MAGIC, path)
    header = dict(kv.split("=") for kv in lines[1].lstrip("# ").split())
    doc_ids: list[str] = []
    postings: dict[int, dict[str, int]] = {}
    for line in lines[2:]:
        if not line.strip():
            continue
        first, _, rest = line.partition("\t")
        if first == "doc":
            doc_ids.append(rest)
            continue
        doc_id, _, count = rest.partition("\t")
        postings.setdefault(int(first), {})[doc_id] = int(count)
    corpus_counts = {t: sum(d.values()) for t, d in postings.items()}
    return KeywordIndex(
        postings=postings,
        corpus_counts=corpus_counts,
        n_tokens=int(header["n_tokens"]),
        mu=float(header["mu"]),
        doc_ids=doc_ids,
    )


def save_entity_store(store: EntityStore, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc_id in sorted(store.relevance):
            rel = store.relevance[doc_id]
            fh.write(
                json.dumps(
                    {
                        "doc_id": doc_id,
                        "countries": rel.country_dist,
                        "regions": rel.region_dist,
                        "mentions": store.mentions.get(doc_id, {}),
                    }
                )
                + "\n"
            )


def load_entity_store(path: str | Path) -> EntityStore:
    store = EntityStore()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        store.add(
            record["doc_id"],
            EntityRelevance(
                doc_id=record["doc_id"],
                country_dist=record["countries"],
                region_dist=record["regions"],
            ),
            {k: int(v) for k, v in record["mentions"].items()},
        )
    return store
