"""Pipeline orchestration and a facade over one index directory.

``run_etl`` builds every corpus artifact; ``SearchEngine`` loads
whatever artifacts exist and exposes search, topic definition, and role
management to the CLI and the HTTP service. Loaded artifacts are
immutable; re-indexing writes a fresh directory and a new engine is
constructed over it.
"""

from __future__ import annotations

import json
import shutil
from dataclasses import dataclass
from pathlib import Path

from . import storage
from .corpus import RawDocument, read_corpus
from .keyword_search import (
    DEFAULT_MU,
    KeywordIndex,
    build_keyword_index,
    normalize_query,
    rank_by_keywords,
)
from .knowledge import (
    KnowledgeStructure,
    build_entity_store,
    entity_score,
    load_structure,
    save_structure,
)
from .lda import TopicModel, load_model, save_model, top_words, train
from .phrases import DEFAULT_PHRASE_FRACTION, apply_phrases, extract_phrases
from .registry import Registry, role_registry, topic_registry
from .roles import CombinedHit, Role, role_search
from .text import load_stop_words
from .topics import (
    DEFAULT_BOUNDARY_BAND,
    DEFAULT_CLEAR_HITS,
    UserTopic,
    build_centroid,
    calibrate,
    clear_hits,
    select_boundary,
    suggest_related,
    topic_score,
)
from .vocabulary import (
    DEFAULT_CORE_SIZE,
    DEFAULT_KEYWORD_SIZE,
    Vocabulary,
    build_vocabulary,
    tokenize,
)


@dataclass
class EtlConfig:
    core_size: int = DEFAULT_CORE_SIZE
    keyword_size: int = DEFAULT_KEYWORD_SIZE
    phrase_fraction: float = DEFAULT_PHRASE_FRACTION
    mu: float = DEFAULT_MU
    stopwords_path: str | None = None


def run_etl(
    corpus: list[RawDocument] | str | Path,
    out_dir: str | Path,
    config: EtlConfig | None = None,
) -> "SearchEngine":
    """Corpus in, index directory out: vocabulary, phrases, tokens, postings."""
    config = config or EtlConfig()
    if not isinstance(corpus, list):
        corpus = read_corpus(corpus)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    stop_words = load_stop_words(config.stopwords_path)
    vocab = build_vocabulary(corpus, stop_words, config.core_size, config.keyword_size)
    tokenized = [tokenize(doc, vocab, stop_words) for doc in corpus]
    table = extract_phrases(tokenized, vocab, config.phrase_fraction)
    final_tokens = [apply_phrases(doc, table) for doc in tokenized]
    index = build_keyword_index(corpus, vocab, table, stop_words, config.mu)

    storage.save_documents(corpus, out / "documents.jsonl")
    storage.save_vocabulary(vocab, out / "vocabulary.tsv")
    storage.save_phrases(table, vocab, out / "phrases.tsv")
    storage.save_tokens(final_tokens, out / "tokens.tsv")
    storage.save_postings(index, out / "postings.tsv")
    if config.stopwords_path:
        shutil.copyfile(config.stopwords_path, out / "stopwords.txt")
    else:
        (out / "stopwords.txt").write_text(
            "\n".join(sorted(stop_words)) + "\n", encoding="utf-8"
        )
    (out / "meta.json").write_text(
        json.dumps(
            {
                "format": "rolesearch-index-v1",
                "core_size": config.core_size,
                "keyword_size": config.keyword_size,
                "phrase_fraction": config.phrase_fraction,
                "mu": config.mu,
                "n_docs": len(corpus),
            },
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )
    return SearchEngine(out)


class SearchEngine:
    """One consistent snapshot of an index directory."""

    def __init__(self, index_dir: str | Path):
        self.index_dir = Path(index_dir)
        if not (self.index_dir / "vocabulary.tsv").exists():
            raise FileNotFoundError(
                f"{self.index_dir} does not contain an index (run etl first)"
            )
        self.stop_words = frozenset(
            w.strip()
            for w in (self.index_dir / "stopwords.txt").read_text(encoding="utf-8").splitlines()
            if w.strip()
        )
        self.vocab: Vocabulary = storage.load_vocabulary(self.index_dir / "vocabulary.tsv")
        self.phrases = storage.load_phrases(self.index_dir / "phrases.tsv")
        self.documents = {
            d.doc_id: d for d in storage.load_documents(self.index_dir / "documents.jsonl")
        }
        self.tokens = storage.load_tokens(self.index_dir / "tokens.tsv", self.documents)
        self.index: KeywordIndex = storage.load_postings(self.index_dir / "postings.tsv")

        self.structure: KnowledgeStructure | None = None
        if (self.index_dir / "structure.tsv").exists():
            self.structure = load_structure(self.index_dir / "structure.tsv")
        self.entity_store = None
        if (self.index_dir / "entities.jsonl").exists():
            self.entity_store = storage.load_entity_store(self.index_dir / "entities.jsonl")
        self.model: TopicModel | None = None
        if (self.index_dir / "model.txt").exists():
            self.model = load_model(self.index_dir / "model.txt")

        self.topics: Registry = topic_registry(self.index_dir / "topics.jsonl")
        self.roles: Registry = role_registry(self.index_dir / "roles.jsonl")

    # ----- indexing steps beyond etl -------------------------------------

    def build_entities(self, structure_path: str | Path,
                       exclusions_path: str | Path | None = None) -> None:
        self.structure = load_structure(structure_path, exclusions_path)
        save_structure(self.structure, self.index_dir / "structure.tsv")
        self.entity_store = build_entity_store(self.documents.values(), self.structure)
        storage.save_entity_store(self.entity_store, self.index_dir / "entities.jsonl")

    def train_model(self, n_topics: int, alpha: float | None = None, beta: float = 0.01,
                    n_sweeps: int = 500, seed: int = 0) -> TopicModel:
        self.model = train(self.tokens, n_topics, alpha, beta, n_sweeps, seed)
        save_model(self.model, self.index_dir / "model.txt")
        return self.model

    # ----- lookups --------------------------------------------------------

    def surfaces(self) -> dict[int, str]:
        """Token id -> display surface, covering words and phrases."""
        out = {i: w for i, w in enumerate(self.vocab.keyword_words)}
        for p in self.phrases.phrases:
            out[p.phrase_id] = self.phrases.surface(p.phrase_id, self.vocab)
        return out

    def title_of(self, doc_id: str) -> str:
        doc = self.documents.get(doc_id)
        return doc.title if doc else ""

    def _require_model(self) -> TopicModel:
        if self.model is None:
            raise RuntimeError("no topic model trained yet (run train first)")
        return self.model

    def _require_entities(self):
        if self.entity_store is None or self.structure is None:
            raise RuntimeError("no entity store built yet (run entities first)")
        return self.entity_store, self.structure

    # ----- search ----------------------------------------------------------

    def keyword_search(self, query: str, k: int = 20):
        return rank_by_keywords(
            query, self.index, self.vocab, self.phrases, k, self.stop_words
        )

    def role_search(self, query: str, role: Role | str, k: int = 20) -> list[CombinedHit]:
        if isinstance(role, str):
            role = self.roles.get(role)
        user_topic = self.topics.get(role.user_topic) if role.user_topic else None
        return role_search(
            query,
            role,
            index=self.index,
            vocab=self.vocab,
            table=self.phrases,
            stop_words=self.stop_words,
            entity_store=self.entity_store,
            structure=self.structure,
            model=self.model,
            user_topic=user_topic,
            k=k,
        )

    def entity_score(self, doc_id: str, target: str) -> float:
        store, ks = self._require_entities()
        return entity_score(doc_id, target, store, ks)

    def topic_score(self, doc_id: str, topic: UserTopic | str) -> float:
        if isinstance(topic, str):
            topic = self.topics.get(topic)
        return topic_score(doc_id, topic, self._require_model())

    def top_topic_words(self, topic: int, n: int = 7) -> list[str]:
        return top_words(self._require_model(), topic, n, self.surfaces())

    # ----- topic definition -------------------------------------------------

    def create_topic(self, name: str, seed: str) -> UserTopic:
        model = self._require_model()
        vocab_seed = seed.strip().lower()
        suggest_related(vocab_seed, model, self.vocab, 0)  # validates the seed word
        topic = UserTopic(topic_id=self.topics.next_id(), name=name, seed_words=[vocab_seed])
        self.topics.create(topic)
        return topic

    def suggestions(self, topic_id: str, n: int = 20) -> list[str]:
        topic = self.topics.get(topic_id)
        model = self._require_model()
        exclude = frozenset(topic.judged_words | set(topic.seed_words))
        out: list[str] = []
        for seed in topic.seed_words:
            for word in suggest_related(seed, model, self.vocab, n, exclude):
                if word not in out:
                    out.append(word)
        return out[:n]

    def judge_words(self, topic_id: str, version: int, accept: list[str],
                    reject: list[str]) -> UserTopic:
        def mutate(topic: UserTopic) -> UserTopic:
            accepted = topic.accepted_words + [w for w in accept
                                               if w not in topic.accepted_words]
            rejected = topic.rejected_words + [w for w in reject
                                               if w not in topic.rejected_words]
            updated = UserTopic(
                topic_id=topic.topic_id,
                name=topic.name,
                seed_words=topic.seed_words,
                accepted_words=accepted,
                rejected_words=rejected,
                centroid=topic.centroid,
                correction=topic.correction,
                status=topic.status,
                corrected_min=topic.corrected_min,
                corrected_max=topic.corrected_max,
                version=topic.version,
            )
            if updated.accepted_words:
                words = updated.seed_words + updated.accepted_words
                hits = clear_hits(words, self.index, self.vocab, DEFAULT_CLEAR_HITS)
                updated.centroid = build_centroid(hits, self._require_model())
            return updated

        return self.topics.update(topic_id, version, mutate)

    def boundary_docs(self, topic_id: str, band: int = DEFAULT_BOUNDARY_BAND) -> list[str]:
        return select_boundary(self.topics.get(topic_id), self._require_model(), band)

    def calibrate_topic(self, topic_id: str, version: int,
                        judgments: list[tuple[str, bool]]) -> UserTopic:
        model = self._require_model()
        return self.topics.update(
            topic_id, version, lambda topic: calibrate(topic, judgments, model)
        )

    # ----- roles -------------------------------------------------------------

    def create_role(self, name: str, entity_target: str | None = None,
                    user_topic: str | None = None, lambda1: float | None = None,
                    lambda2: float | None = None) -> Role:
        if entity_target is not None:
            _, ks = self._require_entities()
            if entity_target not in ks.nodes:
                resolved = ks.resolve(entity_target)
                if resolved is None:
                    raise KeyError(f"unknown entity target {entity_target!r}")
                entity_target = resolved
        if user_topic is not None:
            user_topic = self._resolve_topic_id(user_topic)
        role = Role(
            role_id=self.roles.next_id(),
            name=name,
            entity_target=entity_target,
            user_topic=user_topic,
            lambda1=lambda1,
            lambda2=lambda2,
        )
        self.roles.create(role)
        return role

    def _resolve_topic_id(self, ref: str) -> str:
        """Accept a topic id or a unique topic name."""
        from .registry import RegistryError

        try:
            return self.topics.get(ref).topic_id
        except RegistryError:
            matches = [t for t in self.topics.list() if t.name == ref]
            if len(matches) == 1:
                return matches[0].topic_id
            if matches:
                raise KeyError(f"topic name {ref!r} is ambiguous: "
                               f"{[t.topic_id for t in matches]}") from None
            raise KeyError(f"no such topic: {ref!r}") from None

    # ----- stats ---------------------------------------------------------------

    def stats(self) -> dict:
        model = self.model
        return {
            "n_docs": len(self.documents),
            "core_vocabulary": len(self.vocab.core_words),
            "keyword_vocabulary": len(self.vocab.keyword_words),
            "n_tokens": self.vocab.n_tokens,
            "n_phrases": len(self.phrases),
            "entities_built": self.entity_store is not None,
            "model": None
            if model is None
            else {
                "topics": model.n_topics,
                "alpha": model.alpha,
                "beta": model.beta,
                "sweeps": model.sweeps_done,
                "seed": model.seed,
            },
            "n_user_topics": len(self.topics.list()),
            "n_roles": len(self.roles.list()),
        }

    def query_terms(self, query: str) -> tuple[list[int], list[str]]:
        return normalize_query(query, self.vocab, self.phrases, self.stop_words)
