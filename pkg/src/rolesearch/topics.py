"""User-defined topics layered over the trained topic model.

Workflow: seed a topic with a keyword, review suggested related words
(nearest word-topic distributions), pull the clear-hit documents for
the accepted words, average their topic distributions into a centroid,
then calibrate a scalar distance correction from boundary-document
judgments. Negative corrected distances mark confidently relevant
documents; topic_score maps corrected distance linearly onto [0, 1].
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass, field, replace

import numpy as np

from .keyword_search import KeywordIndex, qlm_term_score
from .lda import TopicModel, doc_topics, word_topics
from .vocabulary import Vocabulary

DEFAULT_CLEAR_HITS = 50
DEFAULT_BOUNDARY_BAND = 10


class TopicDefinitionError(ValueError):
    pass


class CalibrationError(TopicDefinitionError):
    pass


@dataclass
class UserTopic:
    topic_id: str
    name: str
    seed_words: list[str] = field(default_factory=list)
    accepted_words: list[str] = field(default_factory=list)
    rejected_words: list[str] = field(default_factory=list)
    centroid: np.ndarray | None = None
    correction: float = 0.0
    status: str = "draft"  # draft | calibrated
    corrected_min: float | None = None  # corpus extremes, cached at calibration
    corrected_max: float | None = None
    version: int = 1

    def __post_init__(self):
        overlap = set(self.accepted_words) & set(self.rejected_words)
        if overlap:
            raise TopicDefinitionError(
                f"words judged both relevant and irrelevant: {sorted(overlap)}"
            )
        if self.status == "draft" and self.correction != 0.0:
            raise TopicDefinitionError("a draft topic cannot carry a correction")

    @property
    def judged_words(self) -> set[str]:
        return set(self.accepted_words) | set(self.rejected_words)


@dataclass(frozen=True)
class RelevanceScore:
    doc_id: str
    raw_distance: float
    corrected_distance: float


def cosine_distance(a: np.ndarray, b: np.ndarray) -> float:
    denom = float(np.linalg.norm(a) * np.linalg.norm(b))
    if denom == 0.0:
        return 1.0
    return 1.0 - float(np.dot(a, b)) / denom


def suggest_related(
    seed: str,
    model: TopicModel,
    vocab: Vocabulary,
    n: int,
    exclude: frozenset[str] = frozenset(),
) -> list[str]:
    """Core-vocabulary words whose topic distributions sit nearest the seed's.

    The seed itself and already-judged words are excluded. Note the
    word-topic vectors of rare words are known only coarsely; clear-hit
    documents, not these vectors, define the topic centroid.
    """
    seed_id = vocab.id_of(seed)
    if seed_id is None or not vocab.is_core_id(seed_id) or seed_id not in model._row_of:
        near = difflib.get_close_matches(seed, vocab.core_words, n=5)
        hint = f"; nearest spellings: {', '.join(near)}" if near else ""
        raise TopicDefinitionError(f"seed word {seed!r} is not in the core vocabulary{hint}")
    if n <= 0:
        return []
    seed_vec = word_topics(model, seed_id)
    skip = set(exclude) | {seed}
    scored: list[tuple[float, str]] = []
    for token_id in model.token_ids.tolist():
        if not vocab.is_core_id(token_id):
            continue
        word = vocab.word_of(token_id)
        if word in skip:
            continue
        scored.append((cosine_distance(seed_vec, word_topics(model, token_id)), word))
    scored.sort(key=lambda s: (s[0], s[1]))
    return [word for _, word in scored[:n]]


def clear_hits(
    words: list[str],
    index: KeywordIndex,
    vocab: Vocabulary,
    m: int = DEFAULT_CLEAR_HITS,
) -> list[str]:
    """Documents that are unambiguous hits for the accepted words.

    Ranks by the summed per-term keyword score and requires at least two
    distinct accepted words present (one suffices when only one word has
    been accepted).
    """
    if not words:
        raise TopicDefinitionError("need at least one accepted word")
    if m <= 0:
        raise TopicDefinitionError("clear-hit count m must be positive")
    term_ids = [vocab.id_of(w) for w in words]
    known = [t for t in term_ids if t is not None]
    need_distinct = 2 if len(words) > 1 else 1
    scored: list[tuple[float, str]] = []
    for doc_id in index.doc_ids:
        present = sum(1 for t in known if index.in_doc_count(t, doc_id) > 0)
        if present < need_distinct:
            continue
        total = sum(
            qlm_term_score(
                index.in_doc_count(t, doc_id), index.corpus_count(t), index.n_tokens, index.mu
            )
            for t in known
        )
        scored.append((total, doc_id))
    if not scored:
        raise TopicDefinitionError(
            "no documents contain enough of the accepted words; accept more words"
        )
    scored.sort(key=lambda s: (-s[0], s[1]))
    return [doc_id for _, doc_id in scored[:m]]


def build_centroid(hits: list[str], model: TopicModel) -> np.ndarray:
    """Mean topic distribution of the clear-hit documents, renormalized."""
    if not hits:
        raise TopicDefinitionError("cannot build a centroid from zero documents")
    mean = np.mean([doc_topics(model, doc_id) for doc_id in hits], axis=0)
    return mean / mean.sum()


def raw_distance(doc_id: str, topic: UserTopic, model: TopicModel) -> float:
    if topic.centroid is None:
        raise TopicDefinitionError(f"topic {topic.topic_id!r} has no centroid yet")
    return cosine_distance(doc_topics(model, doc_id), topic.centroid)


def corrected_distance(doc_id: str, topic: UserTopic, model: TopicModel) -> RelevanceScore:
    raw = raw_distance(doc_id, topic, model)
    return RelevanceScore(doc_id=doc_id, raw_distance=raw,
                          corrected_distance=raw - topic.correction)


def calibrate(
    topic: UserTopic,
    boundary_judgments: list[tuple[str, bool]],
    model: TopicModel,
) -> UserTopic:
    """Set the distance correction from boundary-document judgments.

    The correction is the midpoint between the mean raw distance of the
    judged-relevant and judged-irrelevant documents, which places the
    relevant mean below zero and the irrelevant mean above it. Re-run
    with more judgments to tune further.
    """
    relevant = [d for d, ok in boundary_judgments if ok]
    irrelevant = [d for d, ok in boundary_judgments if not ok]
    if not relevant or not irrelevant:
        raise CalibrationError("need at least one relevant and one irrelevant judgment")
    mean_rel = float(np.mean([raw_distance(d, topic, model) for d in relevant]))
    mean_irr = float(np.mean([raw_distance(d, topic, model) for d in irrelevant]))
    if mean_rel >= mean_irr:
        raise CalibrationError(
            "judged-relevant documents are not closer to the topic than "
            f"judged-irrelevant ones (means {mean_rel:.4f} vs {mean_irr:.4f}); "
            "review the judgments or accept more words"
        )
    correction = (mean_rel + mean_irr) / 2.0
    corrected = [
        raw_distance(doc_id, topic, model) - correction for doc_id in model.doc_ids
    ]
    return replace(
        topic,
        correction=correction,
        status="calibrated",
        corrected_min=min(corrected),
        corrected_max=max(corrected),
    )


def select_boundary(topic: UserTopic, model: TopicModel, band: int) -> list[str]:
    """Documents nearest the relevance border, for human judgment.

    A calibrated topic centers the band on its correction; a draft topic
    uses the median raw distance.
    """
    if band <= 0:
        return []
    distances = [(raw_distance(d, topic, model), d) for d in model.doc_ids]
    if topic.status == "calibrated":
        threshold = topic.correction
    else:
        threshold = float(np.median([dist for dist, _ in distances]))
    distances.sort(key=lambda item: (abs(item[0] - threshold), item[1]))
    return [doc_id for _, doc_id in distances[:band]]


def topic_score(doc_id: str, topic: UserTopic, model: TopicModel) -> float:
    """Corrected distance mapped onto [0, 1], 1 being most relevant."""
    if topic.status != "calibrated":
        raise TopicDefinitionError(f"topic {topic.topic_id!r} is not calibrated yet")
    corrected = raw_distance(doc_id, topic, model) - topic.correction
    lo, hi = topic.corrected_min, topic.corrected_max
    if lo is None or hi is None or hi <= lo:
        return 1.0
    return min(max((hi - corrected) / (hi - lo), 0.0), 1.0)
