"""Roles and the combined three-prong ranking.

A role pairs an optional entity target with an optional user topic and
mixes the three relevance signals as a convex combination:

    combined = l1 * topic_z + l2 * entity_z + (1 - l1 - l2) * qlm

Topic and entity scores are standardized to z-scores over the
candidate set; the keyword score stays absolute, since a query may
legitimately have no relevant results at all. The default weights are
l1 = 0.07 and l2 = 0.90.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .keyword_search import (
    EmptyQueryError,
    KeywordIndex,
    normalize_query,
    qlm_query_score,
)
from .knowledge import EntityStore, KnowledgeStructure, entity_score
from .lda import TopicModel
from .phrases import PhraseTable
from .topics import UserTopic, topic_score
from .vocabulary import Vocabulary

DEFAULT_LAMBDA1 = 0.07
DEFAULT_LAMBDA2 = 0.90
DEFAULT_CANDIDATE_FLOOR = 200


class RoleError(ValueError):
    pass


@dataclass
class Role:
    role_id: str
    name: str
    entity_target: str | None = None
    user_topic: str | None = None
    lambda1: float | None = None  # topic weight; defaults to 0.07 when a topic is set
    lambda2: float | None = None  # entity weight; defaults to 0.90 when a target is set
    version: int = 1

    def __post_init__(self):
        if self.lambda1 is None:
            self.lambda1 = DEFAULT_LAMBDA1 if self.user_topic else 0.0
        if self.lambda2 is None:
            self.lambda2 = DEFAULT_LAMBDA2 if self.entity_target else 0.0
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise RoleError("mixing weights must be nonnegative")
        if self.lambda1 + self.lambda2 > 1.0:
            raise RoleError("lambda1 + lambda2 must not exceed 1")
        if self.entity_target is None and self.lambda2 != 0.0:
            raise RoleError("a role without an entity target must have lambda2 = 0")
        if self.user_topic is None and self.lambda1 != 0.0:
            raise RoleError("a role without a user topic must have lambda1 = 0")


@dataclass(frozen=True)
class CombinedHit:
    doc_id: str
    qlm_score: float
    topic_z: float
    entity_z: float
    combined: float


def zscore(values: Mapping[str, float]) -> dict[str, float]:
    """Standardize by population mean and stddev; degenerate spread -> zeros."""
    if not values:
        raise ValueError("cannot standardize an empty value set")
    n = len(values)
    mean = sum(values.values()) / n
    var = sum((v - mean) ** 2 for v in values.values()) / n
    std = math.sqrt(var)
    if std == 0.0:
        return {k: 0.0 for k in values}
    return {k: (v - mean) / std for k, v in values.items()}


def combined_score(qlm: float, topic_z: float, entity_z: float, role: Role) -> float:
    return (
        role.lambda1 * topic_z
        + role.lambda2 * entity_z
        + (1.0 - role.lambda1 - role.lambda2) * qlm
    )


def role_search(
    query: str,
    role: Role,
    *,
    index: KeywordIndex,
    vocab: Vocabulary,
    table: PhraseTable | None = None,
    stop_words: frozenset[str] = frozenset(),
    entity_store: EntityStore | None = None,
    structure: KnowledgeStructure | None = None,
    model: TopicModel | None = None,
    user_topic: UserTopic | None = None,
    k: int = 20,
    candidate_floor: int = DEFAULT_CANDIDATE_FLOOR,
) -> list[CombinedHit]:
    """Rank documents for a query under a role.

    Candidates are the union of the top keyword, entity, and topic hits
    (each prong contributes up to max(k, candidate_floor) documents);
    topic and entity scores are z-scored over that set and combined.
    With both weights zero this reduces exactly to the keyword ranking.
    """
    terms, _ = normalize_query(query, vocab, table, stop_words)
    if not terms and role.entity_target is None and role.user_topic is None:
        raise EmptyQueryError(
            f"query {query!r} is empty after normalization and the role has no targets"
        )
    k_prong = max(k, candidate_floor)

    qlm_scores: dict[str, float] = {}
    candidates: set[str] = set()
    if terms:
        all_hits = sorted(
            (qlm_query_score(doc_id, terms, index) for doc_id in index.doc_ids),
            key=lambda h: (-h.score, h.doc_id),
        )
        qlm_scores = {h.doc_id: h.score for h in all_hits}
        candidates.update(h.doc_id for h in all_hits[:k_prong])
    else:
        qlm_scores = {doc_id: 0.0 for doc_id in index.doc_ids}

    entity_raw: dict[str, float] = {}
    if role.entity_target is not None:
        if entity_store is None or structure is None:
            raise RoleError("role has an entity target but no entity store was provided")
        entity_raw = {
            doc_id: entity_score(doc_id, role.entity_target, entity_store, structure)
            for doc_id in index.doc_ids
        }
        top = sorted(entity_raw.items(), key=lambda kv: (-kv[1], kv[0]))[:k_prong]
        candidates.update(doc_id for doc_id, _ in top)

    topic_raw: dict[str, float] = {}
    if role.user_topic is not None:
        if model is None or user_topic is None:
            raise RoleError("role has a user topic but no topic model was provided")
        topic_raw = {
            doc_id: topic_score(doc_id, user_topic, model) for doc_id in index.doc_ids
        }
        top = sorted(topic_raw.items(), key=lambda kv: (-kv[1], kv[0]))[:k_prong]
        candidates.update(doc_id for doc_id, _ in top)

    if not candidates:
        return []
    topic_z = zscore({d: topic_raw.get(d, 0.0) for d in candidates})
    entity_z = zscore({d: entity_raw.get(d, 0.0) for d in candidates})
    hits = [
        CombinedHit(
            doc_id=d,
            qlm_score=qlm_scores.get(d, 0.0),
            topic_z=topic_z[d],
            entity_z=entity_z[d],
            combined=combined_score(qlm_scores.get(d, 0.0), topic_z[d], entity_z[d], role),
        )
        for d in candidates
    ]
    hits.sort(key=lambda h: (-h.combined, h.doc_id))
    return hits[:k]
