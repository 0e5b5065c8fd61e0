"""Role-aware document search over plain-text corpora.

Combines three relevance signals: a Query Likelihood Model keyword
score, entity relevance propagated through a geographic knowledge
structure, and distance to user-defined topics in LDA topic space,
mixed per role as a convex combination.
"""

__version__ = "0.1.0"

from .corpus import RawDocument, TokenizedDocument, read_corpus
from .engine import EtlConfig, SearchEngine, run_etl
from .evaluation import Qrels, load_qrels, precision_at_k, run_benchmark
from .keyword_search import KeywordIndex, ScoredHit, rank_by_keywords
from .knowledge import KnowledgeStructure, entity_distribution, entity_score, label_entities
from .lda import TopicModel, train
from .roles import CombinedHit, Role, role_search
from .synthetic import SyntheticSpec, generate_synthetic_corpus
from .topics import UserTopic
from .vocabulary import Vocabulary, build_vocabulary, tokenize

__all__ = [
    "CombinedHit",
    "EtlConfig",
    "KeywordIndex",
    "KnowledgeStructure",
    "Qrels",
    "RawDocument",
    "Role",
    "ScoredHit",
    "SearchEngine",
    "SyntheticSpec",
    "TokenizedDocument",
    "TopicModel",
    "UserTopic",
    "Vocabulary",
    "build_vocabulary",
    "entity_distribution",
    "entity_score",
    "generate_synthetic_corpus",
    "label_entities",
    "load_qrels",
    "precision_at_k",
    "rank_by_keywords",
    "read_corpus",
    "role_search",
    "run_benchmark",
    "run_etl",
    "tokenize",
    "train",
]
