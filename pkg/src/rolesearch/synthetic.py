"""Deterministic synthetic corpora with known topic and region labels.

A desk-scale stand-in for licensed news data: each document draws its
content words from one topic block's private vocabulary and mentions
cities of one region, so topic recovery, entity propagation, and the
role-vs-keyword comparison all have ground truth. Relevance judgments
mark the documents matching a query's (block, region) cell.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .corpus import RawDocument
from .evaluation import Qrels
from .knowledge import KnowledgeStructure, Node

# Suffix syllables for generated words; no trailing 's' so the
# lemmatizer leaves every generated word untouched.
_SYLLABLES = [c + v for c in "bdfgklmnprtvz" for v in "aeiou"]


@dataclass(frozen=True)
class BlockSpec:
    name: str
    vocab_size: int = 40


@dataclass(frozen=True)
class RegionSpec:
    name: str
    countries: int = 2
    cities_per_country: int = 3


@dataclass(frozen=True)
class SyntheticSpec:
    blocks: tuple[BlockSpec, ...]
    regions: tuple[RegionSpec, ...] = ()
    docs_per_cell: int = 25  # documents per (block, region) cell; per block if no regions
    doc_len: int = 60
    city_mentions: int = 5  # entity mentions planted per document
    region_name_rate: float = 0.4  # share of docs literally naming their region
    query_leak_rate: float = 0.10  # chance a doc picks up another block's query word


@dataclass
class SyntheticCorpus:
    documents: list[RawDocument]
    qrels: Qrels
    structure: KnowledgeStructure | None
    queries: dict[str, str]  # query_id -> keyword text
    query_regions: dict[str, str]  # query_id -> region node id
    block_of: dict[str, str]  # doc_id -> block name
    region_of: dict[str, str]  # doc_id -> region name ("" when no regions)
    word_block: dict[str, str]  # generated word -> owning block
    query_words: dict[str, str] = field(default_factory=dict)  # block -> its query word


def _block_vocab(block: BlockSpec) -> list[str]:
    suffixes = ["".join(p) for p in itertools.product(_SYLLABLES, repeat=2)]
    if block.vocab_size > len(suffixes):
        raise ValueError(f"block {block.name!r}: vocab_size too large")
    return [f"{block.name}{suffixes[i]}" for i in range(block.vocab_size)]


def _build_structure(regions: tuple[RegionSpec, ...]):
    nodes: list[Node] = []
    edges: list[tuple[str, str, float]] = []
    cities_by_region: dict[str, list[str]] = {}
    for region in regions:
        region_id = f"region:{region.name}"
        nodes.append(Node(region_id, region.name, "region"))
        cities_by_region[region.name] = []
        for c in range(region.countries):
            country_name = f"{region.name}land{_SYLLABLES[c]}"
            country_id = f"country:{country_name}"
            nodes.append(Node(country_id, country_name, "country"))
            edges.append((region_id, country_id, 1.0))
            for ci in range(region.cities_per_country):
                city_name = f"{region.name}ville{_SYLLABLES[c]}{_SYLLABLES[ci]}"
                city_id = f"city:{city_name}"
                nodes.append(Node(city_id, city_name, "city_or_person"))
                edges.append((country_id, city_id, 1.0))
                cities_by_region[region.name].append(city_name)
    # Exclusion list deliberately empty: generated names never collide.
    ks = KnowledgeStructure.from_records(nodes, edges, exclusions=frozenset())
    return ks, cities_by_region


def generate_synthetic_corpus(spec: SyntheticSpec, seed: int) -> SyntheticCorpus:
    """Build the corpus, qrels, and knowledge structure for one spec."""
    if not spec.blocks:
        raise ValueError("need at least one topic block")
    rng = np.random.default_rng(seed)
    vocabs = {b.name: _block_vocab(b) for b in spec.blocks}
    query_words = {b.name: f"{b.name}seek" for b in spec.blocks}
    word_block = {w: b.name for b in spec.blocks for w in vocabs[b.name]}
    word_block.update({qw: b for b, qw in query_words.items()})

    structure = None
    cities_by_region: dict[str, list[str]] = {}
    if spec.regions:
        structure, cities_by_region = _build_structure(spec.regions)
    region_names = [r.name for r in spec.regions] or [""]

    documents: list[RawDocument] = []
    qrels = Qrels()
    queries: dict[str, str] = {}
    query_regions: dict[str, str] = {}
    block_of: dict[str, str] = {}
    region_of: dict[str, str] = {}

    for block in spec.blocks:
        for region_name in region_names:
            for d in range(spec.docs_per_cell):
                cell = f"{block.name}-{region_name}" if region_name else block.name
                doc_id = f"{cell}-{d:03d}"
                words = list(rng.choice(vocabs[block.name], size=spec.doc_len))
                words += [query_words[block.name]] * int(1 + rng.integers(0, 3))
                if region_name:
                    cities = cities_by_region[region_name]
                    picks = rng.choice(len(cities), size=spec.city_mentions)
                    words += [cities[int(p)] for p in picks]
                    if rng.random() < spec.region_name_rate:
                        words.append(region_name)
                others = [b.name for b in spec.blocks if b.name != block.name]
                if others and rng.random() < spec.query_leak_rate:
                    words.append(query_words[str(rng.choice(others))])
                rng.shuffle(words)
                documents.append(
                    RawDocument(
                        doc_id=doc_id,
                        title=f"{block.name} wire {d:03d}",
                        body=" ".join(words),
                    )
                )
                block_of[doc_id] = block.name
                region_of[doc_id] = region_name

    for block in spec.blocks:
        for region_name in region_names:
            query_id = f"q-{block.name}" + (f"-{region_name}" if region_name else "")
            queries[query_id] = query_words[block.name]
            if region_name:
                query_regions[query_id] = f"region:{region_name}"
            for doc_id, b in block_of.items():
                if b == block.name and region_of[doc_id] == region_name:
                    qrels.add(query_id, doc_id, 1)

    return SyntheticCorpus(
        documents=documents,
        qrels=qrels,
        structure=structure,
        queries=queries,
        query_regions=query_regions,
        block_of=block_of,
        region_of=region_of,
        word_block=word_block,
        query_words=query_words,
    )


def topic_purity(model, vocab, word_block: dict[str, str]) -> float:
    """Token-level purity of inferred topics against the planted blocks.

    Every sampler token whose word belongs to a block contributes its
    word-topic counts; purity is the share of those tokens whose topic
    is the topic's dominant block.
    """
    blocks = sorted(set(word_block.values()))
    block_index = {b: i for i, b in enumerate(blocks)}
    tally = np.zeros((len(blocks), model.n_topics), dtype=np.int64)
    for row, token_id in enumerate(model.token_ids.tolist()):
        word = vocab.word_of(token_id) if vocab.is_core_id(token_id) else None
        if word is None or word not in word_block:
            continue
        tally[block_index[word_block[word]]] += model.wt_counts[row]
    total = tally.sum()
    if total == 0:
        return 0.0
    return float(tally.max(axis=0).sum() / total)
