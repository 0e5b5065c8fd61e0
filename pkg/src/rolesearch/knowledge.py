"""Three-layer entity hierarchy and per-document entity relevance.

The structure is a weighted DAG of regions over countries over cities
and people. Mentions counted in a document propagate upward along
edges, weights acting as fractional attribution (normalized per node),
and the per-layer totals become the document's entity distributions.
A document that only ever says "Tehran" thereby still scores for the
Middle East.
"""

from __future__ import annotations

import logging
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path

from .text import load_city_exclusions

logger = logging.getLogger(__name__)

LAYERS = ("region", "country", "city_or_person")

_SURFACE_RE = re.compile(r"[a-z0-9]+")

STRUCTURE_MAGIC = "# rolesearch knowledge-structure v1"


class StructureError(ValueError):
    """Validation failure while loading a knowledge structure."""


@dataclass(frozen=True)
class Node:
    node_id: str
    name: str
    layer: str
    aliases: tuple[str, ...] = ()


@dataclass(frozen=True)
class EntityRelevance:
    doc_id: str
    country_dist: dict[str, float]
    region_dist: dict[str, float]


def _surface_key(name: str) -> tuple[str, ...]:
    return tuple(_SURFACE_RE.findall(name.lower().replace("'", "")))


class KnowledgeStructure:
    def __init__(self, nodes: dict[str, Node], parents: dict[str, list[tuple[str, float]]]):
        self.nodes = nodes
        self.parents = parents
        self._surfaces: dict[tuple[str, ...], str] = {}
        self._max_surface_len = 0
        for node in nodes.values():
            for surface in (node.name, *node.aliases):
                key = _surface_key(surface)
                if not key:
                    raise StructureError(f"node {node.node_id!r}: unresolvable name {surface!r}")
                owner = self._surfaces.get(key)
                if owner is not None and owner != node.node_id:
                    raise StructureError(
                        f"surface {surface!r} is ambiguous between nodes "
                        f"{owner!r} and {node.node_id!r}; use the exclusion list"
                    )
                self._surfaces[key] = node.node_id
                self._max_surface_len = max(self._max_surface_len, len(key))

    def __contains__(self, node_id: str) -> bool:
        return node_id in self.nodes

    def layer_of(self, node_id: str) -> str:
        return self.nodes[node_id].layer

    def normalized_parents(self, node_id: str) -> list[tuple[str, float]]:
        """Parent edges with weights rescaled to sum to one."""
        edges = self.parents.get(node_id, [])
        total = sum(w for _, w in edges)
        if total <= 0:
            return []
        return [(parent, w / total) for parent, w in edges]

    def resolve(self, surface: str) -> str | None:
        return self._surfaces.get(_surface_key(surface))

    @classmethod
    def from_records(
        cls,
        nodes: list[Node],
        edges: list[tuple[str, str, float]],
        exclusions: frozenset[str] | None = None,
    ) -> "KnowledgeStructure":
        """Validate node and edge records and apply the exclusion list.

        Nodes whose primary name is excluded are dropped along with
        their edges; excluded aliases are silently removed. Layer rules
        (region -> country -> city_or_person only) make cycles
        impossible, so validating edges validates acyclicity.
        """
        if exclusions is None:
            exclusions = load_city_exclusions()
        by_id: dict[str, Node] = {}
        for node in nodes:
            if node.layer not in LAYERS:
                raise StructureError(f"node {node.node_id!r}: unknown layer {node.layer!r}")
            if node.node_id in by_id:
                raise StructureError(f"duplicate node_id {node.node_id!r}")
            if node.name.lower() in exclusions:
                logger.info("dropping excluded entity %r (%s)", node.name, node.node_id)
                continue
            aliases = tuple(a for a in node.aliases if a.lower() not in exclusions)
            by_id[node.node_id] = Node(node.node_id, node.name, node.layer, aliases)

        parents: dict[str, list[tuple[str, float]]] = defaultdict(list)
        layer_rank = {layer: i for i, layer in enumerate(LAYERS)}
        declared = {n.node_id for n in nodes}
        for parent_id, child_id, weight in edges:
            if parent_id not in by_id or child_id not in by_id:
                missing = [x for x in (parent_id, child_id) if x not in by_id]
                if all(x in declared for x in missing):
                    # Endpoint dropped by the exclusion list: drop the edge too.
                    continue
                raise StructureError(f"edge {parent_id!r} -> {child_id!r}: unknown node")
            parent, child = by_id[parent_id], by_id[child_id]
            if layer_rank[child.layer] != layer_rank[parent.layer] + 1:
                raise StructureError(
                    f"edge {parent_id!r} -> {child_id!r}: "
                    f"{parent.layer} may not parent {child.layer}"
                )
            if not 0 < weight <= 1:
                raise StructureError(
                    f"edge {parent_id!r} -> {child_id!r}: weight {weight} outside (0, 1]"
                )
            parents[child_id].append((parent_id, weight))

        for node in by_id.values():
            if node.layer != "region" and not parents.get(node.node_id):
                raise StructureError(f"node {node.node_id!r} ({node.layer}) has no parent")
        return cls(by_id, dict(parents))


def load_structure(
    path: str | Path, exclusions_path: str | Path | None = None
) -> KnowledgeStructure:
    """Load the tab-separated structure format.

    Lines are ``node<TAB>id<TAB>layer<TAB>name[<TAB>alias|alias...]`` or
    ``edge<TAB>parent<TAB>child<TAB>weight``; '#' starts a comment.
    """
    exclusions = (
        load_city_exclusions(exclusions_path) if exclusions_path else load_city_exclusions()
    )
    nodes: list[Node] = []
    edges: list[tuple[str, str, float]] = []
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        kind = fields[0]
        try:
            if kind == "node":
                aliases = tuple(a for a in fields[4].split("|") if a) if len(fields) > 4 else ()
                nodes.append(Node(fields[1], fields[3], fields[2], aliases))
            elif kind == "edge":
                edges.append((fields[1], fields[2], float(fields[3])))
            else:
                raise StructureError(f"{path}:{line_no}: unknown record type {kind!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, StructureError):
                raise
            raise StructureError(f"{path}:{line_no}: malformed record: {line!r}") from exc
    return KnowledgeStructure.from_records(nodes, edges, exclusions)


def save_structure(ks: KnowledgeStructure, path: str | Path) -> None:
    lines = [STRUCTURE_MAGIC]
    for node in sorted(ks.nodes.values(), key=lambda n: n.node_id):
        row = ["node", node.node_id, node.layer, node.name]
        if node.aliases:
            row.append("|".join(node.aliases))
        lines.append("\t".join(row))
    for child, edges in sorted(ks.parents.items()):
        for parent, weight in edges:
            lines.append("\t".join(["edge", parent, child, repr(weight)]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def label_entities(doc, ks: KnowledgeStructure) -> list[tuple[str, int]]:
    """Count entity mentions in a document's title and body.

    Surface matching is case-insensitive and longest-match over the raw
    text, so multi-word names win over their prefixes. Pre-labeled
    entities from ingestion each add one count.
    """
    text = f"{doc.title}\n{getattr(doc, 'body', '')}"
    words = _SURFACE_RE.findall(text.lower().replace("'", ""))
    counts: Counter[str] = Counter()
    i = 0
    n = len(words)
    max_len = ks._max_surface_len
    while i < n:
        matched = False
        for length in range(min(max_len, n - i), 0, -1):
            node_id = ks._surfaces.get(tuple(words[i : i + length]))
            if node_id is not None:
                counts[node_id] += 1
                i += length
                matched = True
                break
        if not matched:
            i += 1
    for name in getattr(doc, "pre_labeled_entities", ()):
        node_id = ks.resolve(name)
        if node_id is None:
            logger.debug("pre-labeled entity %r not in structure; ignored", name)
            continue
        counts[node_id] += 1
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))


def entity_distribution(
    mentions: list[tuple[str, int]], ks: KnowledgeStructure, doc_id: str = ""
) -> EntityRelevance:
    """Propagate mention counts up the hierarchy into layer distributions."""
    country_mass: dict[str, float] = defaultdict(float)
    region_mass: dict[str, float] = defaultdict(float)
    for node_id, count in mentions:
        if node_id not in ks.nodes:
            raise StructureError(f"mention of unknown node {node_id!r}")
        layer = ks.layer_of(node_id)
        if layer == "city_or_person":
            for parent, frac in ks.normalized_parents(node_id):
                country_mass[parent] += count * frac
        elif layer == "country":
            country_mass[node_id] += count
        else:
            region_mass[node_id] += count
    for country, mass in list(country_mass.items()):
        for parent, frac in ks.normalized_parents(country):
            region_mass[parent] += mass * frac
    return EntityRelevance(
        doc_id=doc_id,
        country_dist=_normalize(country_mass),
        region_dist=_normalize(region_mass),
    )


def _normalize(mass: dict[str, float]) -> dict[str, float]:
    total = sum(mass.values())
    if total <= 0:
        return {}
    return {k: v / total for k, v in sorted(mass.items())}


@dataclass
class EntityStore:
    """Write-once per-document entity relevance, read-only afterwards."""

    relevance: dict[str, EntityRelevance] = field(default_factory=dict)
    mentions: dict[str, dict[str, int]] = field(default_factory=dict)

    def add(self, doc_id: str, rel: EntityRelevance, mention_counts: dict[str, int]) -> None:
        if doc_id in self.relevance:
            raise ValueError(f"entity relevance for {doc_id!r} already recorded")
        self.relevance[doc_id] = rel
        self.mentions[doc_id] = dict(mention_counts)

    def get(self, doc_id: str) -> EntityRelevance | None:
        return self.relevance.get(doc_id)


def build_entity_store(corpus, ks: KnowledgeStructure) -> EntityStore:
    store = EntityStore()
    for doc in corpus:
        mentions = label_entities(doc, ks)
        rel = entity_distribution(mentions, ks, doc_id=doc.doc_id)
        store.add(doc.doc_id, rel, dict(mentions))
    return store


def entity_score(doc_id: str, target: str, store: EntityStore, ks: KnowledgeStructure) -> float:
    """The document's relevance share for one structure node, in [0, 1]."""
    if target not in ks.nodes:
        raise StructureError(f"unknown entity target {target!r}")
    rel = store.get(doc_id)
    if rel is None:
        return 0.0
    layer = ks.layer_of(target)
    if layer == "region":
        return rel.region_dist.get(target, 0.0)
    if layer == "country":
        return rel.country_dist.get(target, 0.0)
    # City target: its share of the country-layer mass is its own mention
    # fraction, since a city's parent weights are normalized to one.
    mention_counts = store.mentions.get(doc_id, {})
    total = sum(
        count
        for node_id, count in mention_counts.items()
        if ks.layer_of(node_id) != "region"
    )
    if total <= 0:
        return 0.0
    return mention_counts.get(target, 0) / total


def cities_from_geonames(
    path: str | Path,
    country_ids_by_name: dict[str, str],
    min_population: int = 30_000,
) -> tuple[list[Node], list[tuple[str, str, float]]]:
    """Convert a GeoNames-style city table into structure records.

    Expects tab-separated ``name<TAB>country<TAB>population`` rows.
    Cities below the population floor or with unknown countries are
    skipped; when several cities share a name only the most populous is
    kept so surface resolution stays unambiguous.
    """
    best: dict[str, tuple[int, str, str]] = {}
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            name, country, population = line.split("\t")[:3]
            pop = int(population)
        except ValueError as exc:
            raise StructureError(f"{path}:{line_no}: malformed city row") from exc
        if pop < min_population:
            continue
        country_id = country_ids_by_name.get(country.lower())
        if country_id is None:
            logger.debug("city %r: unknown country %r; skipped", name, country)
            continue
        key = name.lower()
        if key not in best or pop > best[key][0]:
            best[key] = (pop, name, country_id)
    nodes: list[Node] = []
    edges: list[tuple[str, str, float]] = []
    for key, (_, name, country_id) in sorted(best.items()):
        node_id = f"city:{key.replace(' ', '_')}"
        nodes.append(Node(node_id, name, "city_or_person"))
        edges.append((country_id, node_id, 1.0))
    return nodes, edges
