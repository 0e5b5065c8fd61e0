#!/usr/bin/env python3
"""End-to-end walkthrough on the synthetic corpus.

Generates a labeled corpus, indexes it, builds entity relevance, trains
the topic model, defines a user topic from the planted block, creates a
role, and prints sample searches plus the three-strategy benchmark
table.
"""

from __future__ import annotations

import argparse
import tempfile
from pathlib import Path

from rolesearch.cli import build_eval_strategies
from rolesearch.engine import run_etl
from rolesearch.evaluation import run_benchmark
from rolesearch.knowledge import save_structure
from rolesearch.synthetic import (
    BlockSpec,
    RegionSpec,
    SyntheticSpec,
    generate_synthetic_corpus,
)
from rolesearch.topics import raw_distance


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workdir", help="index directory (default: a temp dir)")
    parser.add_argument("--seed", type=int, default=11)
    parser.add_argument("--sweeps", type=int, default=150)
    args = parser.parse_args()

    workdir = Path(args.workdir) if args.workdir else Path(tempfile.mkdtemp(prefix="rolesearch-"))
    spec = SyntheticSpec(
        blocks=(BlockSpec("quake"), BlockSpec("trade"), BlockSpec("sport")),
        regions=(RegionSpec("norland"), RegionSpec("souland"), RegionSpec("estland")),
        docs_per_cell=25,
        doc_len=40,
    )
    world = generate_synthetic_corpus(spec, seed=args.seed)
    print(f"generated {len(world.documents)} documents over "
          f"{len(spec.blocks)} topic blocks x {len(spec.regions)} regions")

    engine = run_etl(world.documents, workdir / "index")
    structure_path = workdir / "structure.tsv"
    save_structure(world.structure, structure_path)
    engine.build_entities(structure_path)
    engine.train_model(n_topics=3, alpha=1.0, beta=0.01, n_sweeps=args.sweeps, seed=7)
    print(f"index built under {workdir/'index'}")

    print("\n--- inferred topics (top 7 words each) ---")
    for topic in range(3):
        print(f"topic {topic}: " + ", ".join(engine.top_topic_words(topic, 7)))

    # define the "quake" user topic: seed, accept suggestions, calibrate
    topic = engine.create_topic("quake stories", world.query_words["quake"])
    suggestions = engine.suggestions(topic.topic_id, n=10)
    topic = engine.judge_words(topic.topic_id, topic.version, suggestions, [])
    model = engine.model
    current = engine.topics.get(topic.topic_id)
    distances = {d: raw_distance(d, current, model) for d in model.doc_ids}
    in_block = sorted((d for d in distances if world.block_of[d] == "quake"),
                      key=lambda d: -distances[d])[:5]
    out_block = sorted((d for d in distances if world.block_of[d] != "quake"),
                       key=lambda d: distances[d])[:5]
    topic = engine.calibrate_topic(
        topic.topic_id, topic.version,
        [(d, True) for d in in_block] + [(d, False) for d in out_block],
    )
    print(f"\ncalibrated user topic {topic.topic_id}: correction={topic.correction:.4f}")

    role = engine.create_role(
        "norland quake analyst", entity_target="region:norland",
        user_topic=topic.topic_id,
    )
    print(f"created role {role.role_id}: lambda1={role.lambda1}, lambda2={role.lambda2}")

    query = world.query_words["quake"]
    print(f"\n--- keyword search: {query!r} ---")
    for rank, hit in enumerate(engine.keyword_search(query, k=5), 1):
        print(f"{rank}. {hit.doc_id}  score={hit.score:.3f}")
    print(f"\n--- role search: {query!r} under {role.name!r} ---")
    for rank, hit in enumerate(engine.role_search(query, role, k=5), 1):
        print(f"{rank}. {hit.doc_id}  combined={hit.combined:.3f} "
              f"(qlm={hit.qlm_score:.3f}, entity_z={hit.entity_z:.2f}, "
              f"topic_z={hit.topic_z:.2f})")

    queries = {qid: (world.queries[qid], world.query_regions[qid])
               for qid in world.queries}
    strategies = build_eval_strategies(
        engine, queries, ["keyword", "keyword+entity-keyword", "role"], k=20
    )
    report = run_benchmark(strategies, {q: t for q, (t, _) in queries.items()},
                           world.qrels, k=20)
    print("\n--- strategy comparison ---")
    print(report.render_text())
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
