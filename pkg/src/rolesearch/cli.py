"""Command-line interface.

Subcommands mirror the pipeline: etl -> entities -> train, then
search / define-topic / role / eval / serve against the index
directory.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .engine import EtlConfig, SearchEngine, run_etl
from .evaluation import load_qrels, run_benchmark
from .keyword_search import DEFAULT_MU
from .lda import default_alpha, load_model, top_words
from .phrases import DEFAULT_PHRASE_FRACTION
from .roles import Role
from .storage import load_phrases, load_vocabulary
from .vocabulary import DEFAULT_CORE_SIZE, DEFAULT_KEYWORD_SIZE


def _cmd_etl(args) -> int:
    config = EtlConfig(
        core_size=args.core_size,
        keyword_size=args.keyword_size,
        phrase_fraction=args.phrase_frac,
        mu=args.mu,
        stopwords_path=args.stopwords,
    )
    engine = run_etl(args.corpus_dir, args.out, config)
    stats = engine.stats()
    print(
        f"indexed {stats['n_docs']} documents: "
        f"{stats['core_vocabulary']} core words, "
        f"{stats['keyword_vocabulary']} keyword words, "
        f"{stats['n_phrases']} phrases, {stats['n_tokens']} tokens"
    )
    return 0


def _cmd_search(args) -> int:
    engine = SearchEngine(args.index)
    if args.role:
        hits = engine.role_search(args.query, args.role, args.k)
        rows = [(h.doc_id, h.combined) for h in hits]
    else:
        hits = engine.keyword_search(args.query, args.k)
        rows = [(h.doc_id, h.score) for h in hits]
    for rank, (doc_id, score) in enumerate(rows, 1):
        print(f"{rank}\t{doc_id}\t{score:.6g}\t{engine.title_of(doc_id)}")
    return 0


def _cmd_entities(args) -> int:
    engine = SearchEngine(args.index)
    engine.build_entities(args.structure, args.exclusions)
    n_docs = len(engine.entity_store.relevance)
    n_nodes = len(engine.structure.nodes)
    print(f"entity relevance computed for {n_docs} documents over {n_nodes} nodes")
    return 0


def _cmd_train(args) -> int:
    engine = SearchEngine(args.index)
    alpha = args.alpha if args.alpha is not None else default_alpha(args.topics)
    model = engine.train_model(args.topics, alpha, args.beta, args.sweeps, args.seed)
    print(
        f"trained {model.n_topics} topics over {model.n_types} token types "
        f"({model.sweeps_done} sweeps, alpha={model.alpha:g}, beta={model.beta:g}, "
        f"seed={model.seed})"
    )
    return 0


def _cmd_topics_show(args) -> int:
    model = load_model(args.model)
    index_dir = Path(args.index) if args.index else Path(args.model).parent
    vocab = load_vocabulary(index_dir / "vocabulary.tsv")
    table = load_phrases(index_dir / "phrases.tsv")
    surfaces = {i: w for i, w in enumerate(vocab.keyword_words)}
    for p in table.phrases:
        surfaces[p.phrase_id] = table.surface(p.phrase_id, vocab)
    for topic in range(model.n_topics):
        words = top_words(model, topic, args.top, surfaces)
        print(f"topic {topic}\t" + ", ".join(words))
    return 0


def _prompt_words(prompt: str) -> list[str]:
    raw = input(prompt).strip()
    return raw.split() if raw else []


def _cmd_define_topic(args) -> int:
    engine = SearchEngine(args.index)
    topic = engine.create_topic(args.name, args.seed)
    print(f"created topic {topic.topic_id} ({topic.name}) from seed {args.seed!r}")
    while True:
        suggestions = engine.suggestions(topic.topic_id, n=args.suggestions)
        if not suggestions:
            print("no further suggestions; enter another seed word or calibrate")
        else:
            print("related words: " + ", ".join(suggestions))
        accept = _prompt_words("accept words (space-separated, empty to stop): ")
        reject = _prompt_words("reject words (space-separated, empty for none): ")
        if not accept and not reject:
            break
        topic = engine.judge_words(topic.topic_id, engine.topics.get(topic.topic_id).version,
                                   accept, reject)
        print(f"{len(topic.accepted_words)} accepted, {len(topic.rejected_words)} rejected")
    if not engine.topics.get(topic.topic_id).accepted_words:
        print("no accepted words; topic left as draft")
        return 0
    boundary = engine.boundary_docs(topic.topic_id, band=args.band)
    judgments = []
    print("judge the borderline documents (y = relevant, n = irrelevant, s = skip):")
    for doc_id in boundary:
        answer = input(f"  {doc_id}  {engine.title_of(doc_id)} [y/n/s]: ").strip().lower()
        if answer == "y":
            judgments.append((doc_id, True))
        elif answer == "n":
            judgments.append((doc_id, False))
    topic = engine.calibrate_topic(
        topic.topic_id, engine.topics.get(topic.topic_id).version, judgments
    )
    print(f"calibrated: correction={topic.correction:.4f}")
    return 0


def _cmd_role(args) -> int:
    engine = SearchEngine(args.index)
    if args.role_action == "create":
        role = engine.create_role(
            args.name, args.entity, args.topic, args.lambda1, args.lambda2
        )
        print(
            f"created role {role.role_id} ({role.name}): entity={role.entity_target} "
            f"topic={role.user_topic} lambda1={role.lambda1} lambda2={role.lambda2}"
        )
    else:
        for role in engine.roles.list():
            print(
                f"{role.role_id}\t{role.name}\tentity={role.entity_target}\t"
                f"topic={role.user_topic}\tl1={role.lambda1}\tl2={role.lambda2}"
            )
    return 0


def _load_queries(path: str) -> dict[str, tuple[str, str | None]]:
    queries: dict[str, tuple[str, str | None]] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < 2:
            raise ValueError(f"queries file needs 'id<TAB>text[<TAB>entity]': {line!r}")
        queries[parts[0]] = (parts[1], parts[2] if len(parts) > 2 else None)
    return queries


def build_eval_strategies(engine: SearchEngine,
                          queries: dict[str, tuple[str, str | None]],
                          names: list[str], k: int) -> dict:
    """The benchmark rows: plain keywords, location as an extra keyword,
    and location through entity relevance (an ad-hoc entity role)."""

    def keyword(query_id: str) -> list[str]:
        text, _ = queries[query_id]
        return [h.doc_id for h in engine.keyword_search(text, k)]

    def keyword_plus_entity_keyword(query_id: str) -> list[str]:
        text, entity = queries[query_id]
        if entity and engine.structure and entity in engine.structure.nodes:
            text = f"{text} {engine.structure.nodes[entity].name}"
        return [h.doc_id for h in engine.keyword_search(text, k)]

    def entity_role(query_id: str) -> list[str]:
        text, entity = queries[query_id]
        if not entity:
            return keyword(query_id)
        role = Role(role_id="eval", name="eval", entity_target=entity)
        return [h.doc_id for h in engine.role_search(text, role, k)]

    available = {
        "keyword": keyword,
        "keyword+entity-keyword": keyword_plus_entity_keyword,
        "role": entity_role,
    }
    unknown = [n for n in names if n not in available]
    if unknown:
        raise ValueError(f"unknown strategies: {unknown}; choose from {sorted(available)}")
    return {name: available[name] for name in names}


def _cmd_eval(args) -> int:
    engine = SearchEngine(args.index)
    qrels = load_qrels(args.qrels)
    queries = _load_queries(args.queries)
    names = [s.strip() for s in args.strategies.split(",") if s.strip()]
    strategies = build_eval_strategies(engine, queries, names, args.k)
    report = run_benchmark(strategies, {q: t for q, (t, _) in queries.items()}, qrels, args.k)
    print(report.render_text())
    if args.out:
        report.write_records(args.out)
        print(f"records written to {args.out}")
    return 0


def _cmd_serve(args) -> int:
    from .server import serve

    serve(args.index, args.addr, args.static)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rolesearch",
                                     description="role-aware document search engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("etl", help="index a corpus directory")
    p.add_argument("corpus_dir")
    p.add_argument("--out", required=True)
    p.add_argument("--stopwords")
    p.add_argument("--core-size", type=int, default=DEFAULT_CORE_SIZE)
    p.add_argument("--keyword-size", type=int, default=DEFAULT_KEYWORD_SIZE)
    p.add_argument("--phrase-frac", type=float, default=DEFAULT_PHRASE_FRACTION)
    p.add_argument("--mu", type=float, default=DEFAULT_MU)
    p.set_defaults(func=_cmd_etl)

    p = sub.add_parser("search", help="rank documents for a query")
    p.add_argument("--index", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--k", type=int, default=20)
    p.add_argument("--role")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("entities", help="build the entity relevance store")
    p.add_argument("--index", required=True)
    p.add_argument("--structure", required=True)
    p.add_argument("--exclusions")
    p.set_defaults(func=_cmd_entities)

    p = sub.add_parser("train", help="train the topic model")
    p.add_argument("--index", required=True)
    p.add_argument("--topics", type=int, default=100)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=0.01)
    p.add_argument("--sweeps", type=int, default=500)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("topics", help="inspect trained topics")
    topics_sub = p.add_subparsers(dest="topics_action", required=True)
    show = topics_sub.add_parser("show")
    show.add_argument("--model", required=True)
    show.add_argument("--top", type=int, default=7)
    show.add_argument("--index")
    show.set_defaults(func=_cmd_topics_show)

    p = sub.add_parser("define-topic", help="interactive topic definition")
    p.add_argument("--index", required=True)
    p.add_argument("--name", required=True)
    p.add_argument("--seed", required=True)
    p.add_argument("--suggestions", type=int, default=20)
    p.add_argument("--band", type=int, default=10)
    p.set_defaults(func=_cmd_define_topic)

    p = sub.add_parser("role", help="manage roles")
    role_sub = p.add_subparsers(dest="role_action", required=True)
    create = role_sub.add_parser("create")
    create.add_argument("--index", required=True)
    create.add_argument("--name", required=True)
    create.add_argument("--entity")
    create.add_argument("--topic")
    create.add_argument("--lambda1", type=float, default=None)
    create.add_argument("--lambda2", type=float, default=None)
    create.set_defaults(func=_cmd_role)
    listing = role_sub.add_parser("list")
    listing.add_argument("--index", required=True)
    listing.set_defaults(func=_cmd_role)

    p = sub.add_parser("eval", help="benchmark strategies against qrels")
    p.add_argument("--index", required=True)
    p.add_argument("--qrels", required=True)
    p.add_argument("--queries", required=True)
    p.add_argument("--strategies", default="keyword,keyword+entity-keyword,role")
    p.add_argument("--k", type=int, default=20)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--index", required=True)
    p.add_argument("--addr", default="127.0.0.1:8080")
    p.add_argument("--static")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, FileNotFoundError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
