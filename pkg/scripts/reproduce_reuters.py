#!/usr/bin/env python3
"""Benchmark harness for user-supplied licensed news data.

The full-scale news corpus and relevance judgments are licensed and are
not shipped here. Given a directory with:

    corpus/         documents (*.jsonl records or plain *.txt files)
    structure.tsv   geographic knowledge structure
    qrels.txt       4-column judgments: qid 0 docid rel
    queries.tsv     qid<TAB>keyword text[<TAB>entity node id]

this script runs the full pipeline and prints the three-strategy
precision@20 comparison (keyword only / location as extra keyword /
location via entity relevance). The expected qualitative outcome is
entity-based > location-as-keyword > keyword-only.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from rolesearch.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("data_dir", help="directory holding corpus/, structure.tsv, "
                                         "qrels.txt, queries.tsv")
    parser.add_argument("--out", default="reuters-index", help="index directory to build")
    parser.add_argument("--topics", type=int, default=100)
    parser.add_argument("--sweeps", type=int, default=500)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--k", type=int, default=20)
    parser.add_argument("--skip-etl", action="store_true",
                        help="reuse an existing index directory")
    args = parser.parse_args()

    data = Path(args.data_dir)
    required = [data / "corpus", data / "structure.tsv", data / "qrels.txt",
                data / "queries.tsv"]
    missing = [str(p) for p in required if not p.exists()]
    if missing:
        print("missing inputs (supply the licensed data yourself):", file=sys.stderr)
        for m in missing:
            print(f"  {m}", file=sys.stderr)
        return 2

    if not args.skip_etl:
        if cli_main(["etl", str(data / "corpus"), "--out", args.out]) != 0:
            return 1
        if cli_main(["entities", "--index", args.out,
                     "--structure", str(data / "structure.tsv")]) != 0:
            return 1
        if cli_main(["train", "--index", args.out, "--topics", str(args.topics),
                     "--sweeps", str(args.sweeps), "--seed", str(args.seed)]) != 0:
            return 1

    return cli_main([
        "eval", "--index", args.out,
        "--qrels", str(data / "qrels.txt"),
        "--queries", str(data / "queries.tsv"),
        "--k", str(args.k),
        "--out", str(Path(args.out) / "benchmark-records.jsonl"),
    ])


if __name__ == "__main__":
    raise SystemExit(main())
