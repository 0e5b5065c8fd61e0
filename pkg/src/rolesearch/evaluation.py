"""Retrieval evaluation against TREC-style relevance judgments.

Follows the strict convention that unjudged documents count as
irrelevant; precision@k keeps k in the denominator even for short
result lists.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence


class QrelsError(ValueError):
    pass


@dataclass
class Qrels:
    judgments: dict[tuple[str, str], int] = field(default_factory=dict)

    def add(self, query_id: str, doc_id: str, relevance: int) -> None:
        key = (query_id, doc_id)
        if key in self.judgments:
            raise QrelsError(f"duplicate judgment for query {query_id!r}, doc {doc_id!r}")
        self.judgments[key] = 1 if relevance > 0 else 0

    def relevant(self, query_id: str) -> set[str]:
        return {d for (q, d), rel in self.judgments.items() if q == query_id and rel == 1}

    def is_relevant(self, query_id: str, doc_id: str) -> bool:
        return self.judgments.get((query_id, doc_id), 0) == 1

    @property
    def query_ids(self) -> list[str]:
        return sorted({q for q, _ in self.judgments})


def load_qrels(path: str | Path) -> Qrels:
    """Parse standard 4-column qrels lines: qid 0 docid rel."""
    qrels = Qrels()
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 4:
            raise QrelsError(f"{path}:{line_no}: expected 4 fields, got {len(parts)}")
        query_id, _, doc_id, rel = parts
        try:
            qrels.add(query_id, doc_id, int(rel))
        except ValueError as exc:
            if isinstance(exc, QrelsError):
                raise QrelsError(f"{path}:{line_no}: {exc}") from None
            raise QrelsError(f"{path}:{line_no}: bad relevance value {rel!r}") from exc
    return qrels


def save_qrels(qrels: Qrels, path: str | Path) -> None:
    lines = [
        f"{q} 0 {d} {rel}" for (q, d), rel in sorted(qrels.judgments.items())
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def precision_at_k(
    ranked_docs: Sequence[str], query_id: str, qrels: Qrels, k: int = 20
) -> float:
    """Fraction of the top-k results judged relevant."""
    if k < 1:
        raise ValueError("k must be at least 1")
    hits = sum(1 for doc_id in ranked_docs[:k] if qrels.is_relevant(query_id, doc_id))
    return hits / k


@dataclass
class EvalReport:
    k: int
    strategies: list[str]
    per_query: dict[str, dict[str, float]]  # strategy -> query_id -> precision@k

    @property
    def means(self) -> dict[str, float]:
        return {
            s: (sum(v.values()) / len(v)) if v else 0.0
            for s, v in self.per_query.items()
        }

    def render_text(self) -> str:
        query_ids = sorted({q for v in self.per_query.values() for q in v})
        width = max([len(s) for s in self.strategies] + [8])
        col = max([len(q) for q in query_ids] + [6])
        lines = [f"{'strategy'.ljust(width)}  " + "  ".join(f"{q:>{col}}" for q in query_ids)
                 + f"  {'mean':>6}"]
        for s in self.strategies:
            row = self.per_query.get(s, {})
            cells = "  ".join(f"{row.get(q, float('nan')):>{col}.3f}" for q in query_ids)
            lines.append(f"{s.ljust(width)}  {cells}  {self.means[s]:>6.3f}")
        lines.append(f"precision@{self.k}; unjudged documents count as irrelevant")
        return "\n".join(lines)

    def to_records(self) -> list[dict]:
        records = []
        for s in self.strategies:
            for q, p in sorted(self.per_query.get(s, {}).items()):
                records.append({"strategy": s, "query_id": q, "precision": p, "k": self.k})
            records.append({"strategy": s, "query_id": "__mean__",
                            "precision": self.means[s], "k": self.k})
        return records

    def write_records(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for record in self.to_records():
                fh.write(json.dumps(record) + "\n")


def run_benchmark(
    strategies: Mapping[str, Callable[[str], Sequence[str]]],
    queries: Mapping[str, str],
    qrels: Qrels,
    k: int = 20,
) -> EvalReport:
    """Run every strategy over every query and tabulate precision@k.

    A strategy maps a query id to a ranked doc-id list; query texts and
    any per-query targets live in the closures.
    """
    per_query: dict[str, dict[str, float]] = {}
    for name, run in strategies.items():
        per_query[name] = {
            query_id: precision_at_k(list(run(query_id)), query_id, qrels, k)
            for query_id in queries
        }
    return EvalReport(k=k, strategies=list(strategies), per_query=per_query)
