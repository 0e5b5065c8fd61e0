"""Raw corpus records and directory ingestion.

Two input styles are accepted: line-delimited JSON records
(``*.jsonl``, fields ``doc_id``/``title``/``body``/``entities``) and
plain UTF-8 text files (doc_id = filename, title = first line, body =
the rest). Markup-specific scraping is a caller concern; the pipeline
contract starts at :class:`RawDocument`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class RawDocument:
    doc_id: str
    title: str
    body: str
    pre_labeled_entities: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.doc_id:
            raise CorpusError("document with empty doc_id")
        if not self.body.strip():
            raise CorpusError(f"document {self.doc_id!r} has an empty body")


@dataclass
class TokenizedDocument:
    """A document as an ordered list of token ids.

    ``tokens`` holds word ids (and phrase ids after substitution);
    ``body`` keeps a reference to the raw text for entity labeling and
    display.
    """

    doc_id: str
    title: str
    tokens: list[int] = field(default_factory=list)
    body: str = ""

    @property
    def is_empty(self) -> bool:
        return not self.tokens


def _check_unique(docs: list[RawDocument]) -> list[RawDocument]:
    seen = set()
    for doc in docs:
        if doc.doc_id in seen:
            raise CorpusError(f"duplicate doc_id {doc.doc_id!r} in corpus")
        seen.add(doc.doc_id)
    return docs


def _doc_from_record(record: dict, source: str, line_no: int) -> RawDocument:
    try:
        entities = tuple(record.get("entities") or ())
        return RawDocument(
            doc_id=str(record["doc_id"]),
            title=str(record.get("title", "")),
            body=str(record["body"]),
            pre_labeled_entities=entities,
        )
    except KeyError as exc:
        raise CorpusError(f"{source}:{line_no}: missing field {exc}") from exc


def read_corpus(corpus_dir: str | Path) -> list[RawDocument]:
    """Read every ``*.jsonl`` and ``*.txt`` document under a directory."""
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise CorpusError(f"corpus directory not found: {corpus_dir}")
    docs: list[RawDocument] = []
    for path in sorted(corpus_dir.rglob("*.jsonl")):
        for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}:{line_no}: bad JSON record: {exc}") from exc
            docs.append(_doc_from_record(record, str(path), line_no))
    for path in sorted(corpus_dir.rglob("*.txt")):
        text = path.read_text(encoding="utf-8")
        first, _, rest = text.partition("\n")
        docs.append(
            RawDocument(doc_id=path.stem, title=first.strip(), body=rest.strip() or first)
        )
    if not docs:
        raise CorpusError(f"no documents found under {corpus_dir}")
    return _check_unique(docs)
