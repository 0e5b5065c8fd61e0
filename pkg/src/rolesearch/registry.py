"""Versioned single-writer registries for user topics and roles.

Records carry a monotonically increasing version; updates must present
the version they read (optimistic concurrency) and stale writes are
rejected. One lock serializes all mutations; reads are lock-free over
immutable snapshots.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path

import numpy as np

from .roles import Role
from .topics import UserTopic


class StaleVersionError(RuntimeError):
    pass


class RegistryError(KeyError):
    pass


def _topic_to_dict(topic: UserTopic) -> dict:
    d = {
        "topic_id": topic.topic_id,
        "name": topic.name,
        "seed_words": topic.seed_words,
        "accepted_words": topic.accepted_words,
        "rejected_words": topic.rejected_words,
        "centroid": None if topic.centroid is None else [float(x) for x in topic.centroid],
        "correction": topic.correction,
        "status": topic.status,
        "corrected_min": topic.corrected_min,
        "corrected_max": topic.corrected_max,
        "version": topic.version,
    }
    return d


def _topic_from_dict(d: dict) -> UserTopic:
    centroid = d.get("centroid")
    return UserTopic(
        topic_id=d["topic_id"],
        name=d["name"],
        seed_words=list(d.get("seed_words", [])),
        accepted_words=list(d.get("accepted_words", [])),
        rejected_words=list(d.get("rejected_words", [])),
        centroid=None if centroid is None else np.array(centroid, dtype=float),
        correction=float(d.get("correction", 0.0)),
        status=d.get("status", "draft"),
        corrected_min=d.get("corrected_min"),
        corrected_max=d.get("corrected_max"),
        version=int(d.get("version", 1)),
    )


def _role_to_dict(role: Role) -> dict:
    return {
        "role_id": role.role_id,
        "name": role.name,
        "entity_target": role.entity_target,
        "user_topic": role.user_topic,
        "lambda1": role.lambda1,
        "lambda2": role.lambda2,
        "version": role.version,
    }


def _role_from_dict(d: dict) -> Role:
    return Role(
        role_id=d["role_id"],
        name=d["name"],
        entity_target=d.get("entity_target"),
        user_topic=d.get("user_topic"),
        lambda1=d.get("lambda1"),
        lambda2=d.get("lambda2"),
        version=int(d.get("version", 1)),
    )


class Registry:
    """JSONL-backed record store with optimistic versioning."""

    def __init__(self, path: str | Path, kind: str, to_dict, from_dict, id_field: str,
                 id_prefix: str):
        self._path = Path(path)
        self._kind = kind
        self._to_dict = to_dict
        self._from_dict = from_dict
        self._id_field = id_field
        self._id_prefix = id_prefix
        self._lock = threading.Lock()
        self._records: dict[str, object] = {}
        if self._path.exists():
            for line in self._path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    record = self._from_dict(json.loads(line))
                    self._records[getattr(record, id_field)] = record

    def _flush(self) -> None:
        tmp = self._path.with_suffix(self._path.suffix + ".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            for key in sorted(self._records):
                fh.write(json.dumps(self._to_dict(self._records[key])) + "\n")
        os.replace(tmp, self._path)

    def next_id(self) -> str:
        n = 1
        while f"{self._id_prefix}{n}" in self._records:
            n += 1
        return f"{self._id_prefix}{n}"

    def create(self, record) -> None:
        with self._lock:
            key = getattr(record, self._id_field)
            if key in self._records:
                raise RegistryError(f"{self._kind} {key!r} already exists")
            self._records[key] = record
            self._flush()

    def get(self, record_id: str):
        try:
            return self._records[record_id]
        except KeyError:
            raise RegistryError(f"no such {self._kind}: {record_id!r}") from None

    def list(self) -> list:
        return [self._records[k] for k in sorted(self._records)]

    def update(self, record_id: str, expected_version: int, mutate) -> object:
        """Apply ``mutate(record) -> record`` if the version still matches."""
        with self._lock:
            current = self.get(record_id)
            if current.version != expected_version:
                raise StaleVersionError(
                    f"{self._kind} {record_id!r} is at version {current.version}, "
                    f"update expected {expected_version}"
                )
            updated = mutate(current)
            updated.version = expected_version + 1
            self._records[record_id] = updated
            self._flush()
            return updated


def topic_registry(path: str | Path) -> Registry:
    return Registry(path, "topic", _topic_to_dict, _topic_from_dict, "topic_id", "t")


def role_registry(path: str | Path) -> Registry:
    return Registry(path, "role", _role_to_dict, _role_from_dict, "role_id", "r")
