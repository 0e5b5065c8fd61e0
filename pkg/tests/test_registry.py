import numpy as np
import pytest

from rolesearch.registry import (
    RegistryError,
    StaleVersionError,
    role_registry,
    topic_registry,
)
from rolesearch.roles import Role
from rolesearch.topics import UserTopic


def test_topic_create_get_list(tmp_path):
    reg = topic_registry(tmp_path / "topics.jsonl")
    topic = UserTopic(topic_id=reg.next_id(), name="disasters", seed_words=["quake"])
    reg.create(topic)
    assert reg.get("t1").name == "disasters"
    assert [t.topic_id for t in reg.list()] == ["t1"]
    with pytest.raises(RegistryError):
        reg.get("t9")


def test_duplicate_create_rejected(tmp_path):
    reg = topic_registry(tmp_path / "topics.jsonl")
    reg.create(UserTopic(topic_id="t1", name="a"))
    with pytest.raises(RegistryError, match="already exists"):
        reg.create(UserTopic(topic_id="t1", name="b"))


def test_update_bumps_version(tmp_path):
    reg = topic_registry(tmp_path / "topics.jsonl")
    reg.create(UserTopic(topic_id="t1", name="a"))

    def rename(topic):
        topic.name = "renamed"
        return topic

    updated = reg.update("t1", expected_version=1, mutate=rename)
    assert updated.version == 2
    assert reg.get("t1").name == "renamed"


def test_stale_version_rejected(tmp_path):
    reg = topic_registry(tmp_path / "topics.jsonl")
    reg.create(UserTopic(topic_id="t1", name="a"))
    reg.update("t1", 1, lambda t: t)
    with pytest.raises(StaleVersionError):
        reg.update("t1", 1, lambda t: t)


def test_topics_persist_across_reopen(tmp_path):
    path = tmp_path / "topics.jsonl"
    reg = topic_registry(path)
    topic = UserTopic(
        topic_id="t1",
        name="disasters",
        seed_words=["quake"],
        accepted_words=["flood"],
        centroid=np.array([0.25, 0.75]),
        correction=0.4,
        status="calibrated",
        corrected_min=-0.4,
        corrected_max=0.6,
    )
    reg.create(topic)
    reopened = topic_registry(path).get("t1")
    assert reopened.status == "calibrated"
    assert reopened.correction == 0.4
    assert reopened.centroid == pytest.approx([0.25, 0.75])
    assert reopened.corrected_min == -0.4


def test_roles_persist_and_validate(tmp_path):
    path = tmp_path / "roles.jsonl"
    reg = role_registry(path)
    reg.create(Role(role_id=reg.next_id(), name="analyst", entity_target="region:x",
                    user_topic="t1"))
    reopened = role_registry(path).get("r1")
    assert (reopened.lambda1, reopened.lambda2) == (0.07, 0.90)


def test_next_id_skips_existing(tmp_path):
    reg = topic_registry(tmp_path / "topics.jsonl")
    reg.create(UserTopic(topic_id="t1", name="a"))
    reg.create(UserTopic(topic_id="t2", name="b"))
    assert reg.next_id() == "t3"
