import math
import random
import statistics

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rolesearch.roles import CombinedHit, Role, RoleError, combined_score, zscore


class TestRole:
    def test_defaults_follow_targets(self):
        full = Role(role_id="r", name="x", entity_target="e", user_topic="t")
        assert (full.lambda1, full.lambda2) == (0.07, 0.90)
        bare = Role(role_id="r", name="x")
        assert (bare.lambda1, bare.lambda2) == (0.0, 0.0)
        entity_only = Role(role_id="r", name="x", entity_target="e")
        assert (entity_only.lambda1, entity_only.lambda2) == (0.0, 0.90)

    def test_weights_must_stay_convex(self):
        with pytest.raises(RoleError):
            Role(role_id="r", name="x", entity_target="e", user_topic="t",
                 lambda1=0.5, lambda2=0.6)
        with pytest.raises(RoleError):
            Role(role_id="r", name="x", entity_target="e", lambda2=-0.1)

    def test_missing_target_forces_zero_weight(self):
        with pytest.raises(RoleError):
            Role(role_id="r", name="x", lambda2=0.9)
        with pytest.raises(RoleError):
            Role(role_id="r", name="x", lambda1=0.07)


class TestZscore:
    def test_arithmetic_oracle(self):
        values = {"a": 1.0, "b": 2.0, "c": 3.0}
        expected = statistics.pstdev(values.values())
        out = zscore(values)
        assert out["a"] == pytest.approx((1 - 2) / expected, abs=1e-12)
        assert out["b"] == 0.0
        assert out["c"] == pytest.approx((3 - 2) / expected, abs=1e-12)
        assert out["c"] == pytest.approx(1.224744871391589, abs=1e-12)

    def test_constant_values_map_to_zero(self):
        assert zscore({"a": 0.4, "b": 0.4}) == {"a": 0.0, "b": 0.0}

    def test_single_value_is_zero(self):
        assert zscore({"only": 7.3}) == {"only": 0.0}

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            zscore({})

    @given(
        st.dictionaries(
            st.text(min_size=1, max_size=4),
            # a coarse grid keeps the spread representable after shifting,
            # so the transformation cannot collapse distinct values
            st.integers(min_value=-1000, max_value=1000).map(lambda i: i / 10),
            min_size=2,
            max_size=20,
        ),
        st.floats(min_value=0.1, max_value=50),
        st.floats(min_value=-20, max_value=20),
    )
    def test_affine_invariance(self, values, scale, shift):
        base = zscore(values)
        transformed = zscore({k: scale * v + shift for k, v in values.items()})
        for key in values:
            assert transformed[key] == pytest.approx(base[key], abs=1e-6)

    @given(
        st.dictionaries(
            st.text(min_size=1, max_size=4),
            st.floats(min_value=-50, max_value=50),
            min_size=1,
            max_size=20,
        )
    )
    def test_standardized_moments(self, values):
        out = zscore(values)
        n = len(out)
        mean = sum(out.values()) / n
        assert mean == pytest.approx(0.0, abs=1e-9)
        if any(abs(v) > 0 for v in out.values()):
            var = sum(v ** 2 for v in out.values()) / n
            assert var == pytest.approx(1.0, rel=1e-6)


class TestCombinedScore:
    def test_zero_weights_return_qlm(self):
        role = Role(role_id="r", name="x")
        assert combined_score(12.5, 3.0, -1.0, role) == 12.5

    def test_paper_weights_arithmetic(self):
        role = Role(role_id="r", name="x", entity_target="e", user_topic="t",
                    lambda1=0.07, lambda2=0.90)
        assert combined_score(10.0, 1.0, 1.0, role) == pytest.approx(1.27, abs=1e-12)

    def test_entity_sign_flip_moves_score_linearly(self):
        role = Role(role_id="r", name="x", entity_target="e", lambda2=0.90)
        up = combined_score(5.0, 0.0, 1.0, role)
        down = combined_score(5.0, 0.0, -1.0, role)
        assert up - down == pytest.approx(1.8, abs=1e-12)

    @given(
        st.floats(min_value=0, max_value=50),
        st.floats(min_value=-3, max_value=3),
        st.floats(min_value=-3, max_value=3),
        st.floats(min_value=0, max_value=1),
    )
    def test_affine_in_each_argument(self, qlm, tz, ez, l1):
        l2 = (1 - l1) * 0.5
        role = Role(role_id="r", name="x", entity_target="e", user_topic="t",
                    lambda1=l1, lambda2=l2)
        base = combined_score(qlm, tz, ez, role)
        assert combined_score(qlm + 1, tz, ez, role) - base == pytest.approx(
            1 - l1 - l2, abs=1e-9
        )
        assert combined_score(qlm, tz + 1, ez, role) - base == pytest.approx(l1, abs=1e-9)
        assert combined_score(qlm, tz, ez + 1, role) - base == pytest.approx(l2, abs=1e-9)


class TestRoleSearch:
    def test_no_target_role_equals_keyword_ranking(self, shared_engine):
        role = Role(role_id="r", name="bare")
        rng = random.Random(17)
        words = shared_engine.vocab.keyword_words
        for _ in range(25):
            query = " ".join(rng.sample(words, rng.randint(1, 3)))
            keyword = shared_engine.keyword_search(query, k=20)
            combined = shared_engine.role_search(query, role, k=20)
            assert [h.doc_id for h in combined] == [h.doc_id for h in keyword]
            for ch, kh in zip(combined, keyword):
                assert ch.combined == kh.score

    def test_entity_role_prefers_target_region(self, shared_engine, world):
        role = Role(role_id="r", name="norland", entity_target="region:norland")
        query = world.query_words["quake"]
        hits = shared_engine.role_search(query, role, k=20)
        top_regions = [world.region_of[h.doc_id] for h in hits[:10]]
        assert top_regions.count("norland") == 10

    def test_role_results_blend_keyword_and_role_relevance(self, shared_engine, world):
        # the "potato under a USA+economics role" shape: top keyword hits
        # surface, plus role-relevant documents with weaker keyword scores
        role = Role(role_id="r", name="norland", entity_target="region:norland")
        query = world.query_words["trade"]
        combined = shared_engine.role_search(query, role, k=30)
        keyword_only = shared_engine.keyword_search(query, k=30)
        combined_ids = {h.doc_id for h in combined}
        strong_keyword_in_region = [
            h.doc_id
            for h in keyword_only
            if world.region_of[h.doc_id] == "norland"
        ]
        assert set(strong_keyword_in_region[:5]) <= combined_ids
        assert any(world.block_of[d] == "trade" for d in combined_ids)
        # region-relevant docs outrank the region-irrelevant keyword hits
        out_of_region = [h.doc_id for h in combined if world.region_of[h.doc_id] != "norland"]
        in_region = [h.doc_id for h in combined if world.region_of[h.doc_id] == "norland"]
        assert len(in_region) > len(out_of_region)

    def test_combined_hit_invariant(self, shared_engine, world):
        role = Role(role_id="r", name="norland", entity_target="region:norland")
        hits = shared_engine.role_search(world.query_words["quake"], role, k=10)
        for h in hits:
            expected = (
                role.lambda1 * h.topic_z
                + role.lambda2 * h.entity_z
                + (1 - role.lambda1 - role.lambda2) * h.qlm_score
            )
            assert h.combined == pytest.approx(expected, abs=1e-12)

    def test_empty_query_without_targets_rejected(self, shared_engine):
        from rolesearch.keyword_search import EmptyQueryError

        role = Role(role_id="r", name="bare")
        with pytest.raises(EmptyQueryError):
            shared_engine.role_search("the of an", role, k=5)

    def test_empty_query_with_entity_target_ranks_by_entity(self, shared_engine, world):
        role = Role(role_id="r", name="norland", entity_target="region:norland")
        hits = shared_engine.role_search("the of", role, k=10)
        assert hits
        assert all(world.region_of[h.doc_id] == "norland" for h in hits)

    def test_rank_invariance_under_affine_rescaled_prong(self):
        # rescaling one prong's raw scores must not change the ordering,
        # because z-scoring absorbs positive affine maps
        raw = {f"d{i}": v for i, v in enumerate([0.9, 0.1, 0.4, 0.7, 0.2, 0.55])}
        qlm = {d: 1.0 + i * 0.01 for i, d in enumerate(raw)}
        role = Role(role_id="r", name="x", entity_target="e", lambda2=0.9)

        def ranking(entity_raw):
            z = zscore(entity_raw)
            hits = [
                CombinedHit(d, qlm[d], 0.0, z[d], combined_score(qlm[d], 0.0, z[d], role))
                for d in raw
            ]
            return [h.doc_id for h in sorted(hits, key=lambda h: (-h.combined, h.doc_id))]

        base = ranking(raw)
        assert ranking({d: 3.5 * v + 0.25 for d, v in raw.items()}) == base

    def test_missing_stores_reported(self, shared_engine):
        role = Role(role_id="r", name="x", user_topic="t-unknown", lambda1=0.07)
        from rolesearch.registry import RegistryError

        with pytest.raises(RegistryError):
            shared_engine.role_search("quakeseek", role, k=5)


def test_zscore_matches_math_oracle():
    values = {c: float(i * i) for i, c in enumerate("abcdefg")}
    mean = sum(values.values()) / len(values)
    std = math.sqrt(sum((v - mean) ** 2 for v in values.values()) / len(values))
    out = zscore(values)
    for key, v in values.items():
        assert out[key] == pytest.approx((v - mean) / std, abs=1e-12)
