"""HTTP interface over one index directory.

Read endpoints are side-effect-free; topic and role mutations go
through the versioned registries, so a stale ``version`` in a request
is rejected with 409 and the client retries from fresh state. The
service is single-node and deployment-local: no authentication.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .engine import SearchEngine
from .keyword_search import EmptyQueryError
from .lda import doc_topics
from .registry import RegistryError, StaleVersionError
from .roles import CombinedHit
from .topics import TopicDefinitionError, raw_distance, topic_score


class TopicCreate(BaseModel):
    name: str
    seed: str


class WordJudgments(BaseModel):
    version: int
    accept: list[str] = Field(default_factory=list)
    reject: list[str] = Field(default_factory=list)


class DocJudgment(BaseModel):
    doc_id: str
    relevant: bool


class CalibrateRequest(BaseModel):
    version: int
    judgments: list[DocJudgment]


class RoleCreate(BaseModel):
    name: str
    entity_target: str | None = None
    user_topic: str | None = None
    lambda1: float | None = None
    lambda2: float | None = None


def _topic_payload(topic) -> dict:
    return {
        "topic_id": topic.topic_id,
        "name": topic.name,
        "seed_words": topic.seed_words,
        "accepted_words": topic.accepted_words,
        "rejected_words": topic.rejected_words,
        "has_centroid": topic.centroid is not None,
        "correction": topic.correction,
        "status": topic.status,
        "version": topic.version,
    }


def _role_payload(role) -> dict:
    return {
        "role_id": role.role_id,
        "name": role.name,
        "entity_target": role.entity_target,
        "user_topic": role.user_topic,
        "lambda1": role.lambda1,
        "lambda2": role.lambda2,
        "version": role.version,
    }


def _hit_payload(hit: CombinedHit, title: str) -> dict:
    return {
        "doc_id": hit.doc_id,
        "title": title,
        "qlm_score": hit.qlm_score,
        "topic_z": hit.topic_z,
        "entity_z": hit.entity_z,
        "combined": hit.combined,
    }


def create_app(engine: SearchEngine, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="rolesearch", version="1")

    def fail(status: int, exc: Exception):
        raise HTTPException(status_code=status, detail=str(exc)) from exc

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/stats")
    def stats():
        return engine.stats()

    @app.get("/search")
    def search(q: str, role: str | None = None, k: int = 20):
        try:
            if role is None:
                hits = engine.keyword_search(q, k)
                payload = [
                    _hit_payload(
                        CombinedHit(h.doc_id, h.score, 0.0, 0.0, h.score),
                        engine.title_of(h.doc_id),
                    )
                    for h in hits
                ]
            else:
                payload = [
                    _hit_payload(h, engine.title_of(h.doc_id))
                    for h in engine.role_search(q, role, k)
                ]
        except (EmptyQueryError, ValueError) as exc:
            fail(400, exc)
        except RegistryError as exc:
            fail(404, exc)
        return {"query": q, "role": role, "hits": payload}

    @app.get("/documents/{doc_id}")
    def document(doc_id: str):
        doc = engine.documents.get(doc_id)
        if doc is None:
            raise HTTPException(status_code=404, detail=f"no such document: {doc_id}")
        entity = None
        if engine.entity_store is not None:
            rel = engine.entity_store.get(doc_id)
            if rel is not None:
                entity = {"countries": rel.country_dist, "regions": rel.region_dist}
        topic_dist = None
        if engine.model is not None and doc_id in engine.model._doc_row_of:
            topic_dist = [float(p) for p in doc_topics(engine.model, doc_id)]
        return {
            "doc_id": doc_id,
            "title": doc.title,
            "body": doc.body,
            "entity_distribution": entity,
            "topic_distribution": topic_dist,
        }

    @app.post("/topics")
    def create_topic(req: TopicCreate):
        try:
            topic = engine.create_topic(req.name, req.seed)
        except (TopicDefinitionError, RuntimeError) as exc:
            fail(400, exc)
        return _topic_payload(topic)

    @app.get("/topics")
    def list_topics():
        return [_topic_payload(t) for t in engine.topics.list()]

    @app.get("/topics/{topic_id}")
    def get_topic(topic_id: str):
        try:
            return _topic_payload(engine.topics.get(topic_id))
        except RegistryError as exc:
            fail(404, exc)

    @app.get("/topics/{topic_id}/suggestions")
    def topic_suggestions(topic_id: str, n: int = 20):
        try:
            return {"topic_id": topic_id, "suggestions": engine.suggestions(topic_id, n)}
        except RegistryError as exc:
            fail(404, exc)
        except (TopicDefinitionError, RuntimeError) as exc:
            fail(400, exc)

    @app.post("/topics/{topic_id}/judgments")
    def judge_words(topic_id: str, req: WordJudgments):
        try:
            topic = engine.judge_words(topic_id, req.version, req.accept, req.reject)
        except RegistryError as exc:
            fail(404, exc)
        except StaleVersionError as exc:
            fail(409, exc)
        except (TopicDefinitionError, RuntimeError) as exc:
            fail(400, exc)
        return _topic_payload(topic)

    @app.get("/topics/{topic_id}/boundary")
    def boundary(topic_id: str, band: int = 10):
        try:
            docs = engine.boundary_docs(topic_id, band)
        except RegistryError as exc:
            fail(404, exc)
        except (TopicDefinitionError, RuntimeError) as exc:
            fail(400, exc)
        return {
            "topic_id": topic_id,
            "documents": [{"doc_id": d, "title": engine.title_of(d)} for d in docs],
        }

    @app.post("/topics/{topic_id}/calibrate")
    def calibrate(topic_id: str, req: CalibrateRequest):
        judgments = [(j.doc_id, j.relevant) for j in req.judgments]
        try:
            topic = engine.calibrate_topic(topic_id, req.version, judgments)
        except RegistryError as exc:
            fail(404, exc)
        except StaleVersionError as exc:
            fail(409, exc)
        except (TopicDefinitionError, RuntimeError) as exc:
            fail(400, exc)
        model = engine.model
        rel = [raw_distance(d, topic, model) - topic.correction
               for d, ok in judgments if ok]
        irr = [raw_distance(d, topic, model) - topic.correction
               for d, ok in judgments if not ok]
        payload = _topic_payload(topic)
        payload["calibration"] = {
            "mean_relevant_corrected": sum(rel) / len(rel),
            "mean_irrelevant_corrected": sum(irr) / len(irr),
        }
        return payload

    @app.get("/topics/{topic_id}/ranking")
    def topic_ranking(topic_id: str, k: int = 10):
        try:
            topic = engine.topics.get(topic_id)
            model = engine.model
            if model is None:
                raise TopicDefinitionError("no topic model trained yet")
            scored = sorted(
                ((topic_score(d, topic, model), d) for d in model.doc_ids),
                key=lambda item: (-item[0], item[1]),
            )
        except RegistryError as exc:
            fail(404, exc)
        except (TopicDefinitionError, RuntimeError) as exc:
            fail(400, exc)
        return {
            "topic_id": topic_id,
            "documents": [
                {"doc_id": d, "title": engine.title_of(d), "topic_score": s}
                for s, d in scored[: max(k, 0)]
            ],
        }

    @app.post("/roles")
    def create_role(req: RoleCreate):
        try:
            role = engine.create_role(
                req.name, req.entity_target, req.user_topic, req.lambda1, req.lambda2
            )
        except (ValueError, KeyError, RuntimeError) as exc:
            fail(400, exc)
        return _role_payload(role)

    @app.get("/roles")
    def list_roles():
        return [_role_payload(r) for r in engine.roles.list()]

    @app.get("/structure")
    def structure():
        if engine.structure is None:
            raise HTTPException(status_code=404, detail="no knowledge structure loaded")
        nodes = [
            {
                "node_id": n.node_id,
                "name": n.name,
                "layer": n.layer,
                "parents": engine.structure.parents.get(n.node_id, []),
            }
            for n in sorted(engine.structure.nodes.values(), key=lambda n: n.node_id)
        ]
        return {"nodes": nodes}

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app


def serve(index_dir: str | Path, addr: str = "127.0.0.1:8080",
          static_dir: str | Path | None = None) -> None:
    """Run the service until interrupted; uvicorn drains on shutdown."""
    import uvicorn

    engine = SearchEngine(index_dir)
    if static_dir is None:
        default_ui = Path(index_dir).parent / "frontend" / "dist"
        static_dir = default_ui if default_ui.is_dir() else None
    app = create_app(engine, static_dir)
    host, _, port = addr.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8080), log_level="info")
