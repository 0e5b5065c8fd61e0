"""Latent topic model trained by collapsed Gibbs sampling.

Each token carries a topic label; a sweep revisits every token in
document-then-position order, removes it from the count matrices, and
redraws its topic from

    P(z_i = j) ∝ (wt[i][j] + beta) / (topic_totals[j] + W*beta)
              * (dt[d][j] + alpha) / (doc_totals[d] + T*alpha)

where the token being resampled is excluded from every count, including
the document-length denominator. All randomness comes from one numpy
Generator seeded up front (topic initialization, then one uniform per
token per sweep), so a (corpus, T, alpha, beta, n_sweeps, seed) tuple
fully determines the trained model. The inner loop is numba-compiled
when available; the pure-Python fallback performs the identical
floating-point operations and yields bit-identical models.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

DEFAULT_BETA = 0.01
DEFAULT_TOPICS = 100
DEFAULT_SWEEPS = 500

MODEL_MAGIC = "# rolesearch topic-model v1"


def default_alpha(n_topics: int) -> float:
    return 50.0 / n_topics


def _sweep_kernel(token_rows, doc_rows, z, wt, dt, topic_totals, doc_totals, alpha, beta, uniforms):
    n_types, n_topics = wt.shape
    wbeta = n_types * beta
    talpha = n_topics * alpha
    cum = np.empty(n_topics)
    changed = 0
    for i in range(token_rows.shape[0]):
        w = token_rows[i]
        d = doc_rows[i]
        old = z[i]
        wt[w, old] -= 1
        dt[d, old] -= 1
        topic_totals[old] -= 1
        doc_totals[d] -= 1
        total = 0.0
        for j in range(n_topics):
            p = ((wt[w, j] + beta) / (topic_totals[j] + wbeta)) * (
                (dt[d, j] + alpha) / (doc_totals[d] + talpha)
            )
            total += p
            cum[j] = total
        r = uniforms[i] * total
        new = 0
        while new < n_topics - 1 and cum[new] <= r:
            new += 1
        z[i] = new
        wt[w, new] += 1
        dt[d, new] += 1
        topic_totals[new] += 1
        doc_totals[d] += 1
        if new != old:
            changed += 1
    return changed


if _HAVE_NUMBA:
    _sweep_fast = njit(cache=True)(_sweep_kernel)
else:  # pragma: no cover
    _sweep_fast = _sweep_kernel


@dataclass
class SweepStats:
    sweep: int
    n_changed: int


@dataclass
class TopicModel:
    """Count matrices and assignments from a Gibbs sampling run."""

    n_topics: int
    alpha: float
    beta: float
    token_ids: np.ndarray  # (W,) sampler vocabulary, sorted token ids
    doc_ids: list[str]
    wt_counts: np.ndarray  # (W, T) word-topic counts
    dt_counts: np.ndarray  # (D, T) document-topic counts
    topic_totals: np.ndarray  # (T,) tokens assigned to each topic
    doc_totals: np.ndarray  # (D,) tokens in each document
    token_rows: np.ndarray  # (N,) flat row index per token
    doc_rows: np.ndarray  # (N,) flat document index per token
    assignments: np.ndarray  # (N,) topic label per token
    seed: int
    sweeps_done: int = 0
    _row_of: dict[int, int] = field(init=False, repr=False)
    _doc_row_of: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        self._row_of = {int(t): i for i, t in enumerate(self.token_ids)}
        self._doc_row_of = {d: i for i, d in enumerate(self.doc_ids)}

    @property
    def n_types(self) -> int:
        return int(self.token_ids.shape[0])

    def row_of(self, token_id: int) -> int:
        try:
            return self._row_of[int(token_id)]
        except KeyError:
            raise KeyError(f"token id {token_id} is not in the trained model") from None

    def doc_row(self, doc_id: str) -> int:
        try:
            return self._doc_row_of[doc_id]
        except KeyError:
            raise KeyError(f"document {doc_id!r} is not in the trained model") from None


def init_assignments(corpus, n_topics: int, seed: int, alpha: float | None = None,
                     beta: float = DEFAULT_BETA) -> TopicModel:
    """Assign each token a uniform random topic and build the counts."""
    rng = np.random.default_rng(seed)
    return _init_with_rng(corpus, n_topics, rng, seed, alpha, beta)


def _init_with_rng(corpus, n_topics, rng, seed, alpha, beta) -> TopicModel:
    if n_topics < 1:
        raise ValueError("need at least one topic")
    if not corpus:
        raise ValueError("cannot train on an empty corpus")
    if alpha is None:
        alpha = default_alpha(n_topics)
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")

    token_ids = np.array(sorted({t for doc in corpus for t in doc.tokens}), dtype=np.int64)
    if token_ids.size == 0:
        raise ValueError("corpus has no tokens")
    row_of = {int(t): i for i, t in enumerate(token_ids)}
    doc_ids = [doc.doc_id for doc in corpus]

    token_rows = []
    doc_rows = []
    for d, doc in enumerate(corpus):
        for t in doc.tokens:
            token_rows.append(row_of[t])
            doc_rows.append(d)
    token_rows = np.array(token_rows, dtype=np.int64)
    doc_rows = np.array(doc_rows, dtype=np.int64)

    z = rng.integers(0, n_topics, token_rows.shape[0]).astype(np.int64)
    wt = np.zeros((token_ids.shape[0], n_topics), dtype=np.int64)
    dt = np.zeros((len(doc_ids), n_topics), dtype=np.int64)
    np.add.at(wt, (token_rows, z), 1)
    np.add.at(dt, (doc_rows, z), 1)
    return TopicModel(
        n_topics=n_topics,
        alpha=alpha,
        beta=beta,
        token_ids=token_ids,
        doc_ids=doc_ids,
        wt_counts=wt,
        dt_counts=dt,
        topic_totals=wt.sum(axis=0),
        doc_totals=np.bincount(doc_rows, minlength=len(doc_ids)).astype(np.int64),
        token_rows=token_rows,
        doc_rows=doc_rows,
        assignments=z,
        seed=seed,
    )


def gibbs_sweep(model: TopicModel, rng: np.random.Generator) -> SweepStats:
    """Resample every token once, in document-then-position order."""
    uniforms = rng.random(model.token_rows.shape[0])
    n_changed = _sweep_fast(
        model.token_rows,
        model.doc_rows,
        model.assignments,
        model.wt_counts,
        model.dt_counts,
        model.topic_totals,
        model.doc_totals,
        model.alpha,
        model.beta,
        uniforms,
    )
    model.sweeps_done += 1
    return SweepStats(sweep=model.sweeps_done, n_changed=int(n_changed))


def train(corpus, n_topics: int, alpha: float | None = None, beta: float = DEFAULT_BETA,
          n_sweeps: int = DEFAULT_SWEEPS, seed: int = 0) -> TopicModel:
    """Initialize and run the sampler for a fixed number of sweeps."""
    if n_sweeps < 1:
        raise ValueError("need at least one sweep")
    rng = np.random.default_rng(seed)
    model = _init_with_rng(corpus, n_topics, rng, seed, alpha, beta)
    for _ in range(n_sweeps):
        gibbs_sweep(model, rng)
    return model


def conditional(model: TopicModel, token_id: int, doc_id: str) -> np.ndarray:
    """Topic distribution for one token under the collapsed conditional.

    Assumes the token's current assignment has already been removed from
    the counts; evaluates the sampler's formula on the model as it
    stands and normalizes.
    """
    w = model.row_of(token_id)
    d = model.doc_row(doc_id)
    weights = (
        (model.wt_counts[w] + model.beta)
        / (model.topic_totals + model.n_types * model.beta)
        * (model.dt_counts[d] + model.alpha)
        / (model.doc_totals[d] + model.n_topics * model.alpha)
    )
    return weights / weights.sum()


def doc_topics(model: TopicModel, doc_id: str) -> np.ndarray:
    """Smoothed topic distribution of a document."""
    d = model.doc_row(doc_id)
    row = model.dt_counts[d] + model.alpha
    return row / (model.doc_totals[d] + model.n_topics * model.alpha)


def word_topics(model: TopicModel, token_id: int) -> np.ndarray:
    """Smoothed, per-word-normalized topic distribution of a word."""
    w = model.row_of(token_id)
    shares = (model.wt_counts[w] + model.beta) / (
        model.topic_totals + model.n_types * model.beta
    )
    return shares / shares.sum()


def top_words(model: TopicModel, topic: int, n: int, surfaces: dict[int, str]) -> list[str]:
    """The n words most often assigned to a topic, ties alphabetical."""
    if not 0 <= topic < model.n_topics:
        raise ValueError(f"topic {topic} out of range")
    ranked = sorted(
        range(model.n_types),
        key=lambda row: (
            -int(model.wt_counts[row, topic]),
            surfaces.get(int(model.token_ids[row]), str(model.token_ids[row])),
        ),
    )
    return [
        surfaces.get(int(model.token_ids[row]), str(model.token_ids[row]))
        for row in ranked[: max(n, 0)]
    ]


def recount(model: TopicModel) -> tuple[np.ndarray, np.ndarray]:
    """Rebuild the count matrices from raw assignments (for invariants)."""
    wt = np.zeros_like(model.wt_counts)
    dt = np.zeros_like(model.dt_counts)
    np.add.at(wt, (model.token_rows, model.assignments), 1)
    np.add.at(dt, (model.doc_rows, model.assignments), 1)
    return wt, dt


def save_model(model: TopicModel, path: str | Path, with_assignments: bool = True) -> None:
    """Persist the model as versioned plain text (sparse triplets)."""
    lines = [
        MODEL_MAGIC,
        f"# T={model.n_topics} alpha={model.alpha!r} beta={model.beta!r} "
        f"seed={model.seed} sweeps={model.sweeps_done}",
    ]
    for i, t in enumerate(model.token_ids):
        lines.append(f"token\t{i}\t{int(t)}")
    for d, doc_id in enumerate(model.doc_ids):
        lines.append(f"doc\t{d}\t{doc_id}")
    rows, cols = np.nonzero(model.wt_counts)
    for r, c in zip(rows.tolist(), cols.tolist()):
        lines.append(f"wt\t{r}\t{c}\t{int(model.wt_counts[r, c])}")
    rows, cols = np.nonzero(model.dt_counts)
    for r, c in zip(rows.tolist(), cols.tolist()):
        lines.append(f"dt\t{r}\t{c}\t{int(model.dt_counts[r, c])}")
    if with_assignments:
        lines.append("z\t" + " ".join(str(int(v)) for v in model.assignments))
        lines.append("tok\t" + " ".join(str(int(v)) for v in model.token_rows))
        lines.append("docrow\t" + " ".join(str(int(v)) for v in model.doc_rows))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> TopicModel:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != MODEL_MAGIC:
        raise ValueError(f"{path}: not a rolesearch topic-model file")
    header = dict(kv.split("=", 1) for kv in lines[1].lstrip("# ").split())
    n_topics = int(header["T"])
    tokens: dict[int, int] = {}
    docs: dict[int, str] = {}
    wt_trip: list[tuple[int, int, int]] = []
    dt_trip: list[tuple[int, int, int]] = []
    z = tok = docrow = None
    for line in lines[2:]:
        if not line.strip():
            continue
        kind, _, rest = line.partition("\t")
        if kind == "token":
            i, t = rest.split("\t")
            tokens[int(i)] = int(t)
        elif kind == "doc":
            d, doc_id = rest.split("\t", 1)
            docs[int(d)] = doc_id
        elif kind == "wt":
            r, c, v = rest.split("\t")
            wt_trip.append((int(r), int(c), int(v)))
        elif kind == "dt":
            r, c, v = rest.split("\t")
            dt_trip.append((int(r), int(c), int(v)))
        elif kind == "z":
            z = np.array(rest.split(), dtype=np.int64)
        elif kind == "tok":
            tok = np.array(rest.split(), dtype=np.int64)
        elif kind == "docrow":
            docrow = np.array(rest.split(), dtype=np.int64)
        else:
            raise ValueError(f"{path}: unknown record type {kind!r}")
    token_ids = np.array([tokens[i] for i in range(len(tokens))], dtype=np.int64)
    doc_ids = [docs[i] for i in range(len(docs))]
    wt = np.zeros((len(tokens), n_topics), dtype=np.int64)
    for r, c, v in wt_trip:
        wt[r, c] = v
    dt = np.zeros((len(docs), n_topics), dtype=np.int64)
    for r, c, v in dt_trip:
        dt[r, c] = v
    if z is None:
        z = np.zeros(0, dtype=np.int64)
        tok = np.zeros(0, dtype=np.int64)
        docrow = np.zeros(0, dtype=np.int64)
    return TopicModel(
        n_topics=n_topics,
        alpha=float(header["alpha"]),
        beta=float(header["beta"]),
        token_ids=token_ids,
        doc_ids=doc_ids,
        wt_counts=wt,
        dt_counts=dt,
        topic_totals=wt.sum(axis=0),
        doc_totals=dt.sum(axis=1),
        token_rows=tok,
        doc_rows=docrow,
        assignments=z,
        seed=int(header["seed"]),
        sweeps_done=int(header["sweeps"]),
    )
