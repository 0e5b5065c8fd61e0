"""Shared fixtures: a fully built synthetic world reused across tests.

The session-scoped index directory is read-only; tests that mutate
registries (topics/roles) get a private copy.
"""

from __future__ import annotations

import shutil

import hypothesis
import pytest

from rolesearch.engine import SearchEngine, run_etl
from rolesearch.knowledge import save_structure
from rolesearch.synthetic import (
    BlockSpec,
    RegionSpec,
    SyntheticSpec,
    generate_synthetic_corpus,
)

hypothesis.settings.register_profile("suite", deadline=None, max_examples=60)
hypothesis.settings.load_profile("suite")

WORLD_SPEC = SyntheticSpec(
    blocks=(BlockSpec("quake"), BlockSpec("trade"), BlockSpec("sport")),
    regions=(RegionSpec("norland"), RegionSpec("souland"), RegionSpec("estland")),
    docs_per_cell=25,
    doc_len=40,
)
WORLD_SEED = 11
WORLD_LDA = dict(n_topics=3, alpha=1.0, beta=0.01, n_sweeps=150, seed=7)


@pytest.fixture(scope="session")
def world():
    return generate_synthetic_corpus(WORLD_SPEC, seed=WORLD_SEED)


@pytest.fixture(scope="session")
def world_dir(world, tmp_path_factory):
    index_dir = tmp_path_factory.mktemp("world") / "index"
    engine = run_etl(world.documents, index_dir)
    structure_path = index_dir / "source-structure.tsv"
    save_structure(world.structure, structure_path)
    engine.build_entities(structure_path)
    engine.train_model(**WORLD_LDA)
    return index_dir


@pytest.fixture(scope="session")
def shared_engine(world_dir):
    """Read-only engine over the session index; do not mutate registries."""
    return SearchEngine(world_dir)


@pytest.fixture
def engine(world_dir, tmp_path):
    """A private copy of the world index, safe to mutate."""
    private = tmp_path / "index"
    shutil.copytree(world_dir, private)
    return SearchEngine(private)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo one PASS/FAIL line per acceptance criterion after the run."""
    import sys

    for name, module in list(sys.modules.items()):
        if name.rpartition(".")[2] == "test_acceptance":
            results = getattr(module, "CRITERION_RESULTS", None)
            if results:
                terminalreporter.section("acceptance criteria")
                for line in results:
                    terminalreporter.write_line(line)
