from pathlib import Path

import pytest

CORPUS = Path(__file__).parent / "corpus"


@pytest.fixture(autouse=True)
def datapath(tmp_path, monkeypatch):
    """Experiments store their tables under a throwaway directory"""
    path = tmp_path / "silverlab-data"
    monkeypatch.setenv("SILVERLAB_DATAPATH", str(path))
    return path


@pytest.fixture
def corpus():
    return CORPUS
