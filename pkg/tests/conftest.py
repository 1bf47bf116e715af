from pathlib import Path

import pytest

from mondrian.numtheory import build_factor_table

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(autouse=True)
def _no_inherited_thread_env(monkeypatch):
    monkeypatch.delenv("MONDRIAN_THREADS", raising=False)


@pytest.fixture(scope="session")
def table():
    return build_factor_table(10**6)


@pytest.fixture(scope="session")
def bfile_path():
    return DATA_DIR / "b276523.txt"
