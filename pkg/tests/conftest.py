import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
DATA = HERE / "data"
sys.path.insert(0, str(HERE))


def read_data(name: str) -> str:
    return (DATA / name).read_text(encoding="utf-8")


@pytest.fixture
def intro_text():
    return read_data("intro.bsr")


@pytest.fixture
def shifted_text():
    return read_data("shifted_bound.bsr")


@pytest.fixture
def unsat_text():
    return read_data("unsat_pair.bsr")
