from pathlib import Path

import pytest

from trifix.numtheory import build_spf

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def spf_10k():
    return build_spf(10_000)


@pytest.fixture(scope="session")
def data_dir():
    return DATA_DIR
