import pathlib
import sys

import pytest

from it2frbc import load_csv

sys.path.insert(0, str(pathlib.Path(__file__).parent))

DATA_DIR = pathlib.Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> pathlib.Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def iris():
    return load_csv(DATA_DIR / "iris.csv", label_column=-1)


@pytest.fixture(scope="session")
def wbcd():
    return load_csv(DATA_DIR / "wbcd.csv", label_column=-1, missing_policy="drop_row")
