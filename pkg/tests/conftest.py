import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from resilang.catalog import builtin_catalog
from resilang.graph import build_language_graph


@pytest.fixture(scope="session")
def catalog():
    return builtin_catalog()


@pytest.fixture(scope="session")
def graph(catalog):
    return build_language_graph(catalog)
