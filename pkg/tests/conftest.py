import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from eqschubert.schubert import get_table  # noqa: E402


@pytest.fixture(scope="session")
def tables():
    return {n: get_table(n) for n in range(1, 6)}
