import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import make_tiny_instance, spread_instance


@pytest.fixture(scope="session")
def tiny_corpus():
    """30 enumerable instances; the first is crafted to force deep branching."""
    rng = np.random.RandomState(20240517)
    corpus = [spread_instance()]
    while len(corpus) < 30:
        corpus.append(make_tiny_instance(rng))
    return corpus
