import itertools

import numpy as np
import pytest

from klconc.core import CategoricalDist


def simplex_grid(k: int, points: int = 5) -> list[CategoricalDist]:
    """All distributions with weights from {1, ..., points}^k, normalized
    and deduplicated.  Every entry is strictly positive."""
    seen = set()
    out = []
    for w in itertools.product(range(1, points + 1), repeat=k):
        total = sum(w)
        key = tuple(wi / total for wi in w)
        if key in seen:
            continue
        seen.add(key)
        out.append(CategoricalDist(np.array(key)))
    return out


@pytest.fixture(scope="session")
def simplex_grids():
    return {k: simplex_grid(k) for k in (2, 3, 4)}
