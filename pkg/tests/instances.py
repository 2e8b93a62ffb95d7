"""Small seeded instances shared by the property and acceptance tests."""

from __future__ import annotations

import numpy as np

from subsetdfa.core import Dictionary
from subsetdfa.gen import InstanceParams, generate_instance

F_VALUES = (0.0, 0.3, 1.0)


def grid_instance(seed: int) -> Dictionary:
    """sigma in 2..6, m <= 8, n <= 20, f in {0, 0.3, 1}.

    Odd seeds additionally get ragged lengths (including empty strings) and
    duplicated rows (n stays <= 20), which the benchmark generator never produces.
    """
    rng = np.random.default_rng(seed)
    sigma = 2 + seed % 5
    f = F_VALUES[(seed // 5) % 3]
    m = int(rng.integers(1, 9))
    n = int(rng.integers(1, 21))
    lo = int(rng.integers(1, sigma + 1))
    hi = int(rng.integers(lo, sigma + 1))
    d = generate_instance(InstanceParams(m, n, sigma, lo, hi, f, seed))
    if seed % 2 == 0:
        return d
    lengths = rng.integers(0, m + 1, size=n)
    masks = d.masks.copy()
    masks[np.arange(m)[None, :] >= lengths[:, None]] = 0
    dup = rng.integers(0, n, size=int(rng.integers(0, 3)))
    masks = np.vstack([masks, masks[dup]])[:20]
    lengths = np.concatenate([lengths, lengths[dup]])[:20]
    return Dictionary(sigma, masks, lengths)


def query_lengths(d: Dictionary, cap: int = 1 << 16) -> list[int]:
    """Query lengths with sigma**length <= cap, up to one past the longest string."""
    out = []
    for length in range(d.max_length + 2):
        if d.sigma**length > cap:
            break
        out.append(length)
    return out
