"""Seeded random dictionaries.

All generators draw from ``numpy.random.Generator(PCG64(seed))`` in a fixed
order, so the same parameters and seed give the same dictionary on every
run and platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import MAX_SIGMA, Dictionary

# rows of random keys drawn per batch when sampling subsets
_CHUNK = 1 << 16


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _check_sigma(sigma: int) -> None:
    if not 1 <= sigma <= MAX_SIGMA:
        raise ValueError(f"sigma must be in 1..{MAX_SIGMA}")


@dataclass(frozen=True)
class InstanceParams:
    """``(m, n, sigma, (delta_low, delta_high), f)`` plus the seed."""

    m: int
    n: int
    sigma: int
    delta_low: int
    delta_high: int
    f: float
    seed: int = 0

    def __post_init__(self):
        _check_sigma(self.sigma)
        if self.m < 0 or self.n < 0:
            raise ValueError("m and n must be non-negative")
        if not 1 <= self.delta_low <= self.delta_high <= self.sigma:
            raise ValueError("need 1 <= delta_low <= delta_high <= sigma")
        if not 0.0 <= self.f <= 1.0:
            raise ValueError("f must be a probability")

    @property
    def expected_delta(self) -> float:
        """Mean subset size ``f*(lo+hi)/2 + (1-f)``."""
        return self.f * (self.delta_low + self.delta_high) / 2 + (1 - self.f)

    def label(self) -> str:
        return f"({self.m},{self.n},{self.sigma},({self.delta_low},{self.delta_high}),{self.f:g})"


def random_subsets(rng: np.random.Generator, sizes: np.ndarray, sigma: int) -> np.ndarray:
    """Uniform subsets of ``0..sigma-1`` with the given sizes, as uint64 masks.

    Each row draws ``sigma`` uniform keys; the symbols holding the ``k``
    smallest keys form the subset (a partial random permutation).
    """
    out = np.empty(sizes.shape[0], dtype=np.uint64)
    bits = np.uint64(1) << np.arange(sigma, dtype=np.uint64)
    for lo in range(0, sizes.shape[0], _CHUNK):
        k = sizes[lo : lo + _CHUNK]
        keys = rng.random((k.shape[0], sigma))
        rank = np.argsort(np.argsort(keys, axis=1), axis=1)
        chosen = rank < k[:, None]
        out[lo : lo + _CHUNK] = np.bitwise_or.reduce(np.where(chosen, bits, np.uint64(0)), axis=1)
    return out


def generate_instance(params: InstanceParams) -> Dictionary:
    """``n`` strings of length ``m``; each position independently is a subset
    with probability ``f`` (size uniform in ``[delta_low, delta_high]``) and a
    single uniform symbol otherwise."""
    p = params
    rng = _rng(p.seed)
    is_subset = rng.random((p.n, p.m)) < p.f
    single = rng.integers(0, p.sigma, size=(p.n, p.m))
    masks = np.uint64(1) << single.astype(np.uint64)
    count = int(np.count_nonzero(is_subset))
    sizes = rng.integers(p.delta_low, p.delta_high + 1, size=count)
    masks[is_subset] = random_subsets(rng, sizes, p.sigma)
    return Dictionary(p.sigma, masks, np.full(p.n, p.m, dtype=np.int64))


def delta_set(c: np.ndarray, delta: int, sigma: int) -> np.ndarray:
    """Masks of ``{c-delta, ..., c+delta}`` clamped to the alphabet."""
    c = np.asarray(c, dtype=np.int64)
    lo = np.maximum(c - delta, 0).astype(np.uint64)
    hi = np.minimum(c + delta, sigma - 1).astype(np.uint64)
    one = np.uint64(1)
    with np.errstate(over="ignore"):
        upto_hi = (np.uint64(2) << hi) - one
    return upto_hi ^ ((one << lo) - one)


def generate_delta_instance(m: int, n: int, sigma: int, delta: int, seed: int = 0) -> Dictionary:
    _check_sigma(sigma)
    if not 0 <= delta < sigma:
        raise ValueError("need 0 <= delta < sigma")
    if m < 0 or n < 0:
        raise ValueError("m and n must be non-negative")
    rng = _rng(seed)
    centers = rng.integers(0, sigma, size=(n, m))
    return Dictionary(sigma, delta_set(centers, delta, sigma), np.full(n, m, dtype=np.int64))


def generate_wildcard_instance(m: int, n: int, sigma: int, k: int, seed: int = 0) -> Dictionary:
    """Exactly ``k`` full-alphabet positions per string, singletons elsewhere."""
    _check_sigma(sigma)
    if not 0 <= k <= m:
        raise ValueError("need 0 <= k <= m")
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = _rng(seed)
    single = rng.integers(0, sigma, size=(n, m))
    masks = np.uint64(1) << single.astype(np.uint64)
    rank = np.argsort(np.argsort(rng.random((n, m)), axis=1), axis=1)
    full = np.uint64((1 << sigma) - 1)
    masks[rank < k] = full
    return Dictionary(sigma, masks, np.full(n, m, dtype=np.int64))


def mean_subset_size(d: Dictionary) -> float:
    sizes = d.subset_sizes()
    return float(sizes.mean()) if sizes.size else 0.0
