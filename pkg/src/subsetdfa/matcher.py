"""Queries, exact counting, histograms and the brute-force oracles.

Transition lookup is O(1): each state keeps a bit mask of its outgoing
symbols, and the popcount of the bits below symbol ``c`` is the slot of
that edge inside the state's sorted transition row.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from typing import Sequence

import numpy as np

from .core import MINIMAL, Automaton, Dictionary, csr_gather, segment_sum
from .minimizer import state_heights


class QueryError(ValueError):
    """Query symbol outside the alphabet."""


def _check_query(p: Sequence[int], sigma: int) -> None:
    for j, c in enumerate(p):
        if not 0 <= c < sigma:
            raise QueryError(f"symbol {c} at position {j} outside alphabet of size {sigma}")


def delta_star(a: Automaton, u: int, w: Sequence[int]) -> int | None:
    """Follow ``w`` from state ``u``.

    Returns ``None`` on a missing edge.  Reaching a path-compressed leaf
    stops the walk early and returns the leaf; its depth tells how much of
    ``w`` was consumed.
    """
    out_mask, ptr, dst, leaf = a.out_mask, a.trans_ptr, a.trans_dst, a.leaf
    for c in w:
        if leaf[u] >= 0:
            return u
        m = int(out_mask[u])
        if not (m >> c) & 1:
            return None
        u = int(dst[ptr[u] + (m & ((1 << c) - 1)).bit_count()])
    return u


def _leaf_matches(d: Dictionary, sid: int, offset: int, p: Sequence[int], counter: Counter | None) -> bool:
    if len(p) != d.lengths[sid]:
        return False
    row = d.masks[sid]
    for j in range(offset, len(p)):
        if counter is not None:
            counter["leaf_checks"] += 1
        if not (int(row[j]) >> p[j]) & 1:
            return False
    return True


def match_retrieve(a: Automaton, p: Sequence[int], counter: Counter | None = None) -> list[int]:
    """Ids of the dictionary strings matching ``p``, ascending.

    ``counter``, if given, is incremented with the number of transitions
    taken (``"transitions"``) and leaf-suffix positions compared
    (``"leaf_checks"``).
    """
    if a.kind == MINIMAL:
        raise ValueError("minimal automata answer membership only")
    p = [int(c) for c in p]
    _check_query(p, a.sigma)
    u = a.root
    out_mask, ptr, dst, leaf = a.out_mask, a.trans_ptr, a.trans_dst, a.leaf
    for c in p:
        if leaf[u] >= 0:
            break
        m = int(out_mask[u])
        if not (m >> c) & 1:
            return []
        u = int(dst[ptr[u] + (m & ((1 << c) - 1)).bit_count()])
        if counter is not None:
            counter["transitions"] += 1
    sid = int(leaf[u])
    if sid >= 0:
        ok = _leaf_matches(a.require_dictionary(), sid, int(a.depth[u]), p, counter)
        return [sid] if ok else []
    return [int(i) for i in a.acc_ids[a.acc_ptr[u] : a.acc_ptr[u + 1]]]


def match_membership(a: Automaton, p: Sequence[int]) -> bool:
    """Whether ``p`` matches some dictionary string."""
    if a.kind != MINIMAL:
        return bool(match_retrieve(a, p))
    p = [int(c) for c in p]
    _check_query(p, a.sigma)
    u = delta_star(a, a.root, p)
    return u is not None and bool(a.final[u])


def brute_force_match(d: Dictionary, p: Sequence[int]) -> list[int]:
    """Definitional scan: ids ``i`` with ``|p| = |d_i|`` and ``p[j] in d_i[j]``."""
    p = [int(c) for c in p]
    out = []
    for i in range(d.n):
        if d.lengths[i] != len(p):
            continue
        row = d.masks[i]
        if all((int(row[j]) >> c) & 1 for j, c in enumerate(p)):
            out.append(i)
    return out


# -- batched queries ----------------------------------------------------------


def _run_batch(a: Automaton, queries: np.ndarray):
    """Walk all equal-length queries together.

    Returns ``(alive, state, leaf_sid)``; ``leaf_sid`` is the compressed
    leaf a query ended in (or -1), and ``alive`` already includes the leaf
    suffix check and the length check for leaves.
    """
    q, length = queries.shape
    if np.any(queries < 0) or np.any(queries >= a.sigma):
        raise QueryError(f"query symbol outside alphabet of size {a.sigma}")
    out_mask, ptr, dst, leaf = a.out_mask, a.trans_ptr, a.trans_dst, a.leaf
    state = np.zeros(q, dtype=np.int64)
    alive = np.ones(q, dtype=bool)
    in_leaf = np.zeros(q, dtype=bool)
    one = np.uint64(1)
    d = a.dictionary if a.pc else None
    if a.pc:
        a.require_dictionary()
    for j in range(length):
        idx = np.flatnonzero(alive & ~in_leaf)
        if a.pc:
            at_leaf = leaf[state[idx]] >= 0
            in_leaf[idx[at_leaf]] = True
            idx = idx[~at_leaf]
        c = queries[idx, j].astype(np.uint64)
        m = out_mask[state[idx]]
        has = ((m >> c) & one).astype(bool)
        alive[idx[~has]] = False
        idx, c, m = idx[has], c[has], m[has]
        rank = np.bitwise_count(m & ((one << c) - one)).astype(np.int64)
        state[idx] = dst[ptr[state[idx]] + rank]
        if a.pc:
            lidx = np.flatnonzero(alive & in_leaf)
            if lidx.size:
                sid = leaf[state[lidx]]
                inside = d.lengths[sid] > j
                col = d.masks[sid, min(j, d.max_length - 1)] if d.max_length else np.zeros(sid.shape, np.uint64)
                bit = (col >> queries[lidx, j].astype(np.uint64)) & one
                alive[lidx[~(inside & bit.astype(bool))]] = False
    leaf_sid = np.full(q, -1, dtype=np.int64)
    if a.pc:
        leaf_sid = np.where(alive, leaf[state], -1).astype(np.int64)
        hit = np.flatnonzero(leaf_sid >= 0)
        alive[hit[d.lengths[leaf_sid[hit]] != length]] = False
        leaf_sid[~alive] = -1
    return alive, state, leaf_sid


def match_membership_many(a: Automaton, queries: np.ndarray) -> np.ndarray:
    """Vectorized :func:`match_membership` for a ``(q, length)`` array."""
    queries = np.asarray(queries, dtype=np.int64)
    alive, state, leaf_sid = _run_batch(a, queries)
    return alive & ((leaf_sid >= 0) | a.final[state])


def match_retrieve_many(a: Automaton, queries: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`match_retrieve`; answers in compressed-row form.

    Returns ``(ptr, ids)`` where query ``k`` matched ``ids[ptr[k]:ptr[k+1]]``.
    """
    if a.kind == MINIMAL:
        raise ValueError("minimal automata answer membership only")
    queries = np.asarray(queries, dtype=np.int64)
    q = queries.shape[0]
    alive, state, leaf_sid = _run_batch(a, queries)
    plain = np.flatnonzero(alive & (leaf_sid < 0))
    sub_ptr, acc = csr_gather(a.acc_ptr, a.acc_ids, state[plain])
    counts = np.zeros(q, dtype=np.int64)
    counts[plain] = np.diff(sub_ptr)
    hits = leaf_sid >= 0
    counts[hits] = 1
    ptr = np.zeros(q + 1, dtype=np.int64)
    np.cumsum(counts, out=ptr[1:])
    ids = np.empty(ptr[-1], dtype=np.int64)
    starts = ptr[plain]
    ids[np.repeat(starts - sub_ptr[:-1], np.diff(sub_ptr)) + np.arange(sub_ptr[-1])] = acc
    ids[ptr[np.flatnonzero(hits)]] = leaf_sid[hits]
    return ptr, ids


def brute_force_match_many(d: Dictionary, queries: np.ndarray) -> np.ndarray:
    """``(q, n)`` boolean matrix of which strings each query matches."""
    queries = np.asarray(queries, dtype=np.int64)
    q, length = queries.shape
    out = np.zeros((q, d.n), dtype=bool)
    rows = np.flatnonzero(d.lengths == length)
    if not rows.size:
        return out
    ok = np.ones((q, rows.size), dtype=bool)
    one = np.uint64(1)
    for j in range(length):
        col = d.masks[rows, j]
        ok &= ((col[None, :] >> queries[:, j, None].astype(np.uint64)) & one).astype(bool)
    out[:, rows] = ok
    return out


def all_strings(sigma: int, length: int) -> np.ndarray:
    """Every string of ``length`` symbols as a ``(sigma**length, length)`` array."""
    if length == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((sigma,) * length).reshape(length, -1).T
    return np.ascontiguousarray(grids, dtype=np.int64)


# -- expansion and counting ---------------------------------------------------


def expansion_size(d: Dictionary) -> int:
    """Number of simple strings generated by expanding every string (with repeats)."""
    sizes = np.bitwise_count(d.masks).astype(object)
    total = 0
    for i in range(d.n):
        total += math.prod(sizes[i, : d.lengths[i]])
    return total


def _expanded_codes(d: Dictionary, budget: int) -> dict[int, np.ndarray]:
    need = expansion_size(d)
    if need > budget:
        raise ValueError(f"expansion of {need} strings exceeds budget {budget}; count with count_accepted_strings")
    by_length: dict[int, list[np.ndarray]] = {}
    sigma = d.sigma
    for i in range(d.n):
        length = int(d.lengths[i])
        if sigma**length >= 1 << 62:
            raise ValueError("strings too long to encode; use count_accepted_strings")
        codes = np.zeros(1, dtype=np.int64)
        for j in range(length):
            syms = np.flatnonzero((int(d.masks[i, j]) >> np.arange(sigma)) & 1)
            codes = (codes[:, None] * sigma + syms[None, :]).ravel()
        by_length.setdefault(length, []).append(codes)
    return {k: np.unique(np.concatenate(v)) for k, v in by_length.items()}


def enumerate_dprime(d: Dictionary, budget: int = 1 << 22) -> set[tuple[int, ...]]:
    """The deduplicated set of simple strings matching some dictionary string."""
    out: set[tuple[int, ...]] = set()
    for length, codes in _expanded_codes(d, budget).items():
        digits = np.empty((codes.shape[0], length), dtype=np.int64)
        rest = codes.copy()
        for j in range(length - 1, -1, -1):
            digits[:, j] = rest % d.sigma
            rest //= d.sigma
        out.update(map(tuple, digits.tolist()))
    return out


def dprime_size(d: Dictionary, budget: int = 1 << 24) -> int:
    """``len(enumerate_dprime(d))`` without materializing the tuples."""
    return sum(int(c.shape[0]) for c in _expanded_codes(d, budget).values())


def _leaf_suffix_products(a: Automaton, dtype) -> np.ndarray:
    """Number of simple strings spelled by each state's leaf suffix (0 if none)."""
    out = np.zeros(a.num_states, dtype=dtype)
    leaves = np.flatnonzero(a.leaf >= 0)
    if not leaves.size:
        return out
    d = a.require_dictionary()
    sizes = np.bitwise_count(d.masks).astype(np.int64)
    sizes[sizes == 0] = 1  # padding
    sid, off = a.leaf[leaves], a.depth[leaves]
    if dtype is not object:
        # entries left of every leaf offset may wrap in int64; they are never read
        suffix = np.ones((d.n, d.max_length + 1), dtype=dtype)
        suffix[:, :-1] = np.cumprod(sizes[:, ::-1].astype(dtype), axis=1)[:, ::-1]
        out[leaves] = suffix[sid, off]
        return out
    cache: dict[tuple[int, int], int] = {}
    for u, i, o in zip(leaves.tolist(), sid.tolist(), off.tolist()):
        if (i, o) not in cache:
            cache[i, o] = math.prod(int(x) for x in sizes[i, o : d.lengths[i]])
        out[u] = cache[i, o]
    return out


def _levels(a: Automaton):
    """Index groups in an order where every edge target comes earlier."""
    if a.kind != MINIMAL:
        bounds = a.depth_levels()
        for lvl in range(bounds.shape[0] - 2, -1, -1):
            yield np.arange(bounds[lvl], bounds[lvl + 1])
        return
    height = state_heights(a)
    order = np.argsort(height, kind="stable")
    cuts = np.searchsorted(height[order], np.arange(int(height.max()) + 2))
    for h in range(cuts.shape[0] - 1):
        yield order[cuts[h] : cuts[h + 1]]


def _right_language_sizes(a: Automaton, dtype) -> np.ndarray:
    base = _leaf_suffix_products(a, dtype)
    base[(a.leaf < 0) & a.final] = 1
    lang = np.zeros(a.num_states, dtype=dtype)
    for idx in _levels(a):
        ptr, dst = csr_gather(a.trans_ptr, a.trans_dst, idx)
        lang[idx] = base[idx] + segment_sum(lang[dst].astype(dtype), ptr)
    return lang


def count_accepted_strings(a: Automaton) -> int:
    """Exact number of accepted simple strings (the size of D' for built automata).

    Counts right-language sizes bottom-up.  A float pass bounds the result
    first; machine integers are used when that bound is safely below 2**62,
    unbounded Python integers otherwise.
    """
    approx = _right_language_sizes(a, np.float64)
    if approx.max(initial=0.0) < 2.0**62:
        return int(_right_language_sizes(a, np.int64)[a.root])
    return int(_right_language_sizes(a, object)[a.root])


def depth_histogram(a: Automaton) -> list[tuple[int, int]]:
    """``(depth, number of states)`` for every depth from 0 to the maximum."""
    counts = np.bincount(a.depth.astype(np.int64))
    return [(k, int(c)) for k, c in enumerate(counts)]


def words(sigma: int, max_len: int):
    """All strings of length <= ``max_len`` in length-lexicographic order."""
    for k in range(max_len + 1):
        yield from itertools.product(range(sigma), repeat=k)
