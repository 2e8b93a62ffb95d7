"""Direct breadth-first construction of trie and pseudo-minimal automata.

The dictionary is expanded one depth level at a time.  Every state carries
the list of dictionary ids whose prefix matches the state's path string;
a state's children are obtained by partitioning that list on the subset at
the current position.  In pseudo-minimal mode two children at the same
depth with the same id list are the same state, so they are merged through
a per-depth registry instead of being created twice.  With leaf path
compression a child whose list has a single id is never expanded: it keeps
a reference to the remaining suffix of that dictionary string.

Two engines produce identical automata (same state numbering):

``reference``
    a literal queue-driven loop over :func:`partition` and :class:`Registry`,
    meant for small inputs and for cross-checking;
``vectorized``
    processes a whole BFS level with numpy array operations and handles the
    million-state instances.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Callable, Sequence

import numpy as np

from .core import (
    PSEUDO_MINIMAL,
    TRIE,
    Automaton,
    Dictionary,
    EquivKey,
    canonical_kind,
    csr_gather,
    segment_sum,
    symbols_of,
    validate_dictionary,
)


class BuildBudgetExceeded(RuntimeError):
    """The build outgrew its state budget (or ran out of memory)."""

    def __init__(self, depth: int, states: int | None = None):
        self.depth = depth
        self.states = states
        detail = f" with {states} states" if states is not None else ""
        super().__init__(f"state budget exceeded at depth {depth}{detail}")


# -- reference engine ---------------------------------------------------------


def partition(d: Dictionary, lp: Sequence[int], depth: int) -> tuple[list[int], list[list[int]]]:
    """Split an id list on the subsets at position ``depth``.

    Returns ``(ended, children)``: the ids whose string has no position
    ``depth`` and, for each symbol ``c``, the ids whose subset at ``depth``
    contains ``c``.  Input order is preserved, so sorted input gives sorted
    output.
    """
    ended: list[int] = []
    children: list[list[int]] = [[] for _ in range(d.sigma)]
    lengths = d.lengths
    column = d.masks[:, depth] if depth < d.max_length else None
    for k in lp:
        if lengths[k] <= depth:
            ended.append(k)
        else:
            for c in symbols_of(column[k]):
                children[c].append(k)
    return ended, children


class Registry:
    """Per-depth map from id list to its representative state."""

    def __init__(self) -> None:
        self.per_depth: dict[int, dict[tuple[int, ...], int]] = {}
        self.insertions = 0
        self.hits = 0

    def lookup_or_insert(self, key: EquivKey, candidate: int) -> tuple[int, bool]:
        if not key.ids:
            raise ValueError("registry keys must have a non-empty id list")
        bucket = self.per_depth.setdefault(key.depth, {})
        found = bucket.get(key.ids)
        if found is not None:
            self.hits += 1
            return found, False
        bucket[key.ids] = candidate
        self.insertions += 1
        return candidate, True

    def __len__(self) -> int:
        return self.insertions


OnState = Callable[[int, int, tuple], None]


def _build_reference(
    d: Dictionary, kind: str, pc: bool, max_states: int | None, on_state: OnState | None
) -> Automaton:
    merge = kind == PSEUDO_MINIMAL
    registry = Registry()
    depth = [0]
    leaf = [-1]
    accept: list[list[int]] = [[]]
    trans: list[list[tuple[int, int]]] = [[]]
    pending = {0: tuple(range(d.n))}
    if on_state:
        on_state(0, 0, pending[0])
    queue = deque([0])
    list_total = 0
    while queue:
        u = queue.popleft()
        lp = pending.pop(u)
        list_total += len(lp)
        ended, children = partition(d, lp, depth[u])
        accept[u] = ended
        for c, ids in enumerate(children):
            if not ids:
                continue
            ids = tuple(ids)
            candidate = len(depth)
            if merge:
                v, created = registry.lookup_or_insert(EquivKey(depth[u] + 1, ids), candidate)
            else:
                v, created = candidate, True
            if created:
                if max_states is not None and candidate + 1 > max_states:
                    raise BuildBudgetExceeded(depth[u] + 1, candidate + 1)
                depth.append(depth[u] + 1)
                trans.append([])
                if on_state:
                    on_state(v, depth[v], ids)
                if pc and len(ids) == 1:
                    # compressed leaf: never expanded, accepts only if the string ends here
                    sid = ids[0]
                    leaf.append(sid)
                    accept.append([sid] if d.lengths[sid] == depth[v] else [])
                else:
                    leaf.append(-1)
                    accept.append([])
                    pending[v] = ids
                    queue.append(v)
            trans[u].append((c, v))

    s = len(depth)
    trans_ptr = np.zeros(s + 1, dtype=np.int64)
    np.cumsum([len(t) for t in trans], out=trans_ptr[1:])
    acc_ptr = np.zeros(s + 1, dtype=np.int64)
    np.cumsum([len(a) for a in accept], out=acc_ptr[1:])
    return Automaton(
        sigma=d.sigma,
        kind=kind,
        pc=pc,
        depth=np.asarray(depth, dtype=np.int32),
        final=np.asarray([len(a) > 0 for a in accept], dtype=bool),
        trans_ptr=trans_ptr,
        trans_sym=np.asarray([c for t in trans for c, _ in t], dtype=np.uint8),
        trans_dst=np.asarray([v for t in trans for _, v in t], dtype=np.int32),
        acc_ptr=acc_ptr,
        acc_ids=np.asarray([i for a in accept for i in a], dtype=np.int64),
        leaf=np.asarray(leaf, dtype=np.int32),
        dictionary=d,
        build_stats={
            "engine": "reference",
            "registry_insertions": registry.insertions,
            "registry_hits": registry.hits,
            "list_total": list_total,
        },
    )


# -- vectorized engine --------------------------------------------------------

_K1 = np.uint64(0x243F6A8885A308D3)
_K2 = np.uint64(0x13198A2E03707344)


def _mix64(x: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer
    z = x + np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def first_equal_rows(ptr: np.ndarray, values: np.ndarray, tag: np.ndarray | None = None) -> np.ndarray:
    """For each row of a compressed-row array, the index of the first equal row.

    Rows compare equal when their value sequences (and ``tag``, if given)
    are identical.  Candidates are grouped by a 128-bit hash and then
    verified element by element; on a hash collision the level falls back
    to an exact dictionary-based pass.
    """
    g = ptr.shape[0] - 1
    if g == 0:
        return np.zeros(0, dtype=np.int64)
    lens = np.diff(ptr)
    v = values.astype(np.uint64)
    with np.errstate(over="ignore"):
        h1 = segment_sum(_mix64(v ^ _K1), ptr)
        h2 = segment_sum(_mix64(v ^ _K2), ptr)
    keys = [h2, h1, lens] if tag is None else [h2, h1, lens, tag]
    order = np.lexsort(keys)
    new_block = np.zeros(g, dtype=bool)
    new_block[0] = True
    for k in keys:
        ks = k[order]
        new_block[1:] |= ks[1:] != ks[:-1]
    block = np.cumsum(new_block) - 1
    rep = np.empty(g, dtype=np.int64)
    rep[order] = order[new_block][block]
    dup = np.flatnonzero(rep != np.arange(g))
    if dup.size:
        _, a = csr_gather(ptr, values, dup)
        _, b = csr_gather(ptr, values, rep[dup])
        if not np.array_equal(a, b):
            return _first_equal_rows_exact(ptr, values, tag)
    return rep


def _first_equal_rows_exact(ptr, values, tag):
    seen: dict = {}
    rep = np.empty(ptr.shape[0] - 1, dtype=np.int64)
    for r in range(rep.shape[0]):
        key = (None if tag is None else int(tag[r]), values[ptr[r] : ptr[r + 1]].tobytes())
        rep[r] = seen.setdefault(key, r)
    return rep


def expand_bits(masks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row index and symbol of every set bit, in (row, symbol) order."""
    cnt = np.bitwise_count(masks).astype(np.int64)
    ptr = np.zeros(masks.shape[0] + 1, dtype=np.int64)
    np.cumsum(cnt, out=ptr[1:])
    rows = np.repeat(np.arange(masks.shape[0]), cnt)
    syms = np.empty(ptr[-1], dtype=np.int64)
    m = masks.astype(np.uint64)
    pos = ptr[:-1]
    one = np.uint64(1)
    while m.size:
        low = m & (~m + one)
        syms[pos] = np.bitwise_count(low - one)
        m = m ^ low
        pos = pos + 1
        keep = m != 0
        m, pos = m[keep], pos[keep]
    return rows, syms


def _build_vectorized(d: Dictionary, kind: str, pc: bool, max_states: int | None) -> Automaton:
    sigma, n = d.sigma, d.n
    masks, lengths = d.masks, d.lengths
    merge = kind == PSEUDO_MINIMAL

    # frontier = all states of the current depth, as (ptr, ids) plus leaf refs
    f_ptr = np.array([0, n], dtype=np.int64)
    f_ids = np.arange(n, dtype=np.int64)
    f_leaf = np.full(1, -1, dtype=np.int32)
    total = 1
    depth = 0
    hits = 0
    list_total = 0
    out: dict[str, list[np.ndarray]] = {k: [] for k in ("depth", "acc_cnt", "acc_ids", "t_cnt", "sym", "dst", "leaf")}
    try:
        while f_leaf.shape[0]:
            k = f_leaf.shape[0]
            list_total += int(np.diff(f_ptr)[f_leaf < 0].sum())
            fi = np.repeat(np.arange(k), np.diff(f_ptr))
            ended = lengths[f_ids] <= depth
            acc_cnt = np.bincount(fi[ended], minlength=k)
            live = ~ended
            if pc:
                live &= f_leaf[fi] < 0
            fl, il = fi[live], f_ids[live]
            rows, syms = expand_bits(masks[il, depth]) if il.size else (fl, fl)
            gkey = fl[rows] * sigma + syms
            order = np.argsort(gkey, kind="stable")
            gkey = gkey[order]
            gid = il[rows][order]
            if gkey.size:
                g_ptr = np.concatenate(([0], np.flatnonzero(np.diff(gkey)) + 1, [gkey.size]))
            else:
                g_ptr = np.zeros(1, dtype=np.int64)
            g_key = gkey[g_ptr[:-1]]
            ngroups = g_key.shape[0]
            rep = first_equal_rows(g_ptr, gid) if merge else np.arange(ngroups)
            fresh = np.flatnonzero(rep == np.arange(ngroups))
            slot = np.empty(ngroups, dtype=np.int64)
            slot[fresh] = np.arange(fresh.shape[0])
            hits += ngroups - fresh.shape[0]

            out["depth"].append(np.full(k, depth, dtype=np.int32))
            out["acc_cnt"].append(acc_cnt.astype(np.int32))
            out["acc_ids"].append(f_ids[ended])
            out["t_cnt"].append(np.bincount(g_key // sigma, minlength=k).astype(np.uint8))
            out["sym"].append((g_key % sigma).astype(np.uint8))
            out["dst"].append((total + slot[rep]).astype(np.int32))
            out["leaf"].append(f_leaf)

            f_ptr, f_ids = csr_gather(g_ptr, gid, fresh)
            f_leaf = np.full(fresh.shape[0], -1, dtype=np.int32)
            if pc:
                single = np.diff(f_ptr) == 1
                f_leaf[single] = f_ids[f_ptr[:-1][single]]
            total += fresh.shape[0]
            depth += 1
            if max_states is not None and total > max_states:
                raise BuildBudgetExceeded(depth, total)
    except MemoryError:
        raise BuildBudgetExceeded(depth) from None

    def cat(name, dtype):
        parts = out.pop(name)
        return np.concatenate(parts).astype(dtype, copy=False) if parts else np.zeros(0, dtype=dtype)

    acc_cnt = cat("acc_cnt", np.int32)
    acc_ptr = np.zeros(total + 1, dtype=np.int64)
    np.cumsum(acc_cnt, dtype=np.int64, out=acc_ptr[1:])
    trans_ptr = np.zeros(total + 1, dtype=np.int64)
    np.cumsum(cat("t_cnt", np.uint8), dtype=np.int64, out=trans_ptr[1:])
    return Automaton(
        sigma=sigma,
        kind=kind,
        pc=pc,
        depth=cat("depth", np.int32),
        final=acc_cnt > 0,
        trans_ptr=trans_ptr,
        trans_sym=cat("sym", np.uint8),
        trans_dst=cat("dst", np.int32),
        acc_ptr=acc_ptr,
        acc_ids=cat("acc_ids", np.int64),
        leaf=cat("leaf", np.int32),
        dictionary=d,
        build_stats={
            "engine": "vectorized",
            "registry_insertions": total - 1 if merge else 0,
            "registry_hits": hits,
            "list_total": list_total,
        },
    )


def build_automaton(
    d: Dictionary,
    kind: str = PSEUDO_MINIMAL,
    pc: bool = False,
    *,
    engine: str = "vectorized",
    max_states: int | None = None,
    on_state: OnState | None = None,
) -> Automaton:
    """Build the trie (``kind="trie"``) or pseudo-minimal (``"pm"``) automaton.

    Parameters
    ----------
    d : Dictionary
        Validated before building; :class:`~subsetdfa.core.DictionaryError`
        propagates.
    kind : str
        ``"trie"`` creates a fresh state for every child; ``"pm"`` merges
        children with equal depth and id list.  Minimal automata come from
        :func:`subsetdfa.minimizer.minimize`.
    pc : bool
        Leaf path compression: children with a single id are not expanded.
    engine : str
        ``"vectorized"`` (default) or ``"reference"``.
    max_states : int, optional
        Abort with :class:`BuildBudgetExceeded` once the automaton grows
        past this many states.
    on_state : callable, optional
        Reference engine only; called as ``on_state(state, depth, ids)``
        with the build-time id list of every created state.
    """
    validate_dictionary(d)
    kind = canonical_kind(kind)
    if kind not in (TRIE, PSEUDO_MINIMAL):
        raise ValueError("minimal automata are produced by minimize(), not built directly")
    if engine == "reference":
        return _build_reference(d, kind, bool(pc), max_states, on_state)
    if engine != "vectorized":
        raise ValueError(f"unknown engine {engine!r}")
    if on_state is not None:
        raise ValueError("on_state is only supported by the reference engine")
    return _build_vectorized(d, kind, bool(pc), max_states)


def alpha_estimate(n: int, sigma: int, delta: float) -> float:
    """Depth ``log_{sigma/delta}(n)`` where id lists shrink to constant size.

    Returns ``inf`` when ``delta >= sigma`` (lists never shrink).
    """
    if delta <= 0:
        raise ValueError("average subset size must be positive")
    if n < 1:
        raise ValueError("n must be at least 1")
    if delta >= sigma:
        return math.inf
    return math.log(n) / math.log(sigma / delta)

