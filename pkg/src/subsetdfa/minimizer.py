"""Minimal DFA from an uncompressed trie or pseudo-minimal automaton.

The input is acyclic, so states can be canonicalized bottom-up: a state's
height (longest path to a sink) is smaller than that of any predecessor,
and two states of equal height are language-equivalent exactly when they
agree on finality and on their (symbol, target class) lists.  Processing
heights in ascending order therefore assigns every target its class
before any of its predecessors is looked at.  Per-string accept lists do
not survive the merge; the result answers membership only.
"""

from __future__ import annotations

import itertools

import numpy as np

from .builder import first_equal_rows
from .core import MINIMAL, Automaton, csr_gather


def _segment_max(values: np.ndarray, ptr: np.ndarray, empty: int) -> np.ndarray:
    out = np.full(ptr.shape[0] - 1, empty, dtype=values.dtype if values.size else np.int64)
    nonempty = np.flatnonzero(np.diff(ptr) > 0)
    if nonempty.size:
        out[nonempty] = np.maximum.reduceat(values, ptr[:-1][nonempty])
    return out


def state_heights(a: Automaton) -> np.ndarray:
    """Length of the longest path from each state to a state without edges."""
    s = a.num_states
    height = np.zeros(s, dtype=np.int64)
    if a.kind != MINIMAL:
        bounds = a.depth_levels()
        for d in range(bounds.shape[0] - 2, -1, -1):
            lo, hi = bounds[d], bounds[d + 1]
            ptr = a.trans_ptr[lo : hi + 1] - a.trans_ptr[lo]
            dst = a.trans_dst[a.trans_ptr[lo] : a.trans_ptr[hi]]
            height[lo:hi] = _segment_max(height[dst] + 1, ptr, 0)
        return height
    # no level structure: relax until stable, at most (max height + 1) rounds
    while True:
        new = _segment_max(height[a.trans_dst] + 1, a.trans_ptr, 0)
        if np.array_equal(new, height):
            return height
        height = new


def minimize(a: Automaton) -> Automaton:
    """Merge all language-equivalent states of an uncompressed automaton.

    The result has ``kind="min"``; its states are numbered by decreasing
    height (root first), ties broken by the lowest merged input id, so every
    transition still points to a larger id.
    """
    if a.pc:
        raise ValueError("minimization requires uncompressed input")
    if a.kind == MINIMAL:
        raise ValueError("automaton is already minimal")
    s = a.num_states
    height = state_heights(a)
    by_height = np.argsort(height, kind="stable")
    cuts = np.searchsorted(height[by_height], np.arange(int(height.max()) + 2))

    cls = np.empty(s, dtype=np.int64)
    rep_state: list[np.ndarray] = []
    rep_height: list[np.ndarray] = []
    n_classes = 0
    for h in range(cuts.shape[0] - 1):
        idx = by_height[cuts[h] : cuts[h + 1]]
        if not idx.size:
            continue
        ptr, dst = csr_gather(a.trans_ptr, a.trans_dst, idx)
        _, sym = csr_gather(a.trans_ptr, a.trans_sym, idx)
        codes = sym.astype(np.int64) * s + cls[dst]
        rep = first_equal_rows(ptr, codes, tag=a.final[idx].astype(np.int64))
        fresh = np.flatnonzero(rep == np.arange(idx.shape[0]))
        slot = np.empty(idx.shape[0], dtype=np.int64)
        slot[fresh] = n_classes + np.arange(fresh.shape[0])
        cls[idx] = slot[rep]
        rep_state.append(idx[fresh])
        rep_height.append(np.full(fresh.shape[0], h))
        n_classes += fresh.shape[0]

    reps = np.concatenate(rep_state)
    heights = np.concatenate(rep_height)
    order = np.lexsort((reps, -heights))
    new_id = np.empty(n_classes, dtype=np.int64)
    new_id[order] = np.arange(n_classes)
    reps = reps[order]

    trans_ptr, dst = csr_gather(a.trans_ptr, a.trans_dst, reps)
    _, sym = csr_gather(a.trans_ptr, a.trans_sym, reps)
    depth = np.full(n_classes, np.iinfo(np.int32).max, dtype=np.int32)
    np.minimum.at(depth, new_id[cls], a.depth)
    return Automaton(
        sigma=a.sigma,
        kind=MINIMAL,
        pc=False,
        depth=depth,
        final=a.final[reps].copy(),
        trans_ptr=trans_ptr,
        trans_sym=sym,
        trans_dst=new_id[cls[dst]].astype(np.int32),
        acc_ptr=np.zeros(n_classes + 1, dtype=np.int64),
        acc_ids=np.zeros(0, dtype=np.int64),
        leaf=np.full(n_classes, -1, dtype=np.int32),
        build_stats={"source_states": s},
    )


def accepted_strings(a: Automaton, max_len: int, budget: int = 1 << 20) -> set[tuple[int, ...]]:
    """All accepted strings of length <= ``max_len``, by walking every word."""
    from .matcher import match_membership

    total = sum(a.sigma**k for k in range(max_len + 1))
    if total > budget:
        raise ValueError(f"enumeration of {total} strings exceeds budget {budget}")
    out = set()
    for k in range(max_len + 1):
        for w in itertools.product(range(a.sigma), repeat=k):
            if match_membership(a, w):
                out.add(w)
    return out


def equivalent_languages(a: Automaton, b: Automaton, sigma: int, max_len: int, budget: int = 1 << 20) -> bool:
    """Whether ``a`` and ``b`` accept the same strings up to length ``max_len``."""
    if a.sigma != sigma or b.sigma != sigma:
        raise ValueError("automata are over a different alphabet")
    return accepted_strings(a, max_len, budget) == accepted_strings(b, max_len, budget)
