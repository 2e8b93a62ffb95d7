"""Shared domain types: symbol subsets, dictionaries of subset-strings, automata.

Symbols are small integers ``0 .. sigma-1``.  A subset of the alphabet is a
bit mask (bit ``c`` set means symbol ``c`` is present), so ``sigma`` is capped
at :data:`MAX_SIGMA` bits to keep membership tests a single word operation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

MAX_SIGMA = 64

TRIE = "trie"
PSEUDO_MINIMAL = "pm"
MINIMAL = "min"
KINDS = (TRIE, PSEUDO_MINIMAL, MINIMAL)

_KIND_ALIASES = {
    "trie": TRIE,
    "pm": PSEUDO_MINIMAL,
    "pseudo-minimal": PSEUDO_MINIMAL,
    "min": MINIMAL,
    "minimal": MINIMAL,
}


def canonical_kind(kind: str) -> str:
    try:
        return _KIND_ALIASES[kind]
    except KeyError:
        raise ValueError(f"unknown automaton kind {kind!r}") from None


class DictionaryError(ValueError):
    """Raised when a dictionary violates its structural invariants."""


# -- symbol sets -------------------------------------------------------------


def symbol_set(symbols: Iterable[int]) -> int:
    """Return the bit mask holding ``symbols``."""
    mask = 0
    for c in symbols:
        c = int(c)
        if c < 0 or c >= MAX_SIGMA:
            raise DictionaryError(f"symbol out of range: {c}")
        mask |= 1 << c
    return mask


def symbols_of(mask: int) -> list[int]:
    """Ascending list of the symbols in ``mask``."""
    mask = int(mask)
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def full_mask(sigma: int) -> int:
    return (1 << sigma) - 1


# -- dictionary --------------------------------------------------------------


class Dictionary:
    """An ordered list of subset-strings over the alphabet ``0 .. sigma-1``.

    Strings are stored in a padded ``(n, width)`` array of uint64 masks with
    a separate length vector; padding cells are zero.  String identifiers
    are row positions, and duplicates are allowed.
    """

    __slots__ = ("sigma", "masks", "lengths")

    def __init__(self, sigma: int, masks: np.ndarray, lengths: np.ndarray):
        masks = np.asarray(masks, dtype=np.uint64)
        lengths = np.asarray(lengths, dtype=np.int64)
        if masks.ndim != 2 or masks.shape[0] != lengths.shape[0]:
            raise ValueError("masks must be (n, width) with one length per row")
        width = int(lengths.max()) if lengths.size else 0
        if masks.shape[1] < width:
            raise ValueError("mask array narrower than the longest string")
        self.sigma = int(sigma)
        self.masks = np.ascontiguousarray(masks[:, :width])
        self.lengths = lengths
        self.masks.setflags(write=False)
        self.lengths.setflags(write=False)

    @classmethod
    def from_masks(cls, sigma: int, strings: Sequence[Sequence[int]]) -> "Dictionary":
        n = len(strings)
        width = max((len(s) for s in strings), default=0)
        masks = np.zeros((n, width), dtype=np.uint64)
        lengths = np.zeros(n, dtype=np.int64)
        for i, s in enumerate(strings):
            lengths[i] = len(s)
            for j, m in enumerate(s):
                m = int(m)
                if m < 0 or m >> MAX_SIGMA:
                    raise DictionaryError(f"symbol out of range at ({i},{j})")
                masks[i, j] = m
        return cls(sigma, masks, lengths)

    @classmethod
    def from_sets(cls, sigma: int, strings: Iterable[Iterable[Iterable[int]]]) -> "Dictionary":
        """Build from nested iterables: strings -> positions -> symbols."""
        return cls.from_masks(sigma, [[symbol_set(pos) for pos in s] for s in strings])

    @property
    def n(self) -> int:
        return int(self.lengths.shape[0])

    @property
    def max_length(self) -> int:
        return int(self.masks.shape[1])

    def __len__(self) -> int:
        return self.n

    def string(self, i: int) -> tuple[int, ...]:
        return tuple(int(m) for m in self.masks[i, : self.lengths[i]])

    @property
    def strings(self) -> list[tuple[int, ...]]:
        return [self.string(i) for i in range(self.n)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dictionary):
            return NotImplemented
        return (
            self.sigma == other.sigma
            and np.array_equal(self.lengths, other.lengths)
            and np.array_equal(self.masks, other.masks)
        )

    def __repr__(self) -> str:
        return f"Dictionary(sigma={self.sigma}, n={self.n}, m={self.max_length})"

    def subset_sizes(self) -> np.ndarray:
        """Cardinality of every non-padding position, flattened."""
        valid = np.arange(self.max_length)[None, :] < self.lengths[:, None]
        return np.bitwise_count(self.masks[valid]).astype(np.int64)

    def permuted(self, order: Sequence[int]) -> "Dictionary":
        order = np.asarray(order, dtype=np.int64)
        return Dictionary(self.sigma, self.masks[order], self.lengths[order])


def validate_dictionary(d: Dictionary) -> None:
    """Raise :class:`DictionaryError` on the first invariant violation."""
    if d.sigma < 1:
        raise DictionaryError("sigma must be at least 1")
    if d.sigma > MAX_SIGMA:
        raise DictionaryError(f"sigma {d.sigma} exceeds the {MAX_SIGMA}-symbol cap")
    if d.n == 0:
        return
    valid = np.arange(d.max_length)[None, :] < d.lengths[:, None]
    if np.any(d.lengths < 0):
        raise DictionaryError("negative string length")
    empty = valid & (d.masks == 0)
    outside = valid & ((d.masks >> np.uint64(d.sigma)) != 0) if d.sigma < 64 else np.zeros_like(valid)
    bad = empty | outside
    if bad.any():
        i, j = (int(x) for x in np.argwhere(bad)[0])
        if empty[i, j]:
            raise DictionaryError(f"empty subset at ({i},{j})")
        raise DictionaryError(f"symbol out of range at ({i},{j})")


# -- automaton ---------------------------------------------------------------


class EquivKey(NamedTuple):
    """Pseudo-minimal equivalence class: equal depth and equal id list."""

    depth: int
    ids: tuple[int, ...]


class State(NamedTuple):
    id: int
    depth: int
    transitions: dict[int, int]
    accept: tuple[int, ...]
    leaf_ref: tuple[int, int] | None


@dataclass(eq=False)
class Automaton:
    """Acyclic DFA in compressed-row form.

    State ``u`` owns transitions ``trans_ptr[u]:trans_ptr[u+1]`` (sorted by
    symbol) and accept ids ``acc_ptr[u]:acc_ptr[u+1]`` (ascending).  A state
    with ``leaf[u] >= 0`` is a path-compressed leaf: the rest of dictionary
    string ``leaf[u]`` from offset ``depth[u]`` must be matched positionally.
    State ids are topologically ordered (every transition goes to a larger
    id); the root is state 0.

    For ``kind == "min"`` the accept lists are empty and only ``final`` is
    meaningful, and ``depth`` holds the shortest distance from the root.
    Path-compressed automata keep a reference to their source dictionary,
    which queries and counting need to finish leaf suffixes.
    """

    sigma: int
    kind: str
    pc: bool
    depth: np.ndarray
    final: np.ndarray
    trans_ptr: np.ndarray
    trans_sym: np.ndarray
    trans_dst: np.ndarray
    acc_ptr: np.ndarray
    acc_ids: np.ndarray
    leaf: np.ndarray
    dictionary: Dictionary | None = None
    build_stats: dict = field(default_factory=dict)

    root = 0

    @property
    def num_states(self) -> int:
        return int(self.depth.shape[0])

    def __len__(self) -> int:
        return self.num_states

    @property
    def num_transitions(self) -> int:
        return int(self.trans_dst.shape[0])

    @property
    def num_accepting(self) -> int:
        return int(np.count_nonzero(self.final))

    @property
    def supports_retrieval(self) -> bool:
        return self.kind != MINIMAL

    @cached_property
    def out_mask(self) -> np.ndarray:
        """Per-state bit mask of outgoing symbols; rank gives the edge slot."""
        out = np.zeros(self.num_states, dtype=np.uint64)
        if self.num_transitions:
            src = np.repeat(np.arange(self.num_states), np.diff(self.trans_ptr))
            np.bitwise_or.at(out, src, np.uint64(1) << self.trans_sym.astype(np.uint64))
        return out

    def transitions(self, u: int) -> dict[int, int]:
        lo, hi = self.trans_ptr[u], self.trans_ptr[u + 1]
        return {int(c): int(v) for c, v in zip(self.trans_sym[lo:hi], self.trans_dst[lo:hi])}

    def accept_list(self, u: int) -> tuple[int, ...]:
        if self.kind == MINIMAL:
            raise ValueError("minimal automata keep only accept flags")
        return tuple(int(i) for i in self.acc_ids[self.acc_ptr[u] : self.acc_ptr[u + 1]])

    def leaf_ref(self, u: int) -> tuple[int, int] | None:
        sid = int(self.leaf[u])
        return None if sid < 0 else (sid, int(self.depth[u]))

    def state(self, u: int) -> State:
        accept = () if self.kind == MINIMAL else self.accept_list(u)
        return State(u, int(self.depth[u]), self.transitions(u), accept, self.leaf_ref(u))

    def states(self):
        for u in range(self.num_states):
            yield self.state(u)

    def same_structure(self, other: "Automaton") -> bool:
        """State-for-state identity (ignores build statistics)."""
        names = ("depth", "final", "trans_ptr", "trans_sym", "trans_dst", "acc_ptr", "acc_ids", "leaf")
        return (
            self.sigma == other.sigma
            and self.kind == other.kind
            and self.pc == other.pc
            and all(np.array_equal(getattr(self, k), getattr(other, k)) for k in names)
        )

    def require_dictionary(self) -> Dictionary:
        if self.dictionary is None:
            raise ValueError("path-compressed automaton needs its source dictionary")
        return self.dictionary

    def depth_levels(self) -> np.ndarray:
        """Boundaries of the contiguous id range of each depth (trie/pm only)."""
        if self.kind == MINIMAL:
            raise ValueError("minimal automata are not depth-levelled")
        top = int(self.depth[-1])
        return np.searchsorted(self.depth, np.arange(top + 2), side="left")

    def check_invariants(self) -> None:
        """Raise ``AssertionError`` if a structural invariant is broken."""
        s = self.num_states
        assert s >= 1, "automaton has no root"
        assert self.depth[0] == 0, "root depth must be 0"
        assert self.trans_ptr.shape == (s + 1,) and self.trans_ptr[0] == 0
        assert self.trans_ptr[-1] == self.num_transitions
        assert np.all(np.diff(self.trans_ptr) >= 0)
        assert np.all(self.trans_sym < self.sigma)
        if self.kind != MINIMAL:
            assert np.all(np.diff(self.depth) >= 0), "states not numbered level by level"
        src = np.repeat(np.arange(s), np.diff(self.trans_ptr))
        if self.num_transitions:
            key = src * self.sigma + self.trans_sym.astype(np.int64)
            assert np.all(np.diff(key) > 0), "transitions not deterministic or unsorted"
            assert np.all(self.trans_dst > src), "ids not topologically ordered"
            assert np.all(self.trans_dst < s)
            if self.kind != MINIMAL:
                assert np.all(self.depth[self.trans_dst] == self.depth[src] + 1), "depth step"
        indeg = np.bincount(self.trans_dst, minlength=s)
        assert np.all(indeg[1:] > 0), "unreachable state"
        leaves = self.leaf >= 0
        assert np.all(np.diff(self.trans_ptr)[leaves] == 0), "leaf with transitions"
        if self.kind == MINIMAL:
            assert not self.pc and not leaves.any()
            assert self.acc_ids.size == 0
        else:
            counts = np.diff(self.acc_ptr)
            assert np.array_equal(counts > 0, self.final), "accept list / final mismatch"
            for u in np.flatnonzero(counts > 1)[:10000]:
                ids = self.acc_ids[self.acc_ptr[u] : self.acc_ptr[u + 1]]
                assert np.all(np.diff(ids) > 0), "accept list not strictly ascending"
        if not self.pc:
            assert not leaves.any()


def csr_gather(ptr: np.ndarray, values: np.ndarray, rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Gather rows of a compressed-row array; returns (new_ptr, new_values)."""
    rows = np.asarray(rows, dtype=np.int64)
    lens = ptr[rows + 1] - ptr[rows]
    new_ptr = np.zeros(rows.shape[0] + 1, dtype=np.int64)
    np.cumsum(lens, out=new_ptr[1:])
    idx = np.repeat(ptr[rows] - new_ptr[:-1], lens) + np.arange(new_ptr[-1])
    return new_ptr, values[idx]


def segment_sum(values: np.ndarray, ptr: np.ndarray) -> np.ndarray:
    """Sum of ``values[ptr[k]:ptr[k+1]]`` per segment; works for object arrays."""
    cs = np.zeros(values.shape[0] + 1, dtype=values.dtype)
    np.cumsum(values, out=cs[1:])
    return cs[ptr[1:]] - cs[ptr[:-1]]
