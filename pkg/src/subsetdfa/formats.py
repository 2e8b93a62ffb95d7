"""Plain-text file formats: dictionaries, automata and query lists.

Dictionary file::

    subsetdict v1 sigma=4
    # one subset-string per line, positions separated by spaces
    0 * 1,3 0-2
    -

A position is ``*`` (whole alphabet), a comma list of symbols, an inclusive
range ``a-b``, or a mix such as ``0,4-7``.  A line holding a single ``-`` is
the empty string.

Automaton file::

    subsetdfa v1 kind=pm pc=1 sigma=2 states=3
    s 0 d=0 a=-
    s 1 d=1 a=0,1
    s 2 d=1 a=- leaf=1:1
    t 0 0 1
    t 0 1 2

States come in ascending id order, then transitions in (from, symbol)
order.  ``a=`` lists accept ids (``-`` for none); minimal automata carry
only a flag, written ``+`` or ``-``.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import numpy as np

from .core import (
    MAX_SIGMA,
    MINIMAL,
    Automaton,
    Dictionary,
    DictionaryError,
    canonical_kind,
    full_mask,
    symbols_of,
    validate_dictionary,
)

DICT_MAGIC = "subsetdict"
DFA_MAGIC = "subsetdfa"


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _content_lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _header_fields(line: str, magic: str, no: int) -> dict[str, str]:
    parts = line.split()
    if len(parts) < 2 or parts[0] != magic or parts[1] != "v1":
        raise FormatError(f"expected header '{magic} v1 ...'", no)
    fields = {}
    for item in parts[2:]:
        key, sep, value = item.partition("=")
        if not sep:
            raise FormatError(f"malformed header field {item!r}", no)
        fields[key] = value
    return fields


def _int(value: str, what: str, no: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise FormatError(f"{what} must be an integer, got {value!r}", no) from None


# -- dictionaries ---------------------------------------------------------------


def format_position(mask: int, sigma: int) -> str:
    if sigma > 1 and mask == full_mask(sigma):
        return "*"
    syms = symbols_of(mask)
    parts = []
    start = prev = syms[0]
    for c in syms[1:] + [None]:
        if c is not None and c == prev + 1:
            prev = c
            continue
        parts.append(str(start) if start == prev else f"{start}-{prev}")
        if c is not None:
            start = prev = c
    return ",".join(parts)


def parse_position(token: str, sigma: int, no: int | None = None) -> int:
    if token == "*":
        return full_mask(sigma)
    mask = 0
    for item in token.split(","):
        lo, sep, hi = item.partition("-")
        if sep:
            a, b = _int(lo, "range start", no), _int(hi, "range end", no)
            if a > b:
                raise FormatError(f"empty range {item!r}", no)
        else:
            a = b = _int(item, "symbol", no)
        if a < 0 or b >= sigma:
            raise FormatError(f"symbol out of range in {token!r} (sigma={sigma})", no)
        mask |= ((1 << (b + 1)) - 1) ^ ((1 << a) - 1)
    return mask


def format_dictionary(d: Dictionary) -> str:
    lines = [f"{DICT_MAGIC} v1 sigma={d.sigma}"]
    cache: dict[int, str] = {}
    for i in range(d.n):
        row = d.masks[i, : d.lengths[i]].tolist()
        if not row:
            lines.append("-")
            continue
        toks = []
        for m in row:
            t = cache.get(m)
            if t is None:
                t = cache[m] = format_position(m, d.sigma)
            toks.append(t)
        lines.append(" ".join(toks))
    return "\n".join(lines) + "\n"


def parse_dictionary(text: str) -> Dictionary:
    lines = _content_lines(text)
    try:
        no, header = next(lines)
    except StopIteration:
        raise FormatError("empty dictionary file") from None
    fields = _header_fields(header, DICT_MAGIC, no)
    if "sigma" not in fields:
        raise FormatError("header lacks sigma=", no)
    sigma = _int(fields["sigma"], "sigma", no)
    if not 1 <= sigma <= MAX_SIGMA:
        raise FormatError(f"sigma must be in 1..{MAX_SIGMA}", no)
    cache: dict[str, int] = {}
    strings = []
    for no, line in lines:
        if line == "-":
            strings.append([])
            continue
        row = []
        for tok in line.split():
            m = cache.get(tok)
            if m is None:
                m = cache[tok] = parse_position(tok, sigma, no)
            row.append(m)
        strings.append(row)
    d = Dictionary.from_masks(sigma, strings)
    try:
        validate_dictionary(d)
    except DictionaryError as exc:
        raise FormatError(str(exc)) from None
    return d


def read_dictionary(path: str | os.PathLike) -> Dictionary:
    return parse_dictionary(Path(path).read_text(encoding="utf-8"))


def write_dictionary(d: Dictionary, path: str | os.PathLike) -> None:
    write_atomic(path, format_dictionary(d))


# -- automata -------------------------------------------------------------------


def format_automaton(a: Automaton) -> str:
    s = a.num_states
    out = [f"{DFA_MAGIC} v1 kind={a.kind} pc={int(a.pc)} sigma={a.sigma} states={s}"]
    depth = a.depth.tolist()
    leaf = a.leaf.tolist()
    if a.kind == MINIMAL:
        accept = ["+" if f else "-" for f in a.final.tolist()]
    else:
        acc_ptr = a.acc_ptr.tolist()
        acc_ids = [str(i) for i in a.acc_ids.tolist()]
        accept = [",".join(acc_ids[acc_ptr[u] : acc_ptr[u + 1]]) or "-" for u in range(s)]
    for u in range(s):
        line = f"s {u} d={depth[u]} a={accept[u]}"
        if leaf[u] >= 0:
            line += f" leaf={leaf[u]}:{depth[u]}"
        out.append(line)
    src = np.repeat(np.arange(s), np.diff(a.trans_ptr)).tolist()
    for u, c, v in zip(src, a.trans_sym.tolist(), a.trans_dst.tolist()):
        out.append(f"t {u} {c} {v}")
    return "\n".join(out) + "\n"


def parse_automaton(text: str, dictionary: Dictionary | None = None) -> Automaton:
    """Parse an automaton file and check every structural invariant.

    ``dictionary`` is attached to path-compressed automata so that leaf
    suffixes can be matched and counted.
    """
    lines = _content_lines(text)
    try:
        no, header = next(lines)
    except StopIteration:
        raise FormatError("empty automaton file") from None
    fields = _header_fields(header, DFA_MAGIC, no)
    for key in ("kind", "pc", "sigma", "states"):
        if key not in fields:
            raise FormatError(f"header lacks {key}=", no)
    try:
        kind = canonical_kind(fields["kind"])
    except ValueError as exc:
        raise FormatError(str(exc), no) from None
    pc = fields["pc"]
    if pc not in ("0", "1"):
        raise FormatError("pc must be 0 or 1", no)
    sigma = _int(fields["sigma"], "sigma", no)
    if not 1 <= sigma <= MAX_SIGMA:
        raise FormatError(f"sigma must be in 1..{MAX_SIGMA}", no)
    s = _int(fields["states"], "states", no)
    if s < 1:
        raise FormatError("an automaton has at least one state", no)

    depth = np.zeros(s, dtype=np.int32)
    final = np.zeros(s, dtype=bool)
    leaf = np.full(s, -1, dtype=np.int32)
    acc: list[list[int]] = [[] for _ in range(s)]
    src: list[int] = []
    sym: list[int] = []
    dst: list[int] = []
    next_state = 0
    for no, line in lines:
        parts = line.split()
        if parts[0] == "s":
            if src:
                raise FormatError("state line after transitions", no)
            if len(parts) not in (4, 5):
                raise FormatError("state line needs 's <id> d=<depth> a=<ids>'", no)
            u = _int(parts[1], "state id", no)
            if u != next_state:
                raise FormatError(f"expected state {next_state}, got {u}", no)
            next_state += 1
            if u >= s:
                raise FormatError("more states than declared", no)
            if not parts[2].startswith("d=") or not parts[3].startswith("a="):
                raise FormatError("state line needs d= and a= fields", no)
            depth[u] = _int(parts[2][2:], "depth", no)
            a_field = parts[3][2:]
            if kind == MINIMAL:
                if a_field not in ("+", "-"):
                    raise FormatError("minimal automata use a=+ or a=-", no)
                final[u] = a_field == "+"
            elif a_field != "-":
                acc[u] = [_int(x, "accept id", no) for x in a_field.split(",")]
                final[u] = True
            if len(parts) == 5:
                key, _, ref = parts[4].partition("=")
                sid, colon, off = ref.partition(":")
                if key != "leaf" or not colon:
                    raise FormatError("expected leaf=<string>:<offset>", no)
                leaf[u] = _int(sid, "leaf string", no)
                if _int(off, "leaf offset", no) != depth[u]:
                    raise FormatError("leaf offset must equal the state depth", no)
        elif parts[0] == "t":
            if len(parts) != 4:
                raise FormatError("transition line needs 't <from> <symbol> <to>'", no)
            u, c, v = (_int(x, "transition field", no) for x in parts[1:])
            if not (0 <= u < s and 0 <= v < s):
                raise FormatError("transition refers to an unknown state", no)
            if not 0 <= c < sigma:
                raise FormatError(f"symbol {c} outside alphabet", no)
            src.append(u)
            sym.append(c)
            dst.append(v)
        else:
            raise FormatError(f"unknown record {parts[0]!r}", no)
    if next_state != s:
        raise FormatError(f"declared {s} states, found {next_state}")

    src_arr = np.asarray(src, dtype=np.int64)
    if src_arr.size and np.any(np.diff(src_arr) < 0):
        raise FormatError("transitions not in (from, symbol) order")
    trans_ptr = np.zeros(s + 1, dtype=np.int64)
    np.cumsum(np.bincount(src_arr, minlength=s), out=trans_ptr[1:])
    acc_ptr = np.zeros(s + 1, dtype=np.int64)
    np.cumsum([len(x) for x in acc], out=acc_ptr[1:])
    a = Automaton(
        sigma=sigma,
        kind=kind,
        pc=pc == "1",
        depth=depth,
        final=final,
        trans_ptr=trans_ptr,
        trans_sym=np.asarray(sym, dtype=np.uint8),
        trans_dst=np.asarray(dst, dtype=np.int32),
        acc_ptr=acc_ptr,
        acc_ids=np.asarray([i for x in acc for i in x], dtype=np.int64),
        leaf=leaf,
        dictionary=dictionary,
    )
    try:
        a.check_invariants()
    except AssertionError as exc:
        raise FormatError(f"invalid automaton: {exc}") from None
    if dictionary is not None:
        if dictionary.sigma != sigma:
            raise FormatError("dictionary alphabet differs from the automaton's")
        if np.any(a.leaf >= dictionary.n) or (a.acc_ids.size and a.acc_ids.max() >= dictionary.n):
            raise FormatError("automaton refers to strings missing from the dictionary")
    return a


def read_automaton(path: str | os.PathLike, dictionary: Dictionary | None = None) -> Automaton:
    return parse_automaton(Path(path).read_text(encoding="utf-8"), dictionary)


def write_automaton(a: Automaton, path: str | os.PathLike) -> None:
    write_atomic(path, format_automaton(a))


# -- queries --------------------------------------------------------------------


def parse_queries(text: str, sigma: int) -> list[tuple[int, ...]]:
    """One simple string per line, symbols separated by spaces.

    A blank line is the empty query; lines starting with ``#`` are skipped.
    """
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        p = tuple(_int(x, "query symbol", no) for x in line.split())
        for c in p:
            if not 0 <= c < sigma:
                raise FormatError(f"symbol {c} out of range (sigma={sigma})", no)
        out.append(p)
    return out
