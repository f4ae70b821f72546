"""Two-sided binary addresses, the shift map and its relatives.

Index convention: bit ``k >= 0`` is the ``k``-th bit right of the point (a0 is
index 0), bit ``k < 0`` lies left of it (a-1 is index -1).  One application of
the shift moves the point one symbol rightward, so the new bit ``k`` is the old
bit ``k + 1``.

Two address forms exist.  :class:`Address` holds an eventually periodic
sequence exactly, which is what makes visitation questions decidable.
:class:`WindowAddress` holds only a finite window of known bits, the situation
of an observer handed the address one bit at a time.
"""
from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, log2
from typing import Sequence

import numpy as np

from .machines import LEFT, TapeConfiguration, TuringMachine


class WindowExhausted(Exception):
    pass


class NotComparable(Exception):
    pass


class DecodeError(ValueError):
    pass


def _primitive_period(per: tuple) -> tuple:
    p = len(per)
    for d in range(1, p + 1):
        if p % d == 0 and per[:d] * (p // d) == per:
            return per[:d]
    return per


def _canonical_stream(pre: tuple, per: tuple) -> tuple[tuple, tuple]:
    per = _primitive_period(per)
    while pre and pre[-1] == per[-1]:
        pre = pre[:-1]
        per = per[-1:] + per[:-1]
    return pre, per


def _stream_bit(pre: tuple, per: tuple, j: int) -> int:
    if j < len(pre):
        return pre[j]
    return per[(j - len(pre)) % len(per)]


def _bits(text: str) -> tuple:
    text = text.strip()
    if not re.fullmatch(r"[01]*", text):
        raise ValueError(f"not a bit string: {text!r}")
    return tuple(int(ch) for ch in text)


@dataclass(frozen=True)
class Address:
    """Exact eventually periodic address; both streams are read outward from the point.

    Instances are canonical (shortest preperiods, primitive periods), so ``==``
    compares the underlying infinite sequences.
    """

    left_pre: tuple = ()
    left_per: tuple = (0,)
    right_pre: tuple = ()
    right_per: tuple = (0,)

    def __post_init__(self):
        streams = {}
        for side in ("left", "right"):
            pre = tuple(int(b) for b in getattr(self, f"{side}_pre"))
            per = tuple(int(b) for b in getattr(self, f"{side}_per"))
            if not per:
                raise ValueError("periods must be non-empty")
            if any(b not in (0, 1) for b in pre + per):
                raise ValueError("address bits must be 0 or 1")
            streams[side] = _canonical_stream(pre, per)
        object.__setattr__(self, "left_pre", streams["left"][0])
        object.__setattr__(self, "left_per", streams["left"][1])
        object.__setattr__(self, "right_pre", streams["right"][0])
        object.__setattr__(self, "right_per", streams["right"][1])

    @classmethod
    def zeros(cls) -> "Address":
        return cls()

    def bit(self, k: int) -> int:
        if k >= 0:
            return _stream_bit(self.right_pre, self.right_per, k)
        return _stream_bit(self.left_pre, self.left_per, -k - 1)

    def window(self, start: int, stop: int) -> tuple:
        return tuple(self.bit(k) for k in range(start, stop))

    def __str__(self):
        s = lambda t: "".join(map(str, t))
        return (f"left: pre={s(self.left_pre)}; per={s(self.left_per)} | "
                f"right: pre={s(self.right_pre)}; per={s(self.right_per)}")

    @classmethod
    def parse(cls, text: str) -> "Address":
        """Inverse of ``str``; the string ``zeros`` is accepted for the all-zero address."""
        if text.strip() == "zeros":
            return cls()
        m = re.fullmatch(
            r"\s*left:\s*pre=([01]*);\s*per=([01]+)\s*\|\s*right:\s*pre=([01]*);\s*per=([01]+)\s*",
            text)
        if m is None:
            raise ValueError(f"cannot parse address: {text!r}")
        return cls(*(_bits(g) for g in m.groups()))

    def to_json(self) -> str:
        s = lambda t: "".join(map(str, t))
        return json.dumps({"left": {"pre": s(self.left_pre), "per": s(self.left_per)},
                           "right": {"pre": s(self.right_pre), "per": s(self.right_per)}},
                          sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Address":
        doc = json.loads(text)
        return cls(_bits(doc["left"]["pre"]), _bits(doc["left"]["per"]),
                   _bits(doc["right"]["pre"]), _bits(doc["right"]["per"]))


@dataclass(frozen=True)
class WindowAddress:
    """Finite knowledge of an address: ``bits`` cover indices ``-known_left .. known_right - 1``."""

    bits: tuple
    known_left: int

    def __post_init__(self):
        if not isinstance(self.bits, tuple):
            object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))
        if not 0 <= self.known_left <= len(self.bits):
            raise ValueError("known_left must lie within the window")

    @classmethod
    def from_sides(cls, left: Sequence[int], right: Sequence[int]) -> "WindowAddress":
        """``left`` is read outward from the point (a-1 first), ``right`` from a0."""
        return cls(tuple(reversed(tuple(left))) + tuple(right), len(left))

    @property
    def known_right(self) -> int:
        return len(self.bits) - self.known_left

    def bit(self, k: int) -> int:
        if not -self.known_left <= k < self.known_right:
            raise WindowExhausted(f"bit {k} is outside the known window")
        return self.bits[k + self.known_left]

    def window(self, start: int, stop: int) -> tuple:
        return tuple(self.bit(k) for k in range(start, stop))


def _shift_exact(a: Address, n: int) -> Address:
    if n < 0:
        return _unshift_exact(a, -n)
    if n == 0:
        return a
    pre, per = a.right_pre, a.right_per
    moved = tuple(_stream_bit(pre, per, j) for j in range(n))
    if n <= len(pre):
        new_pre, new_per = pre[n:], per
    else:
        r = (n - len(pre)) % len(per)
        new_pre, new_per = (), per[r:] + per[:r]
    return Address(moved[::-1] + a.left_pre, a.left_per, new_pre, new_per)


def _unshift_exact(a: Address, n: int) -> Address:
    pre, per = a.left_pre, a.left_per
    moved = tuple(_stream_bit(pre, per, j) for j in range(n))
    if n <= len(pre):
        new_pre, new_per = pre[n:], per
    else:
        r = (n - len(pre)) % len(per)
        new_pre, new_per = (), per[r:] + per[:r]
    return Address(new_pre, new_per, moved[::-1] + a.right_pre, a.right_per)


def shift(a):
    return iterate_shift(a, 1)


def iterate_shift(a, n: int):
    """n-fold shift; negative ``n`` applies the inverse shift."""
    if isinstance(a, WindowAddress):
        if -n > a.known_left:
            raise WindowExhausted(f"only {a.known_left} bits are known left of the point")
        if n > a.known_right:
            raise WindowExhausted(f"only {a.known_right} bits are known right of the point")
        return WindowAddress(a.bits, a.known_left + n)
    return _shift_exact(a, n)


@dataclass(frozen=True)
class FastForward:
    bits: tuple
    ops: int


def fast_forward(a: Address, t: int, window: tuple[int, int]) -> FastForward:
    """Bits on ``range(*window)`` after ``t`` shifts, by index arithmetic alone.

    ``ops`` counts word-level operations: reducing ``t`` modulo the right period
    is charged one operation per bit of ``t`` (schoolbook long division), and
    each window bit a constant handful.  No intermediate address is built.
    """
    if not isinstance(a, Address):
        raise TypeError("fast_forward needs an exact address")
    if t < 0:
        raise ValueError("t must be non-negative")
    start, stop = window
    pre, per = a.right_pre, a.right_per
    p = len(per)
    ops = max(1, t.bit_length())
    t_mod = t % p
    out = []
    for k in range(start, stop):
        ops += 3
        pos = k + t
        if pos < 0:
            out.append(_stream_bit(a.left_pre, a.left_per, -pos - 1))
        elif pos < len(pre):
            out.append(pre[pos])
        else:
            ops += 2
            out.append(per[(k + t_mod - len(pre)) % p])
    return FastForward(tuple(out), ops)


def ops_bound(a: Address, t: int, width: int) -> int:
    """Documented ceiling for ``fast_forward(a, t, window).ops`` with a ``width``-bit window.

    Quadratic in (bit length of t + preperiod + period), times the window width.
    """
    size = max(1, t.bit_length()) + len(a.right_pre) + len(a.right_per)
    return 5 * max(1, width) * size * size


def _stream_value(pre: tuple, per: tuple, base: int) -> Fraction:
    digit = 2 if base == 3 else 1

    def finite(bits):
        return sum(Fraction(digit * b, base ** (i + 1)) for i, b in enumerate(bits))

    head = finite(pre)
    cycle = finite(per) / (1 - Fraction(1, base ** len(per)))
    return head + cycle / base ** len(pre)


DYADIC, TERNARY = 2, 3


def _base(base) -> int:
    if base in (DYADIC, "dyadic", "Dyadic"):
        return 2
    if base in (TERNARY, "ternary", "Ternary"):
        return 3
    raise ValueError(f"unknown base {base!r}")


def embed(a: Address, base=TERNARY) -> tuple[Fraction, Fraction]:
    """Exact point (x, y) in the unit square; x codes the left stream, y the right.

    Ternary uses digit 2*bit, landing on the middle-thirds Cantor set.
    """
    b = _base(base)
    return _stream_value(a.left_pre, a.left_per, b), _stream_value(a.right_pre, a.right_per, b)


def first_difference(a: Address, b: Address) -> int | None:
    """Smallest right index where the right streams differ, or None if they never do."""
    horizon = max(len(a.right_pre), len(b.right_pre)) + len(a.right_per) * len(b.right_per)
    for k in range(horizon):
        if a.bit(k) != b.bit(k):
            return k
    return None


def divergence(a: Address, b: Address, n: int, base=TERNARY) -> list[Fraction]:
    """|y_k(a) - y_k(b)| for k = 0..n, where y_k is the right coordinate after k shifts.

    While the right streams still agree at index k the next distance is exactly
    ``base`` times this one.
    """
    if first_difference(a, b) is None:
        raise NotComparable("right streams are identical")
    bb = _base(base)
    out = []
    for k in range(n + 1):
        ya = _stream_value(*_right_after(a, k), bb)
        yb = _stream_value(*_right_after(b, k), bb)
        out.append(abs(ya - yb))
    return out


def _right_after(a: Address, k: int) -> tuple[tuple, tuple]:
    pre, per = a.right_pre, a.right_per
    if k <= len(pre):
        return pre[k:], per
    r = (k - len(pre)) % len(per)
    return (), per[r:] + per[:r]


def divergence_csv(distances: Sequence[Fraction]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["step", "numerator", "denominator", "decimal"])
    for k, d in enumerate(distances):
        w.writerow([k, d.numerator, d.denominator, f"{float(d):.17g}"])
    return buf.getvalue()


def reaches_region(a: Address, pattern: Sequence[int], offset: int = 0) -> bool:
    """Does some forward iterate show ``pattern`` at indices ``offset ..``?

    Past ``max(0, -offset) + len(right_pre)`` shifts the inspected bits come only
    from the periodic part of the right stream, so one more period of offsets
    covers every case.
    """
    pattern = tuple(pattern)
    if not pattern:
        raise ValueError("pattern must be non-empty")
    horizon = max(0, -offset) + len(a.right_pre) + len(a.right_per)
    stop = offset + len(pattern)
    return any(fast_forward(a, t, (offset, stop)).bits == pattern for t in range(horizon + 1))


# Moore-style generalized shifts

@dataclass(frozen=True)
class GeneralizedShift:
    """Rewrite the block on ``domain`` (half-open index range), then shift.

    ``table[v]`` gives ``(replacement, shift)`` for the block whose bits, read
    from ``domain[0]`` upward, spell ``v`` least-significant first.
    """

    domain: tuple[int, int]
    table: tuple

    def __post_init__(self):
        lo, hi = self.domain
        width = hi - lo
        if width < 1:
            raise ValueError("domain must be non-empty")
        object.__setattr__(self, "table", tuple((tuple(r), int(s)) for r, s in self.table))
        if len(self.table) != 2 ** width:
            raise ValueError("table must cover every block")
        if any(len(r) != width for r, _ in self.table):
            raise ValueError("replacement width must equal domain width")

    @property
    def width(self) -> int:
        return self.domain[1] - self.domain[0]


def _block_value(bits: Sequence[int]) -> int:
    return sum(b << i for i, b in enumerate(bits))


def _rewrite(a: Address, lo: int, repl: tuple) -> Address:
    # materialize enough of each stream to cover the block, then rebuild
    hi = lo + len(repl)
    rlen = max(len(a.right_pre), hi)
    llen = max(len(a.left_pre), -lo)
    right = list(_stream_bit(a.right_pre, a.right_per, j) for j in range(rlen))
    left = list(_stream_bit(a.left_pre, a.left_per, j) for j in range(llen))
    for i, b in enumerate(repl):
        k = lo + i
        if k >= 0:
            right[k] = b
        else:
            left[-k - 1] = b
    # preperiods extended by whole copies of the period keep alignment
    rpad = rlen - len(a.right_pre)
    lpad = llen - len(a.left_pre)
    rper = _rotate(a.right_per, rpad)
    lper = _rotate(a.left_per, lpad)
    return Address(tuple(left), lper, tuple(right), rper)


def _rotate(per: tuple, r: int) -> tuple:
    r %= len(per)
    return per[r:] + per[:r]


def gshift_step(g: GeneralizedShift, a):
    lo, hi = g.domain
    if isinstance(a, WindowAddress):
        block = a.window(lo, hi)
        repl, s = g.table[_block_value(block)]
        bits = list(a.bits)
        for i, b in enumerate(repl):
            bits[lo + i + a.known_left] = b
        return iterate_shift(WindowAddress(tuple(bits), a.known_left), s)
    block = a.window(lo, hi)
    repl, s = g.table[_block_value(block)]
    if repl != block:
        a = _rewrite(a, lo, repl)
    return iterate_shift(a, s)


def at_rest(g: GeneralizedShift, a) -> bool:
    """True when the entry read at ``a`` rewrites nothing and shifts by 0.

    This is the halting notion for generalized shifts.  An address can also be
    invariant under a moving entry (a blank tape swept by a looping machine),
    which is not rest.
    """
    block = a.window(*g.domain)
    repl, s = g.table[_block_value(block)]
    return s == 0 and repl == block


def state_code_width(tm: TuringMachine) -> int:
    """Bits per state code; one code beyond the last state is always left unused."""
    return max(1, ceil(log2(len(tm.states) + 1)))


def _code(tm: TuringMachine, q) -> tuple:
    i = tm.states.index(q)
    return tuple((i >> j) & 1 for j in range(state_code_width(tm)))


def encode_address(c: TapeConfiguration, tm: TuringMachine) -> Address:
    """Right stream: state code, scanned bit, rest of the right word; left stream: left word."""
    right = _code(tm, c.state) + (c.scanned,) + c.right[1:]
    return Address(c.left, (0,), right, (0,))


def decode_address(a: Address, tm: TuringMachine, steps: int = 0) -> TapeConfiguration:
    if a.left_per != (0,) or a.right_per != (0,):
        raise DecodeError("tape streams must end in blanks")
    w = state_code_width(tm)
    code = _block_value(a.window(0, w))
    if code >= len(tm.states):
        raise DecodeError(f"invalid state code {code}")
    right = a.window(w, max(w + 1, len(a.right_pre)))
    return TapeConfiguration(a.left_pre, right, tm.states[code], steps)


def gshift_from_tm(tm: TuringMachine) -> GeneralizedShift:
    """Generalized shift conjugate to ``tm_step`` under :func:`encode_address`.

    The domain covers a-1 (the bit left of the head), the state code and the
    scanned bit.  Blocks with halting or unused state codes are fixed points.
    """
    w = state_code_width(tm)
    table = []
    for v in range(2 ** (w + 2)):
        block = tuple((v >> i) & 1 for i in range(w + 2))
        under, code, scanned = block[0], _block_value(block[1:w + 1]), block[w + 1]
        if code >= len(tm.states) or tm.is_halting(tm.states[code]):
            table.append((block, 0))
            continue
        nq, wr, mv = tm.delta[(tm.states[code], scanned)]
        qbits = _code(tm, nq)
        if mv == LEFT:
            table.append((qbits + (under, wr), -1))
        else:
            table.append(((under, wr) + qbits, 1))
    return GeneralizedShift((-1, w + 1), tuple(table))


# Fredkin's mod-2 rule on an unbounded line

@dataclass(frozen=True)
class CaRow:
    """Cells ``offset .. offset + width - 1`` of an infinite line; all others are 0."""

    cells: tuple
    offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(int(c) for c in self.cells))

    @property
    def width(self) -> int:
        return len(self.cells)

    def ones(self) -> list[int]:
        return [self.offset + i for i, c in enumerate(self.cells) if c]

    def __str__(self):
        return "".join(map(str, self.cells))

    @classmethod
    def parse(cls, text: str, offset: int = 0) -> "CaRow":
        return cls(_bits(text), offset)


def _xor_pass(cells: np.ndarray, d: int) -> np.ndarray:
    padded = np.zeros(len(cells) + 4 * d, dtype=np.uint8)
    padded[2 * d:2 * d + len(cells)] = cells
    return padded[:-2 * d] ^ padded[2 * d:]


def ca_step(row: CaRow) -> CaRow:
    out = _xor_pass(np.asarray(row.cells, dtype=np.uint8), 1)
    return CaRow(tuple(out.tolist()), row.offset - 1)


@dataclass(frozen=True)
class CaForward:
    row: CaRow
    ops: int


def ca_fast_forward(row: CaRow, t: int, with_ops: bool = False):
    """t steps at once: T^(2^k) x has cell i equal to x[i - 2^k] ^ x[i + 2^k].

    One pass per set bit of ``t``; the row grows by 2^k on each side per pass so
    nothing ever wraps.  ``ops`` counts cell XORs.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    cells = np.asarray(row.cells, dtype=np.uint8)
    offset, ops, k = row.offset, 0, 0
    while t >> k:
        if (t >> k) & 1:
            d = 1 << k
            cells = _xor_pass(cells, d)
            offset -= d
            ops += len(cells)
        k += 1
    out = CaRow(tuple(cells.tolist()), offset)
    return CaForward(out, ops) if with_ops else out
