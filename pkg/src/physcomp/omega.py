"""Lower bounds on the halting probability of a small prefix-free machine.

Programs are bit strings decoded instruction by instruction into a 2-register
counter machine (MSB first within each field)::

    000              HALT (ends the program)
    001 r            INC r
    010 r            DEC r
    011 r lll        JZ r lll
    100 lll          JMP lll
    101, 110, 111    undefined

``r`` is one register bit and ``lll`` a 3-bit instruction index.  Decoding
stops at the first HALT, so no program is a proper prefix of another.  A
decoded program whose jump targets fall outside it is invalid.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Callable, Iterator

import numpy as np
from scipy.stats import binom

from .machines import DEC, HALT, INC, JMP, JZ, CounterMachine, Instr, RegisterState, cm_run

OPCODE_BITS, REG_BITS, LABEL_BITS = 3, 1, 3
_OPS = {0b000: HALT, 0b001: INC, 0b010: DEC, 0b011: JZ, 0b100: JMP}
_CODES = {op: code for code, op in _OPS.items()}


class TrialBudgetOverflow(ValueError):
    pass


@dataclass(frozen=True)
class PrefixFreeProgram:
    bits: str
    machine: CounterMachine

    def __len__(self):
        return len(self.bits)


def _field(bits: str, pos: int, width: int):
    if pos + width > len(bits):
        return None
    return int(bits[pos:pos + width], 2)


def decode_program(bits: str) -> PrefixFreeProgram | None:
    """Decode the program at the front of ``bits``; None if there is none.

    Bits after the terminating HALT are ignored; the returned ``bits`` is the
    consumed prefix.  Use :func:`is_program` to ask whether a string is exactly
    one program.
    """
    pos, prog = 0, []
    while True:
        code = _field(bits, pos, OPCODE_BITS)
        if code is None or code not in _OPS:
            return None
        op = _OPS[code]
        pos += OPCODE_BITS
        if op == HALT:
            prog.append(Instr(HALT))
            break
        reg = target = None
        if op in (INC, DEC, JZ):
            reg = _field(bits, pos, REG_BITS)
            if reg is None:
                return None
            pos += REG_BITS
        if op in (JZ, JMP):
            target = _field(bits, pos, LABEL_BITS)
            if target is None:
                return None
            pos += LABEL_BITS
        prog.append(Instr(op, reg, target))
    if any(i.target is not None and i.target >= len(prog) for i in prog):
        return None
    return PrefixFreeProgram(bits[:pos], CounterMachine(tuple(prog), 2))


def is_program(bits: str) -> bool:
    p = decode_program(bits)
    return p is not None and len(p.bits) == len(bits)


def encode_program(program) -> str:
    out = []
    for ins in program:
        out.append(format(_CODES[ins.op], f"0{OPCODE_BITS}b"))
        if ins.op in (INC, DEC, JZ):
            out.append(format(ins.reg, f"0{REG_BITS}b"))
        if ins.op in (JZ, JMP):
            out.append(format(ins.target, f"0{LABEL_BITS}b"))
    return "".join(out)


HALT_ONLY_LENGTH = OPCODE_BITS


def _instruction_words() -> list[tuple[str, Instr]]:
    words = []
    for r in range(2 ** REG_BITS):
        words.append((encode_program([Instr(INC, r)]), Instr(INC, r)))
        words.append((encode_program([Instr(DEC, r)]), Instr(DEC, r)))
        for t in range(2 ** LABEL_BITS):
            words.append((encode_program([Instr(JZ, r, t)]), Instr(JZ, r, t)))
    for t in range(2 ** LABEL_BITS):
        words.append((encode_program([Instr(JMP, None, t)]), Instr(JMP, None, t)))
    return words


_WORDS = _instruction_words()
_HALT_WORD = encode_program([Instr(HALT)])


def enumerate_programs(max_len: int, length: int | None = None) -> Iterator[PrefixFreeProgram]:
    """Every valid program with at most ``max_len`` bits (exactly ``length`` if given)."""

    def walk(prefix: str, prog: list):
        total = len(prefix) + len(_HALT_WORD)
        if total <= max_len and (length is None or total == length):
            full = prog + [Instr(HALT)]
            if all(i.target is None or i.target < len(full) for i in full):
                yield PrefixFreeProgram(prefix + _HALT_WORD, CounterMachine(tuple(full), 2))
        limit = max_len if length is None else min(max_len, length)
        for word, ins in _WORDS:
            if len(prefix) + len(word) + len(_HALT_WORD) <= limit:
                yield from walk(prefix + word, prog + [ins])

    yield from walk("", [])


def kraft_sum(max_len: int) -> Fraction:
    return sum((Fraction(1, 2 ** len(p)) for p in enumerate_programs(max_len)), Fraction(0))


@dataclass(frozen=True)
class OmegaBound:
    value: Fraction
    fuel: int
    max_len: int
    contributors: int


def halts(program: PrefixFreeProgram, fuel: int) -> bool:
    return cm_run(program.machine, RegisterState((0, 0)), fuel).halted


def _partial(length: int, fuel: int, max_len: int) -> tuple[Fraction, int]:
    total, count = Fraction(0), 0
    for p in enumerate_programs(max_len, length):
        if halts(p, fuel):
            total += Fraction(1, 2 ** length)
            count += 1
    return total, count


def omega_lower_bound(fuel: int, max_len: int, workers: int = 1) -> OmegaBound:
    """Sum of 2^-length over programs of at most ``max_len`` bits halting within ``fuel``.

    Program lengths are independent partitions; partial sums are exact, so the
    result does not depend on ``workers``.
    """
    if fuel < 1 or max_len < 1:
        raise ValueError("fuel and max_len must be positive")
    lengths = range(1, max_len + 1)
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_partial, lengths, [fuel] * len(lengths),
                                  [max_len] * len(lengths)))
    else:
        parts = [_partial(n, fuel, max_len) for n in lengths]
    value = sum((v for v, _ in parts), Fraction(0))
    return OmegaBound(value, fuel, max_len, sum(c for _, c in parts))


# reading bits of a probability off a Bernoulli source

def bernoulli_source(p) -> Callable[[np.random.Generator, int], int]:
    """Sampler returning the number of successes in ``trials`` draws."""
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")

    def draw(rng: np.random.Generator, trials: int) -> int:
        return int(rng.binomial(trials, float(p)))
    return draw


def trial_count(n: int, c1: float = 2.1, c2: float = 10) -> int:
    return ceil(2 ** (c1 * n + c2))


def nth_bit(x: Fraction, n: int) -> int:
    """n-th binary digit after the point (n >= 1)."""
    return (x.numerator * 2 ** n // x.denominator) & 1


@dataclass(frozen=True)
class BitEstimate:
    bit: int
    n: int
    trials: int
    successes: int


def estimate_probability_bit(sampler, n: int, rng: np.random.Generator, c1: float = 2.1,
                             c2: float = 10, cap: int = 2 ** 40) -> BitEstimate:
    """Draw 2^(c1*n + c2) samples and read the n-th bit of the observed frequency."""
    if n < 1:
        raise ValueError("n must be at least 1")
    trials = trial_count(n, c1, c2)
    if trials > cap:
        raise TrialBudgetOverflow(f"{trials} trials exceed the cap of {cap}")
    successes = sampler(rng, trials)
    return BitEstimate(nth_bit(Fraction(successes, trials), n), n, trials, successes)


def bit_error_probability(p, n: int, c1: float = 2.1, c2: float = 10) -> float:
    """Exact binomial probability that the estimate's n-th bit is wrong.

    The bit is right whenever the frequency lands in the same 2^-n cell as p;
    this returns the mass outside that cell, which upper-bounds the error.
    """
    p = Fraction(p)
    trials = trial_count(n, c1, c2)
    cell = p.numerator * 2 ** n // p.denominator
    lo = Fraction(cell, 2 ** n) * trials    # need successes >= lo
    hi = Fraction(cell + 1, 2 ** n) * trials  # and successes < hi
    lo_k = ceil(lo)
    hi_k = ceil(hi)  # smallest count at or beyond the upper edge
    pf = float(p)
    below = binom.cdf(lo_k - 1, trials, pf) if lo_k > 0 else 0.0
    above = binom.sf(hi_k - 1, trials, pf)
    return float(below + above)
