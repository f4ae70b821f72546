import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from physcomp.machines import HALT, INC, JMP, JZ, Instr
from physcomp.omega import (
    HALT_ONLY_LENGTH, TrialBudgetOverflow, bernoulli_source, bit_error_probability,
    decode_program, encode_program, enumerate_programs, estimate_probability_bit, is_program,
    kraft_sum, nth_bit, omega_lower_bound, trial_count,
)

HALT_BITS = encode_program([Instr(HALT)])


def test_bare_halt():
    p = decode_program(HALT_BITS)
    assert len(p) == HALT_ONLY_LENGTH and p.machine.program == (Instr(HALT),)


@pytest.mark.parametrize("suffix", ["0", "1", "0110", HALT_BITS])
def test_suffix_is_ignored(suffix):
    p = decode_program(HALT_BITS + suffix)
    assert p.bits == HALT_BITS
    assert not is_program(HALT_BITS + suffix)


def test_truncated_and_undefined():
    prog = encode_program([Instr(INC, 1), Instr(JZ, 0, 0), Instr(HALT)])
    for cut in range(len(prog)):
        assert decode_program(prog[:cut]) is None
    assert decode_program("101") is None and decode_program("111000") is None


def test_dangling_label_invalid():
    assert decode_program(encode_program([Instr(JMP, None, 5), Instr(HALT)])) is None


def test_encode_decode_round_trip():
    for p in enumerate_programs(14):
        assert encode_program(p.machine.program) == p.bits
        assert decode_program(p.bits).machine == p.machine


def test_prefix_free_up_to_20():
    words = sorted(p.bits for p in enumerate_programs(20))
    assert len(words) == len(set(words))
    # in sorted order any prefix relation shows up between neighbours
    for a, b in zip(words, words[1:]):
        assert not b.startswith(a)
    assert all(is_program(w) for w in words)


def test_enumeration_matches_brute_force():
    brute = {"".join(bits) for n in range(1, 14) for bits in itertools.product("01", repeat=n)
             if is_program("".join(bits))}
    assert brute == {p.bits for p in enumerate_programs(13)}


@pytest.mark.parametrize("length", range(1, 21))
def test_kraft(length):
    assert kraft_sum(length) <= 1


def test_empty_and_single_contributor():
    assert omega_lower_bound(1, HALT_ONLY_LENGTH - 1).value == 0
    b = omega_lower_bound(10**4, HALT_ONLY_LENGTH)
    assert b.value == Fraction(1, 2 ** HALT_ONLY_LENGTH) and b.contributors == 1


def test_monotone_grid():
    grid = {(f, L): omega_lower_bound(f, L).value
            for f in (1, 5, 50, 500) for L in (4, 8, 12, 16)}
    for (f, L), v in grid.items():
        assert 0 <= v <= 1
        for (g, M), w in grid.items():
            if g >= f and M >= L:
                assert w >= v


def test_fuel_monotone_at_16():
    assert omega_lower_bound(10**4, 16).value >= omega_lower_bound(10**2, 16).value


def test_deterministic_and_worker_independent():
    assert omega_lower_bound(30, 14) == omega_lower_bound(30, 14)
    assert omega_lower_bound(30, 14, workers=3) == omega_lower_bound(30, 14)


def test_nth_bit():
    assert [nth_bit(Fraction(1, 3), n) for n in range(1, 7)] == [0, 1, 0, 1, 0, 1]
    assert nth_bit(Fraction(1, 4), 2) == 1


def test_trial_count_rule():
    assert trial_count(1) == math.ceil(2 ** 12.1) == 4390
    assert trial_count(2, 1, 6) == 256


@pytest.mark.parametrize("p,n,bit", [(Fraction(1, 4), 1, 0), (Fraction(1, 3), 2, 1)])
def test_bit_estimation_seed_sweep(p, n, bit):
    src = bernoulli_source(p)
    assert all(estimate_probability_bit(src, n, np.random.default_rng(s), 1, 6).bit == bit
               for s in range(50))


def test_zero_probability_bits():
    src = bernoulli_source(0)
    for n in range(1, 5):
        e = estimate_probability_bit(src, n, np.random.default_rng(n), 1, 6)
        assert e.bit == 0 and e.successes == 0


def test_overflow():
    with pytest.raises(TrialBudgetOverflow):
        estimate_probability_bit(bernoulli_source(Fraction(1, 2)), 30, np.random.default_rng(0))


def test_error_bound_tightens():
    errs = [bit_error_probability(Fraction(1, 3), 2, 1, c2) for c2 in (4, 6, 8, 10)]
    assert errs == sorted(errs, reverse=True) and errs[-1] < 1e-6
    assert bit_error_probability(0, 3, 1, 6) == 0
