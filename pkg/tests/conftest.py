import random

import pytest

from physcomp.corpus import MACHINES, random_machine
from physcomp.symbolic import Address


@pytest.fixture
def bb2():
    return MACHINES["bb2"]


@pytest.fixture
def write1():
    return MACHINES["write1"]


@pytest.fixture
def loop():
    return MACHINES["loop"]


def dict_tape_run(tm, input_bits=(), fuel=10_000):
    """Reference simulator on a sparse dict tape, independent of the two-word form."""
    tape = {i: b for i, b in enumerate(input_bits)}
    head, state, steps = 0, tm.start, 0
    while state not in tm.halting and steps < fuel:
        nq, w, mv = tm.delta[(state, tape.get(head, 0))]
        tape[head] = w
        head += 1 if mv == "R" else -1
        state, steps = nq, steps + 1
    return state, steps, tape, head


def corpus_addresses():
    return [
        Address(),
        Address((1,), (0,), (1, 0, 1), (0,)),
        Address((1, 0), (1, 1, 0), (1, 1, 0), (1, 0, 1, 0, 0, 1, 1)),
        Address((), (1,), (0, 1), (1, 0)),
        Address((0, 0, 1), (0, 1), (1, 1), (1, 0, 1, 0)),
        Address((), (0,), (), (1,)),
        Address((1, 1, 1), (0,), (0, 0, 0, 0, 1), (1, 1, 0, 0, 1, 0, 0, 0, 1)),
    ]


def random_machines(count, seed=0):
    rng = random.Random(seed)
    return [random_machine(rng.randint(1, 4), rng) for _ in range(count)]
