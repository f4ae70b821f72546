"""Named Turing machines used by the tests, demos and CLI examples."""
from __future__ import annotations

import random

from .machines import TuringMachine

_TEXTS = {
    "write1": """
states: A H
start: A
halt: H
A 0 -> H 1 R
A 1 -> H 1 R
""",
    "bb2": """
# two-state busy beaver
states: A B H
start: A
halt: H
A 0 -> B 1 R
A 1 -> B 1 L
B 0 -> A 1 L
B 1 -> H 1 R
""",
    "bb3": """
states: A B C H
start: A
halt: H
A 0 -> B 1 R
A 1 -> H 1 R
B 0 -> C 0 R
B 1 -> B 1 R
C 0 -> C 1 L
C 1 -> A 1 L
""",
    "loop": """
states: A H
start: A
halt: H
A 0 -> A 0 R
A 1 -> A 1 R
""",
    "shuttle": """
# run right across a block of 1s, come back to the blank before it, stop
states: A B H
start: A
halt: H
A 1 -> A 1 R
A 0 -> B 0 L
B 1 -> B 1 L
B 0 -> H 0 R
""",
    "append1": """
# unary successor: walk to the end of the 1s and add one more
states: A H
start: A
halt: H
A 1 -> A 1 R
A 0 -> H 1 L
""",
    "bounce": """
# never halts: swings left and right forever, growing nothing
states: A B H
start: A
halt: H
A 0 -> B 0 R
A 1 -> B 1 R
B 0 -> A 0 L
B 1 -> A 1 L
""",
}

MACHINES = {name: TuringMachine.from_text(text) for name, text in _TEXTS.items()}


def machine(name: str) -> TuringMachine:
    return MACHINES[name]


def random_machine(n_states: int, rng: random.Random, halt_bias: float = 0.15) -> TuringMachine:
    """Uniform-ish random binary machine with states ``S0..S{n-1}`` plus ``H``."""
    states = tuple(f"S{i}" for i in range(n_states)) + ("H",)
    delta = {}
    for q in states[:-1]:
        for s in (0, 1):
            nq = "H" if rng.random() < halt_bias else rng.choice(states[:-1])
            delta[(q, s)] = (nq, rng.randint(0, 1), rng.choice("LR"))
    return TuringMachine(states, "S0", {"H"}, delta)
