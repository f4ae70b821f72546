"""Turing machines, counter machines and the binary-to-unary compiler.

Tapes are split at the head into two words.  Each word is stored nearest-to-head
first, so ``right[0]`` is the scanned square.  Reading a word as a binary number
with the nearest bit least significant gives the register contents used by the
compiled 3-counter machine: register 0 holds the left word, register 1 the right
word, register 2 is scratch.
"""
from __future__ import annotations

import json
import re
from math import log10
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

LEFT, RIGHT = "L", "R"


class AlreadyHalted(Exception):
    pass


class InvalidProgram(Exception):
    pass


class MachineFormatError(ValueError):
    pass


def _trim(bits: Iterable[int]) -> tuple[int, ...]:
    bits = tuple(int(b) for b in bits)
    end = len(bits)
    while end and bits[end - 1] == 0:
        end -= 1
    return bits[:end]


@dataclass(frozen=True)
class TuringMachine:
    states: tuple
    start: object
    halting: frozenset
    delta: Mapping  # (state, bit) -> (state, bit, "L" | "R")

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "halting", frozenset(self.halting))
        object.__setattr__(self, "delta", dict(self.delta))
        known = set(self.states)
        if len(known) != len(self.states):
            raise MachineFormatError("duplicate state names")
        if self.start not in known or not self.halting <= known:
            raise MachineFormatError("start/halting states must be declared")
        for q in self.states:
            for s in (0, 1):
                if q in self.halting:
                    if (q, s) in self.delta:
                        raise MachineFormatError(f"halting state {q!r} has a transition")
                    continue
                if (q, s) not in self.delta:
                    raise MachineFormatError(f"missing transition for ({q!r}, {s})")
                nq, w, mv = self.delta[(q, s)]
                if nq not in known or w not in (0, 1) or mv not in (LEFT, RIGHT):
                    raise MachineFormatError(f"bad transition for ({q!r}, {s})")
        if len(self.delta) != 2 * (len(self.states) - len(self.halting)):
            raise MachineFormatError("transition table has entries for undeclared pairs")

    def is_halting(self, state) -> bool:
        return state in self.halting

    # text / JSON descriptions

    def to_text(self) -> str:
        lines = [
            "states: " + " ".join(map(str, self.states)),
            f"start: {self.start}",
            "halt: " + " ".join(str(q) for q in self.states if q in self.halting),
        ]
        for q in self.states:
            for s in (0, 1):
                if (q, s) in self.delta:
                    nq, w, mv = self.delta[(q, s)]
                    lines.append(f"{q} {s} -> {nq} {w} {mv}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "TuringMachine":
        states = start = None
        halting: list = []
        delta = {}
        rule = re.compile(r"^(\S+)\s+([01])\s*->\s*(\S+)\s+([01])\s+([LR])$")
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, rest = line.partition(":")
            if "->" not in line and rest is not None and key in ("states", "start", "halt"):
                if key == "states":
                    states = rest.split()
                elif key == "start":
                    start = rest.strip()
                else:
                    halting = rest.split()
                continue
            m = rule.match(line)
            if m is None:
                raise MachineFormatError(f"cannot parse line: {raw!r}")
            q, s, nq, w, mv = m.groups()
            if (q, int(s)) in delta:
                raise MachineFormatError(f"duplicate transition for ({q}, {s})")
            delta[(q, int(s))] = (nq, int(w), mv)
        if states is None or start is None:
            raise MachineFormatError("missing 'states:' or 'start:' line")
        return cls(tuple(states), start, frozenset(halting), delta)

    def to_json(self) -> str:
        doc = {
            "states": list(self.states),
            "start": self.start,
            "halting": [q for q in self.states if q in self.halting],
            "transitions": [
                [q, s, *self.delta[(q, s)]]
                for q in self.states for s in (0, 1) if (q, s) in self.delta
            ],
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "TuringMachine":
        try:
            doc = json.loads(text)
            delta = {(q, int(s)): (nq, int(w), mv) for q, s, nq, w, mv in doc["transitions"]}
            return cls(tuple(doc["states"]), doc["start"], frozenset(doc["halting"]), delta)
        except (KeyError, TypeError, ValueError) as exc:
            raise MachineFormatError(str(exc)) from exc

    @classmethod
    def load(cls, text: str) -> "TuringMachine":
        """Parse either description format, sniffing JSON by its leading brace."""
        return cls.from_json(text) if text.lstrip().startswith("{") else cls.from_text(text)


@dataclass(frozen=True)
class TapeConfiguration:
    left: tuple = ()
    right: tuple = ()
    state: object = None
    steps: int = 0

    def __post_init__(self):
        object.__setattr__(self, "left", _trim(self.left))
        object.__setattr__(self, "right", _trim(self.right))

    @property
    def scanned(self) -> int:
        return self.right[0] if self.right else 0

    def tape(self) -> tuple[int, ...]:
        """Written tape read left to right; the head sits at index ``len(left)``."""
        return tuple(reversed(self.left)) + self.right

    def ones(self) -> int:
        return sum(self.left) + sum(self.right)


def initial_config(tm: TuringMachine, input_bits: Sequence[int] = ()) -> TapeConfiguration:
    return TapeConfiguration((), tuple(input_bits), tm.start, 0)


def tm_step(tm: TuringMachine, c: TapeConfiguration) -> TapeConfiguration:
    if tm.is_halting(c.state):
        raise AlreadyHalted(c.state)
    nq, w, mv = tm.delta[(c.state, c.scanned)]
    rest = c.right[1:]
    if mv == RIGHT:
        return TapeConfiguration((w,) + c.left, rest, nq, c.steps + 1)
    under = c.left[0] if c.left else 0
    return TapeConfiguration(c.left[1:], (under, w) + rest, nq, c.steps + 1)


@dataclass(frozen=True)
class RunResult:
    halted: bool
    final: object  # TapeConfiguration or RegisterState
    steps: int
    unit_cost: int = 0
    distance_cost: int = 0

    @property
    def outcome(self) -> str:
        return "halted" if self.halted else "fuel_exhausted"


def tm_run(tm: TuringMachine, input_bits: Sequence[int] = (), fuel: int = 1000) -> RunResult:
    if fuel < 1:
        raise ValueError("fuel must be positive")
    c = initial_config(tm, input_bits)
    while not tm.is_halting(c.state):
        if c.steps >= fuel:
            return RunResult(False, c, c.steps, c.steps, c.steps)
        c = tm_step(tm, c)
    return RunResult(True, c, c.steps, c.steps, c.steps)


# counter machines

INC, DEC, JZ, JMP, HALT = "INC", "DEC", "JZ", "JMP", "HALT"


@dataclass(frozen=True)
class Instr:
    op: str
    reg: int | None = None
    target: int | None = None

    def __str__(self):
        if self.op in (INC, DEC):
            return f"{self.op} {self.reg}"
        if self.op == JZ:
            return f"JZ {self.reg} {self.target}"
        if self.op == JMP:
            return f"JMP {self.target}"
        return HALT


@dataclass(frozen=True)
class CounterMachine:
    program: tuple
    register_count: int
    # compiled machines: state -> pc of the macro block simulating that state
    entries: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "program", tuple(self.program))
        object.__setattr__(self, "entries", dict(self.entries))
        if self.register_count < 1:
            raise InvalidProgram("register_count must be positive")
        n = len(self.program)
        for i, ins in enumerate(self.program):
            if ins.op not in (INC, DEC, JZ, JMP, HALT):
                raise InvalidProgram(f"unknown op at {i}: {ins.op}")
            if ins.op in (INC, DEC, JZ) and not 0 <= ins.reg < self.register_count:
                raise InvalidProgram(f"register out of range at {i}")
            if ins.op in (JZ, JMP) and not 0 <= ins.target < n:
                raise InvalidProgram(f"unresolved label at {i}")
        for q, pc in self.entries.items():
            if not 0 <= pc < n:
                raise InvalidProgram(f"entry for {q!r} outside program")

    def to_listing(self) -> str:
        lines = [f"# registers {self.register_count}"]
        lines += [f"# entry {q} {pc}" for q, pc in self.entries.items()]
        lines += [f"{i}: {ins}" for i, ins in enumerate(self.program)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_listing(cls, text: str) -> "CounterMachine":
        registers, entries, program = None, {}, []
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if parts[:1] == ["registers"]:
                    registers = int(parts[1])
                elif parts[:1] == ["entry"]:
                    entries[parts[1]] = int(parts[2])
                continue
            num, _, body = line.partition(":")
            if int(num) != len(program):
                raise InvalidProgram(f"listing out of order at {raw!r}")
            tok = body.split()
            op = tok[0].upper()
            if op in (INC, DEC):
                program.append(Instr(op, int(tok[1])))
            elif op == JZ:
                program.append(Instr(op, int(tok[1]), int(tok[2])))
            elif op == JMP:
                program.append(Instr(op, None, int(tok[1])))
            elif op == HALT:
                program.append(Instr(HALT))
            else:
                raise InvalidProgram(f"unknown op {tok[0]!r}")
        if registers is None:
            registers = 1 + max((i.reg for i in program if i.reg is not None), default=0)
        return cls(tuple(program), registers, entries)


@dataclass(frozen=True)
class RegisterState:
    registers: tuple
    pc: int = 0
    unit_cost: int = 0
    distance_cost: int = 0

    def __post_init__(self):
        regs = tuple(int(r) for r in self.registers)
        if any(r < 0 for r in regs):
            raise ValueError("registers are non-negative")
        object.__setattr__(self, "registers", regs)


UNIT, DISTANCE = "unit", "distance"


def cm_run(cm: CounterMachine, init: RegisterState, fuel: int, cost_model: str = UNIT,
           stop_at: Iterable[int] = ()) -> RunResult:
    """Run ``cm`` for at most ``fuel`` instructions; both cost totals are always kept.

    ``cost_model`` only labels which accumulator the caller cares about.  Under the
    distance model an instruction touching a register of value v costs v + 1.
    ``stop_at`` pcs end the run early (as not halted) once at least one
    instruction has executed; the compiler uses it to cut at macro boundaries.
    """
    if fuel < 1:
        raise ValueError("fuel must be positive")
    if cost_model not in (UNIT, DISTANCE):
        raise ValueError(f"unknown cost model {cost_model!r}")
    if len(init.registers) != cm.register_count:
        raise ValueError("register count mismatch")
    regs = list(init.registers)
    pc, unit, dist = init.pc, init.unit_cost, init.distance_cost
    prog = cm.program
    n = len(prog)
    stops = frozenset(stop_at)
    executed = 0
    while executed < fuel:
        if not 0 <= pc < n:
            raise InvalidProgram(f"pc {pc} escaped the program")
        ins = prog[pc]
        op = ins.op
        executed += 1
        unit += 1
        if op == INC:
            dist += regs[ins.reg] + 1
            regs[ins.reg] += 1
            pc += 1
        elif op == DEC:
            v = regs[ins.reg]
            dist += v + 1
            if v:
                regs[ins.reg] = v - 1
            pc += 1
        elif op == JZ:
            v = regs[ins.reg]
            dist += v + 1
            pc = ins.target if v == 0 else pc + 1
        elif op == JMP:
            dist += 1
            pc = ins.target
        else:
            dist += 1
            return RunResult(True, RegisterState(tuple(regs), pc, unit, dist), executed, unit, dist)
        if pc in stops:
            break
    return RunResult(False, RegisterState(tuple(regs), pc, unit, dist), executed, unit, dist)


# compilation

def _word_value(bits: Sequence[int]) -> int:
    return sum(b << i for i, b in enumerate(bits))


def _word_bits(value: int) -> tuple[int, ...]:
    return tuple((value >> i) & 1 for i in range(value.bit_length()))


def encode_config(c: TapeConfiguration, cm: CounterMachine | None = None) -> RegisterState:
    pc = cm.entries[c.state] if cm is not None else 0
    return RegisterState((_word_value(c.left), _word_value(c.right), 0), pc)


def decode_registers(rs: RegisterState, cm: CounterMachine, steps: int = 0) -> TapeConfiguration:
    by_pc = {pc: q for q, pc in cm.entries.items()}
    if rs.pc not in by_pc:
        raise ValueError(f"pc {rs.pc} is not a macro boundary")
    a, b, scratch = rs.registers
    if scratch:
        raise ValueError("scratch register not clear at macro boundary")
    return TapeConfiguration(_word_bits(a), _word_bits(b), by_pc[rs.pc], steps)


class _Assembler:
    def __init__(self):
        self.code: list = []
        self.labels: dict = {}
        self.fresh = 0

    def label(self, name):
        self.labels[name] = len(self.code)

    def new(self, stem):
        self.fresh += 1
        return (stem, self.fresh)

    def emit(self, op, reg=None, target=None):
        self.code.append((op, reg, target))

    def transfer(self, src, dst, factor=1):
        """dst += factor * src; src = 0."""
        top, done = self.new("xfer"), self.new("xfer_done")
        self.label(top)
        self.emit(JZ, src, done)
        self.emit(DEC, src)
        for _ in range(factor):
            self.emit(INC, dst)
        self.emit(JMP, None, top)
        self.label(done)

    def halve(self, src, dst, on_even, on_odd):
        """dst += src // 2, src = 0, then branch on the parity of the old src."""
        # the loop head is not the first instruction, so a block entry is never a jump target
        top = self.new("halve")
        self.emit(JZ, src, on_even)
        self.label(top)
        self.emit(DEC, src)
        self.emit(JZ, src, on_odd)
        self.emit(DEC, src)
        self.emit(INC, dst)
        self.emit(JZ, src, on_even)
        self.emit(JMP, None, top)

    def assemble(self, register_count, entries) -> CounterMachine:
        prog = [Instr(op, reg, self.labels[t] if t is not None else None)
                for op, reg, t in self.code]
        return CounterMachine(tuple(prog), register_count,
                              {q: self.labels[("state", q)] for q in entries})


def compile_tm_to_cm(tm: TuringMachine) -> CounterMachine:
    """Compile ``tm`` into a 3-counter machine that tracks it macro-step by macro-step.

    Each non-halting state gets a block that halves register 1 into the scratch
    register (its parity is the scanned bit), then rebuilds both words for the
    chosen transition with doubling/halving transfers through register 2.  Block
    entry pcs are exported as ``entries``; between two entries exactly one
    Turing-machine step is simulated.
    """
    A, B, S = 0, 1, 2
    asm = _Assembler()
    order = [tm.start] + [q for q in tm.states if q != tm.start]
    for q in order:
        asm.label(("state", q))
        if tm.is_halting(q):
            asm.emit(HALT)
            continue
        branch = {0: asm.new("read0"), 1: asm.new("read1")}
        asm.halve(B, S, branch[0], branch[1])
        for s in (0, 1):
            nq, w, mv = tm.delta[(q, s)]
            asm.label(branch[s])
            # here: B = 0, S = rest of right word
            if mv == RIGHT:
                asm.transfer(S, B)
                asm.transfer(A, S, 2)
                asm.transfer(S, A)
                if w:
                    asm.emit(INC, A)
                asm.emit(JMP, None, ("state", nq))
            else:
                asm.transfer(S, B, 2)
                if w:
                    asm.emit(INC, B)
                asm.transfer(B, S, 2)
                asm.transfer(S, B)
                even, odd = asm.new("pop0"), asm.new("pop1")
                asm.halve(A, S, even, odd)
                asm.label(odd)
                asm.emit(INC, B)
                asm.label(even)
                asm.transfer(S, A)
                asm.emit(JMP, None, ("state", nq))
    return asm.assemble(3, order)


def macro_step(cm: CounterMachine, rs: RegisterState, fuel: int = 10**9) -> RunResult:
    """Run from one state block entry to the next (or to Halt)."""
    return cm_run(cm, rs, fuel, stop_at=cm.entries.values())


def run_compiled(tm: TuringMachine, input_bits: Sequence[int] = (), fuel: int = 10**7,
                 cm: CounterMachine | None = None) -> RunResult:
    cm = cm or compile_tm_to_cm(tm)
    return cm_run(cm, encode_config(initial_config(tm, input_bits), cm), fuel)


def run_compiled_steps(tm: TuringMachine, input_bits: Sequence[int] = (), fuel: int = 1000,
                       cm: CounterMachine | None = None) -> RunResult:
    """Like :func:`tm_run` but on the compiled machine: ``fuel`` counts simulated TM steps.

    The run always stops on a block boundary, so the result decodes even when
    the machine never halts.
    """
    if fuel < 1:
        raise ValueError("fuel must be positive")
    cm = cm or compile_tm_to_cm(tm)
    by_pc = {pc: q for q, pc in cm.entries.items()}
    rs = encode_config(initial_config(tm, input_bits), cm)
    steps = 0
    while steps < fuel and by_pc[rs.pc] not in tm.halting:
        rs = macro_step(cm, rs).final
        steps += 1
    return RunResult(by_pc[rs.pc] in tm.halting, rs, steps, rs.unit_cost, rs.distance_cost)


@dataclass(frozen=True)
class SlowdownRow:
    input: tuple
    tm_steps: int
    cm_unit_cost: int
    cm_distance_cost: int


def slowdown_profile(tm: TuringMachine, inputs: Iterable[Sequence[int]], fuel: int,
                     cm_fuel: int = 10**8) -> list[SlowdownRow]:
    cm = compile_tm_to_cm(tm)
    rows = []
    for bits in sorted(tuple(b) for b in inputs):
        t = tm_run(tm, bits, fuel)
        if not t.halted:
            raise RuntimeError(f"input {bits} did not halt within {fuel} steps")
        r = run_compiled(tm, bits, cm_fuel, cm)
        if not r.halted:
            raise RuntimeError(f"compiled run of {bits} exhausted {cm_fuel} instructions")
        rows.append(SlowdownRow(bits, t.steps, r.unit_cost, r.distance_cost))
    return rows


# the diagonal of the x+x, x*x, x^x, x^^x, ... sequence

class _TooLarge:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "TooLarge"

    def __reduce__(self):
        return (_TooLarge, ())


TooLarge = _TooLarge()


def _digits(v: int) -> int:
    d = max(1, int(v.bit_length() * log10(2)))
    while v >= 10**d:
        d += 1
    while d > 1 and v < 10**(d - 1):
        d -= 1
    return d


def _hyper(k: int, x: int, y: int, budget: int):
    """x op_k y with op_1 = +, op_2 = *, op_3 = ^, op_4 = tetration, ..."""
    if k == 1:
        return x + y
    if k == 2:
        return x * y
    if k == 3:
        if x > 1 and (y.bit_length() > 1024 or y * log10(x) > budget + 1):
            return TooLarge
        v = x ** y
        return v if _digits(v) <= budget else TooLarge
    if y == 0:
        return 1
    acc = x
    for _ in range(y - 1):
        acc = _hyper(k - 1, x, acc, budget)
        if acc is TooLarge:
            return TooLarge
    return acc


def hyper_diagonal(i: int, digit_budget: int):
    """g(i) = f_i(i) where f_1(x) = x+x, f_2(x) = x*x, f_3(x) = x^x, f_4(x) = x^^x, ...

    f_k continues the pattern as f_k(x) = x op_k x with op_k the k-th
    hyperoperation.  Returns ``TooLarge`` once any intermediate value would have
    more than ``digit_budget`` decimal digits; hyperoperations are monotone so
    the final value would too.
    """
    if i < 1 or digit_budget < 1:
        raise ValueError("i and digit_budget must be positive")
    v = _hyper(i, i, i, digit_budget)
    if v is not TooLarge and _digits(v) > digit_budget:
        return TooLarge
    return v
