"""State-vector simulation of small reversible/interference circuits.

Basis index bit ``j`` is the value of memory element ``j``.  Ket labels are
written element 0 first, so ``|110>`` has elements 0 and 1 set.

Besides the floating-point simulator there is an exact one
(:func:`exact_amplitudes`) for circuits built from permutation gates, Hadamard
and phase flip: every amplitude is then an integer times 2^(-h/2), so Born
probabilities come out as exact fractions.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import sqrt
from typing import Callable, Sequence

import numpy as np

from .trials import bernoulli, run_trials


class WireMismatch(ValueError):
    pass


class ZeroNorm(ValueError):
    pass


class UnsupportedCircuit(ValueError):
    pass


ARITY = {"not": 1, "cnot": 2, "toffoli": 3, "fredkin": 3, "hadamard": 1, "phase_flip": 1}
PERMUTATION_KINDS = frozenset({"not", "cnot", "toffoli", "fredkin"})


@dataclass(frozen=True)
class Gate:
    kind: str
    wires: tuple

    def __post_init__(self):
        object.__setattr__(self, "wires", tuple(int(w) for w in self.wires))
        if self.kind not in ARITY:
            raise ValueError(f"unknown gate {self.kind!r}")
        if len(self.wires) != ARITY[self.kind]:
            raise WireMismatch(f"{self.kind} takes {ARITY[self.kind]} wires")
        if len(set(self.wires)) != len(self.wires) or min(self.wires) < 0:
            raise WireMismatch(f"wires must be distinct and non-negative: {self.wires}")

    def inverse(self) -> "Gate":
        return self  # every gate in the library is an involution

    def permute(self, index: np.ndarray) -> np.ndarray:
        """Image of each basis index under a permutation gate."""
        bit = lambda w: (index >> w) & 1
        w = self.wires
        if self.kind == "not":
            return index ^ (1 << w[0])
        if self.kind == "cnot":
            return index ^ (bit(w[0]) << w[1])
        if self.kind == "toffoli":
            return index ^ ((bit(w[0]) & bit(w[1])) << w[2])
        if self.kind == "fredkin":
            swap = bit(w[0]) & (bit(w[1]) ^ bit(w[2]))
            return index ^ (swap << w[1]) ^ (swap << w[2])
        raise TypeError(f"{self.kind} is not a permutation gate")


def Not(a): return Gate("not", (a,))
def ControlledNot(c, t): return Gate("cnot", (c, t))
def Toffoli(c1, c2, t): return Gate("toffoli", (c1, c2, t))
def Fredkin(c, a, b): return Gate("fredkin", (c, a, b))
def Hadamard(a): return Gate("hadamard", (a,))
def PhaseFlip(a): return Gate("phase_flip", (a,))


@dataclass(frozen=True, eq=False)
class StateVector:
    num_elements: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (2 ** self.num_elements,):
            raise ValueError("amplitude table must have 2^n entries")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, n: int, ket=0) -> "StateVector":
        """``ket`` is a basis index or a label such as ``"110"`` (element 0 first)."""
        if isinstance(ket, str):
            if len(ket) != n:
                raise ValueError("label length must equal element count")
            ket = sum(int(ch) << j for j, ch in enumerate(ket))
        amps = np.zeros(2 ** n, dtype=np.complex128)
        amps[ket] = 1
        return cls(n, amps)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def label(self, index: int) -> str:
        return "".join(str((index >> j) & 1) for j in range(self.num_elements))

    def allclose(self, other: "StateVector", atol: float = 1e-12) -> bool:
        return (self.num_elements == other.num_elements
                and np.allclose(self.amplitudes, other.amplitudes, rtol=0, atol=atol))


def apply_gate(s: StateVector, g: Gate) -> StateVector:
    n = s.num_elements
    if max(g.wires) >= n:
        raise WireMismatch(f"{g.kind} on wires {g.wires} but only {n} elements")
    idx = np.arange(2 ** n)
    amps = s.amplitudes
    if g.kind in PERMUTATION_KINDS:
        out = np.empty_like(amps)
        out[g.permute(idx)] = amps
    elif g.kind == "phase_flip":
        out = np.where((idx >> g.wires[0]) & 1, -amps, amps)
    else:
        m = 1 << g.wires[0]
        low = amps[(idx & m) == 0]
        high = amps[(idx & m) != 0]
        out = np.empty_like(amps)
        out[(idx & m) == 0] = (low + high) / sqrt(2)
        out[(idx & m) != 0] = (low - high) / sqrt(2)
    return StateVector(n, out)


@dataclass(frozen=True)
class Circuit:
    num_elements: int
    gates: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.wires) >= self.num_elements:
                raise WireMismatch(f"{g.kind} on wires {g.wires} exceeds {self.num_elements}")

    def __add__(self, other: "Circuit") -> "Circuit":
        return Circuit(max(self.num_elements, other.num_elements), self.gates + other.gates)

    def inverse(self) -> "Circuit":
        return Circuit(self.num_elements, tuple(g.inverse() for g in reversed(self.gates)))

    def remap(self, wires: Sequence[int], num_elements: int) -> "Circuit":
        """Relabel wire ``j`` as ``wires[j]`` inside a wider register."""
        return Circuit(num_elements, tuple(Gate(g.kind, tuple(wires[w] for w in g.wires))
                                           for g in self.gates))

    def run(self, s: StateVector) -> StateVector:
        return reduce(apply_gate, self.gates, s)

    def is_permutation(self) -> bool:
        return all(g.kind in PERMUTATION_KINDS for g in self.gates)

    def basis_map(self) -> np.ndarray:
        """Where each basis state goes; permutation circuits only."""
        if not self.is_permutation():
            raise UnsupportedCircuit("circuit contains interference gates")
        idx = np.arange(2 ** self.num_elements)
        for g in self.gates:
            idx = g.permute(idx)
        return idx

    def to_json(self) -> str:
        return json.dumps({"elements": self.num_elements,
                           "gates": [{"name": g.kind, "wires": list(g.wires)} for g in self.gates]},
                          sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        doc = json.loads(text)
        return cls(doc["elements"], tuple(Gate(g["name"], tuple(g["wires"])) for g in doc["gates"]))


def exact_amplitudes(circuit: Circuit, ket: int = 0) -> tuple[list[int], int]:
    """Run on a basis state with integer arithmetic.

    Returns ``(a, h)`` with true amplitudes ``a[i] / sqrt(2)**h``.
    """
    n = circuit.num_elements
    amps = [0] * (2 ** n)
    amps[ket] = 1
    h = 0
    for g in circuit.gates:
        if g.kind in PERMUTATION_KINDS:
            image = g.permute(np.arange(2 ** n))
            new = [0] * len(amps)
            for i, a in enumerate(amps):
                new[int(image[i])] = a
            amps = new
        elif g.kind == "phase_flip":
            m = 1 << g.wires[0]
            amps = [-a if i & m else a for i, a in enumerate(amps)]
        else:
            m = 1 << g.wires[0]
            new = [0] * len(amps)
            for i in range(len(amps)):
                if not i & m:
                    lo, hi = amps[i], amps[i | m]
                    new[i], new[i | m] = lo + hi, lo - hi
            amps = new
            h += 1
    return amps, h


def exact_probabilities(circuit: Circuit, ket: int = 0) -> list[Fraction]:
    amps, h = exact_amplitudes(circuit, ket)
    return [Fraction(a * a, 2 ** h) for a in amps]


@dataclass(frozen=True)
class BooleanOracle:
    table: tuple

    def __post_init__(self):
        table = tuple(int(v) for v in self.table)
        k = max(0, len(table) - 1).bit_length()
        if len(table) != 2 ** k or any(v not in (0, 1) for v in table):
            raise ValueError("truth table must be 0/1 values over a power-of-two domain")
        object.__setattr__(self, "table", table)

    @property
    def domain_bits(self) -> int:
        return (len(self.table) - 1).bit_length()

    def __call__(self, x: int) -> int:
        return self.table[x]


def _anf(table: Sequence[int]) -> list[int]:
    """Algebraic normal form by the binary Moebius transform: monomial masks with coefficient 1."""
    c = list(table)
    k = (len(c) - 1).bit_length()
    for i in range(k):
        for x in range(len(c)):
            if x >> i & 1:
                c[x] ^= c[x ^ (1 << i)]
    return [m for m, v in enumerate(c) if v]


def oracle_circuit(f: BooleanOracle) -> Circuit:
    """|x, b> -> |x, b xor f(x)> using Not, ControlledNot and Toffoli only.

    Inputs are wires ``0..k-1``, the output is wire ``k``.  For k >= 3 another
    ``k - 2`` ancilla wires follow; they must start at 0 and are returned to 0.
    One multi-controlled NOT is emitted per monomial of f's algebraic normal form.
    """
    k = f.domain_bits
    out = k
    anc = list(range(k + 1, k + 1 + max(0, k - 2)))
    gates: list = []
    for mask in _anf(f.table):
        ctrl = [i for i in range(k) if mask >> i & 1]
        if not ctrl:
            gates.append(Not(out))
        elif len(ctrl) == 1:
            gates.append(ControlledNot(ctrl[0], out))
        elif len(ctrl) == 2:
            gates.append(Toffoli(ctrl[0], ctrl[1], out))
        else:
            ladder = [Toffoli(ctrl[0], ctrl[1], anc[0])]
            for j in range(2, len(ctrl) - 1):
                ladder.append(Toffoli(ctrl[j], anc[j - 2], anc[j - 1]))
            gates += ladder
            gates.append(Toffoli(ctrl[-1], anc[len(ctrl) - 3], out))
            gates += reversed(ladder)
    return Circuit(k + 1 + len(anc), tuple(gates))


def _outcome_index(index, elements: Sequence[int]):
    return sum(((index >> w) & 1) << j for j, w in enumerate(elements))


def measure(s: StateVector, elements: Sequence[int], rng: np.random.Generator):
    """Born-rule readout of ``elements``; returns (bits in ``elements`` order, collapsed state)."""
    elements = tuple(elements)
    if elements and max(elements) >= s.num_elements:
        raise WireMismatch("measured element out of range")
    probs = s.probabilities()
    keys = _outcome_index(np.arange(len(probs)), elements)
    marginal = np.bincount(keys, weights=probs, minlength=2 ** len(elements))
    outcome = int(rng.choice(len(marginal), p=marginal / marginal.sum()))
    mass = marginal[outcome]
    if mass <= 0:
        raise ZeroNorm("selected outcome has zero probability")
    amps = np.where(keys == outcome, s.amplitudes, 0) / np.sqrt(mass)
    bits = tuple((outcome >> j) & 1 for j in range(len(elements)))
    return bits, StateVector(s.num_elements, amps)


def sample(s: StateVector, elements: Sequence[int], shots: int,
           rng: np.random.Generator) -> np.ndarray:
    """``shots`` independent readouts of the same prepared state, packed as integers."""
    probs = s.probabilities()
    keys = _outcome_index(np.arange(len(probs)), tuple(elements))
    marginal = np.bincount(keys, weights=probs, minlength=2 ** len(elements))
    return rng.choice(len(marginal), size=shots, p=marginal / marginal.sum())


@dataclass(frozen=True)
class Outcome:
    """``answer`` is None for a failed run; ``raw`` is the measured readout."""

    answer: object = None
    raw: tuple = ()

    @property
    def failed(self) -> bool:
        return self.answer is None


# Deutsch's two-branch xor

def deutsch_xor2_circuit(f: BooleanOracle) -> Circuit:
    """Index on wire 0, output on wire 1: H(index), oracle, H on both."""
    if len(f.table) != 2:
        raise ValueError("xor2 needs a function on two points")
    return Circuit(2, (Hadamard(0),) + oracle_circuit(f).gates + (Hadamard(0), Hadamard(1)))


def deutsch_xor2_state(f: BooleanOracle) -> StateVector:
    return deutsch_xor2_circuit(f).run(StateVector.basis(2))


def _read_xor2(index_bit: int, out_bit: int) -> Outcome:
    # output 1 is the pass flag; the index then holds f(0) xor f(1)
    return Outcome(index_bit if out_bit else None, (index_bit, out_bit))


def deutsch_xor2(f: BooleanOracle, rng: np.random.Generator) -> Outcome:
    bits, _ = measure(deutsch_xor2_state(f), (0, 1), rng)
    return _read_xor2(*bits)


def _xor2_sampler(f: BooleanOracle):
    state = deutsch_xor2_state(f)

    def draw(rng, n):
        reads = sample(state, (0, 1), n, rng)
        passed = (reads >> 1) & 1
        answers = reads & 1
        return passed.astype(bool), answers
    return draw


def deutsch_xor2_counts(f: BooleanOracle, trials: int, seed: int, workers: int = 1) -> dict:
    """Tally ``trials`` runs of the xor2 circuit: fails, answers, and answers equal to the xor."""
    draw = _xor2_sampler(f)
    truth = f(0) ^ f(1)

    def chunk(rng, n):
        passed, answers = draw(rng, n)
        return {"trials": n, "answers": int(passed.sum()),
                "correct": int((passed & (answers == truth)).sum())}
    return dict(run_trials(chunk, trials, seed, workers))


# N-fold parallelism

def parallel_success_probability(n: int) -> Fraction:
    if n < 1:
        raise ValueError("N must be at least 1")
    return Fraction(1, n * n - 2 * n + 2)


def expected_time_ratio(n: int) -> Fraction:
    """Expected parallel time over serial time for an N-fold computation (>= 1)."""
    return Fraction(n * n - 2 * n + 2, n)


def _xor_all(values) -> int:
    return reduce(lambda a, b: a ^ b, values, 0)


def _is_xor(combine: Callable | None, n: int) -> bool:
    if combine is None:
        return True
    for x in range(2 ** n):
        vals = [(x >> i) & 1 for i in range(n)]
        if int(combine(vals)) != _xor_all(vals):
            return False
    return True


SEMANTIC, CIRCUIT = "semantic", "circuit"


def parallel_run(n: int, values: Sequence, combine: Callable | None, rng: np.random.Generator,
                 mode: str = SEMANTIC) -> Outcome:
    """One single-processor run of an N-fold parallel computation.

    Semantic mode computes ``combine(values)`` classically and releases it with
    probability 1/(N^2 - 2N + 2).  Circuit mode interferes actual branches and
    exists only for xor with N = 2 or the N = 4 cascade.
    """
    values = list(values)
    if len(values) != n:
        raise ValueError("need one value per branch")
    if mode == SEMANTIC:
        combine = combine or _xor_all
        q = parallel_success_probability(n)
        ok = bool(bernoulli(rng, q, 1)[0])
        return Outcome(combine(values) if ok else None, (int(ok),))
    if mode != CIRCUIT:
        raise ValueError(f"unknown mode {mode!r}")
    if n not in (2, 4) or not _is_xor(combine, n):
        raise UnsupportedCircuit("circuit mode covers xor with N = 2 or N = 4 only")
    f = BooleanOracle(values)
    return deutsch_xor2(f, rng) if n == 2 else xor4_parallel(f, rng)


def semantic_counts(n: int, values: Sequence, combine: Callable | None, trials: int, seed: int,
                    workers: int = 1) -> dict:
    q = parallel_success_probability(n)

    def chunk(rng, m):
        return {"trials": m, "answers": int(bernoulli(rng, q, m).sum())}
    out = dict(run_trials(chunk, trials, seed, workers))
    out["value"] = (combine or _xor_all)(list(values))
    return out


def retry_estimate(counts: dict) -> float:
    """Mean number of runs per produced answer (the expected retries until success)."""
    return counts["trials"] / counts["answers"] if counts["answers"] else float("inf")


# four-way xor in three interference stages

def _pair_stage_circuit(f: BooleanOracle) -> Circuit:
    a = oracle_circuit(BooleanOracle(f.table[:2])).remap((0, 1), 4)
    b = oracle_circuit(BooleanOracle(f.table[2:])).remap((2, 3), 4)
    prep = Circuit(4, (Hadamard(0), Hadamard(2)))
    mix = Circuit(4, tuple(Hadamard(w) for w in range(4)))
    return prep + a + b + mix


def xor4_circuits(f: BooleanOracle) -> tuple[Circuit, Circuit]:
    """Stage-one circuit (both pairs at once) and the combining xor2 circuit it feeds.

    The second circuit depends on the pair results; it is built here for the
    values a successful first stage reports, which are always the true pair xors.
    """
    if len(f.table) != 4:
        raise ValueError("xor4 needs a function on four points")
    g = BooleanOracle((f(0) ^ f(1), f(2) ^ f(3)))
    return _pair_stage_circuit(f), deutsch_xor2_circuit(g)


def xor4_parallel(f: BooleanOracle, rng: np.random.Generator) -> Outcome:
    first, _ = xor4_circuits(f)
    (ia, oa, ib, ob), _ = measure(first.run(StateVector.basis(4)), (0, 1, 2, 3), rng)
    if not (oa and ob):
        return Outcome(None, (ia, oa, ib, ob))
    second = deutsch_xor2(BooleanOracle((ia, ib)), rng)
    return Outcome(second.answer, (ia, oa, ib, ob) + second.raw)


def xor4_counts(f: BooleanOracle, trials: int, seed: int, workers: int = 1) -> dict:
    first, _ = xor4_circuits(f)
    s1 = first.run(StateVector.basis(4))
    truth = _xor_all(f.table)

    def chunk(rng, n):
        reads = sample(s1, (0, 1, 2, 3), n, rng)
        passed = ((reads >> 1) & 1) & ((reads >> 3) & 1)
        ia, ib = reads & 1, (reads >> 2) & 1
        answers = correct = 0
        # the combining stage depends on the pair readings, so group by them
        for a in (0, 1):
            for b in (0, 1):
                sel = int(((ia == a) & (ib == b) & (passed == 1)).sum())
                if not sel:
                    continue
                ok, ans = _xor2_sampler(BooleanOracle((a, b)))(rng, sel)
                answers += int(ok.sum())
                correct += int((ok & (ans == truth)).sum())
        return {"trials": n, "answers": answers, "correct": correct}
    return dict(run_trials(chunk, trials, seed, workers))


# coNP by parallel AND over all assignments

@dataclass(frozen=True)
class ConpResult:
    outcome: Outcome
    assignments: int
    success_probability: Fraction
    expected_time_ratio: Fraction


def truth_table(formula, n: int) -> tuple:
    """Accept a truth table (index bit j = variable j) or a callable on a bit tuple."""
    if callable(formula):
        return tuple(int(bool(formula(tuple((x >> j) & 1 for j in range(n)))))
                     for x in range(2 ** n))
    table = tuple(int(bool(v)) for v in formula)
    if len(table) != 2 ** n:
        raise ValueError("truth table must have 2^n entries")
    return table


def conp_parallel_and(formula, n: int, rng: np.random.Generator) -> ConpResult:
    """Is ``formula`` a tautology?  One parallel run over all 2^n assignments."""
    if not 0 <= n <= 20:
        raise ValueError("n must be in 0..20")
    table = truth_table(formula, n)
    big_n = 2 ** n
    outcome = parallel_run(big_n, table, lambda vs: all(vs), rng)
    return ConpResult(outcome, big_n, parallel_success_probability(big_n), expected_time_ratio(big_n))


def conp_counts(formula, n: int, trials: int, seed: int, workers: int = 1) -> dict:
    table = truth_table(formula, n)
    return semantic_counts(2 ** n, table, lambda vs: all(vs), trials, seed, workers)


# fault tolerance

def fault_tolerance(n: int, r: int, p) -> tuple[Fraction, Fraction]:
    """(classical, quantum) success probabilities with N*R processors failing at rate p.

    Classically R processors share each of the N subtasks; each quantum processor
    runs all N branches and must also be lucky.
    """
    p = Fraction(p)
    if not 0 <= p <= 1 or n < 1 or r < 1:
        raise ValueError("need N, R >= 1 and 0 <= p <= 1")
    q = parallel_success_probability(n)
    classical = (1 - p ** r) ** n
    quantum = 1 - (1 - (1 - p) * q) ** (n * r)
    return classical, quantum


def fault_tolerance_monte_carlo(r: int, p, trials: int, seed: int, n: int = 2,
                                workers: int = 1) -> dict:
    """Simulate both schemes; quantum processors run the xor2 circuit."""
    if n != 2:
        raise UnsupportedCircuit("the circuit-backed simulation covers N = 2 only")
    p = Fraction(p)
    procs = n * r
    draw = _xor2_sampler(BooleanOracle((0, 1)))

    def chunk(rng, m):
        broken = bernoulli(rng, p, m * procs).reshape(m, procs)
        # classical: processor j works on subtask j // r
        alive = ~broken.reshape(m, n, r)
        classical = alive.any(axis=2).all(axis=1)
        lucky, answers = draw(rng, m * procs)
        good = ~broken & lucky.reshape(m, procs) & (answers.reshape(m, procs) == 1)
        quantum = good.any(axis=1)
        return {"trials": m, "classical": int(classical.sum()), "quantum": int(quantum.sum())}

    counts = dict(run_trials(chunk, trials, seed, workers))
    counts.setdefault("classical", 0)
    counts.setdefault("quantum", 0)
    return counts
