import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import dict_tape_run, random_machines
from physcomp.corpus import MACHINES
from physcomp.machines import (
    DEC, DISTANCE, HALT, INC, JMP, JZ, AlreadyHalted, CounterMachine, Instr, InvalidProgram,
    MachineFormatError, RegisterState, TapeConfiguration, TooLarge, TuringMachine, cm_run,
    compile_tm_to_cm, decode_registers, encode_config, hyper_diagonal, initial_config,
    macro_step, run_compiled, run_compiled_steps, slowdown_profile, tm_run, tm_step,
)


def test_write1_single_step(write1):
    c = tm_step(write1, initial_config(write1))
    assert c.state == "H" and c.steps == 1 and c.ones() == 1


def test_bb2_first_step(bb2):
    c = tm_step(bb2, initial_config(bb2))
    assert c.state == "B" and c.scanned == 0


def test_empty_right_word_reads_blank(bb2):
    c = TapeConfiguration((1, 1), (), "A")
    assert c.scanned == 0
    assert tm_step(bb2, c).state == "B"


def test_step_on_halted_raises(bb2):
    with pytest.raises(AlreadyHalted):
        tm_step(bb2, TapeConfiguration((), (), "H"))


def test_bb2_run_matches_dict_tape_oracle(bb2):
    state, steps, tape, _ = dict_tape_run(bb2, fuel=100)
    r = tm_run(bb2, (), 100)
    assert r.halted and r.steps == steps == 6
    assert r.final.ones() == sum(tape.values()) == 4


def test_fuel_exhaustion(write1, loop):
    assert tm_run(write1, (), 10).steps == 1
    r = tm_run(loop, (), 50)
    assert not r.halted and r.steps == 50 and r.outcome == "fuel_exhausted"


@pytest.mark.parametrize("name", sorted(MACHINES))
def test_two_word_tape_matches_oracle(name):
    tm = MACHINES[name]
    for bits in [(), (1,), (1, 1, 0, 1), (0, 1, 1)]:
        state, steps, tape, head = dict_tape_run(tm, bits, fuel=300)
        r = tm_run(tm, bits, 300)
        assert r.steps == steps and r.final.state == state
        cells = {head - 1 - i: b for i, b in enumerate(r.final.left)}
        cells.update({head + i: b for i, b in enumerate(r.final.right)})
        for pos in set(cells) | set(tape):
            assert cells.get(pos, 0) == tape.get(pos, 0)


def test_tm_run_deterministic(bb2):
    assert tm_run(bb2, (1, 0, 1), 40) == tm_run(bb2, (1, 0, 1), 40)


@pytest.mark.parametrize("left,right,regs", [
    ((1, 1), (1, 0, 1), (3, 5, 0)),
    ((), (), (0, 0, 0)),
    ((0, 1), (1,), (2, 1, 0)),
])
def test_encode_config(left, right, regs):
    assert encode_config(TapeConfiguration(left, right, "A")).registers == regs


def test_machine_validation():
    with pytest.raises(MachineFormatError):
        TuringMachine(("A", "H"), "A", {"H"}, {("A", 0): ("H", 1, "R")})
    with pytest.raises(MachineFormatError):
        TuringMachine(("A", "H"), "A", {"H"},
                      {("A", 0): ("H", 1, "R"), ("A", 1): ("H", 2, "R")})


@pytest.mark.parametrize("name", sorted(MACHINES))
def test_machine_formats_round_trip(name):
    tm = MACHINES[name]
    assert TuringMachine.from_text(tm.to_text()) == tm
    assert TuringMachine.from_json(tm.to_json()) == tm
    assert TuringMachine.load(tm.to_json()) == tm
    assert tm.to_text() == TuringMachine.from_text(tm.to_text()).to_text()


def test_listing_round_trip(bb2):
    cm = compile_tm_to_cm(bb2)
    back = CounterMachine.from_listing(cm.to_listing())
    assert back == cm
    assert back.to_listing() == cm.to_listing()


def test_cm_inc_halt_costs():
    cm = CounterMachine((Instr(INC, 0), Instr(HALT)), 3)
    r = cm_run(cm, RegisterState((0, 0, 0)), 10)
    assert r.halted and r.final.registers == (1, 0, 0)
    assert r.unit_cost == 2 and r.distance_cost == 2


def test_dec_at_zero_is_identity():
    cm = CounterMachine((Instr(DEC, 0), Instr(HALT)), 3)
    assert cm_run(cm, RegisterState((0, 0, 0)), 10).final.registers == (0, 0, 0)


def _doubler():
    # r0 -> 2*r0 via r2
    return CounterMachine((
        Instr(JZ, 0, 5), Instr(DEC, 0), Instr(INC, 2), Instr(INC, 2), Instr(JMP, None, 0),
        Instr(JZ, 2, 9), Instr(DEC, 2), Instr(INC, 0), Instr(JMP, None, 5),
        Instr(HALT),
    ), 3)


def test_doubling_distance_exceeds_unit():
    ratios = []
    for v in (1, 8, 64):
        r = cm_run(_doubler(), RegisterState((v, 0, 0)), 10**6, DISTANCE)
        assert r.final.registers == (2 * v, 0, 0)
        assert r.distance_cost > r.unit_cost
        ratios.append(r.distance_cost / r.unit_cost)
    assert ratios[0] < ratios[1] < ratios[2]


def test_pc_escape_is_invalid():
    cm = CounterMachine((Instr(INC, 0),), 1)
    with pytest.raises(InvalidProgram):
        cm_run(cm, RegisterState((0,)), 5)


def test_unresolved_label_rejected():
    with pytest.raises(InvalidProgram):
        CounterMachine((Instr(JMP, None, 3), Instr(HALT)), 1)


def test_compiled_write1(write1):
    r = run_compiled(write1)
    assert r.halted and r.final.registers == (1, 0, 0)


def test_compiled_write1_from_zero_registers_via_right_move(write1):
    # the TM writes its 1 then moves right, so the 1 lands in the left word
    tm_final = tm_run(write1, (), 10).final
    assert encode_config(tm_final).registers == (1, 0, 0)


@pytest.mark.parametrize("name", ["bb2", "bb3", "shuttle", "append1", "write1"])
@pytest.mark.parametrize("bits", [(), (1,), (1, 1, 1), (1, 0, 1)])
def test_compiled_machine_reproduces_run(name, bits):
    tm = MACHINES[name]
    t = tm_run(tm, bits, 500)
    cm = compile_tm_to_cm(tm)
    r = run_compiled(tm, bits, 10**7, cm)
    assert r.halted == t.halted
    assert decode_registers(r.final, cm) == TapeConfiguration(t.final.left, t.final.right, t.final.state)


@pytest.mark.parametrize("name", ["loop", "bounce"])
def test_compiled_looper_exhausts_fuel(name):
    r = run_compiled(MACHINES[name], (), 20_000)
    assert not r.halted and r.steps == 20_000


def test_macro_step_conjugacy_random():
    rng = random.Random(11)
    checked = 0
    for tm in random_machines(60, seed=3):
        cm = compile_tm_to_cm(tm)
        live = [q for q in tm.states if q not in tm.halting]
        for _ in range(6):
            c = TapeConfiguration(tuple(rng.randint(0, 1) for _ in range(rng.randint(0, 6))),
                                  tuple(rng.randint(0, 1) for _ in range(rng.randint(0, 6))),
                                  rng.choice(live))
            r = macro_step(cm, encode_config(c, cm))
            expect = tm_step(tm, c)
            assert r.final.registers == encode_config(expect).registers
            assert r.final.pc == cm.entries[expect.state]
            assert r.distance_cost >= r.unit_cost
            checked += 1
    assert checked == 360


def test_slowdown_profile_superlinear():
    tm = MACHINES["shuttle"]
    rows = slowdown_profile(tm, [(1,) * k for k in range(1, 9)], 200)
    assert [r.input for r in rows] == sorted(r.input for r in rows)
    steps = [r.tm_steps for r in rows]
    unit = [r.cm_unit_cost for r in rows]
    assert steps == [2 * k + 2 for k in range(1, 9)]
    # TM time grows by 2 per extra 1; compiled time roughly doubles
    for a, b in zip(unit, unit[1:]):
        assert b / a > 1.8
    per_step = [u / s for u, s in zip(unit, steps)]
    assert all(x < y for x, y in zip(per_step, per_step[1:]))
    assert all(r.cm_distance_cost >= r.cm_unit_cost for r in rows)


def test_slowdown_single_step_and_empty(write1):
    (row,) = slowdown_profile(write1, [()], 10)
    assert row.tm_steps == 1 and row.cm_unit_cost < 50
    assert slowdown_profile(write1, [], 10) == []


@given(regs=st.tuples(*[st.integers(0, 40)] * 3),
       prog=st.lists(st.tuples(st.sampled_from([INC, DEC, JZ, JMP]), st.integers(0, 2),
                               st.integers(0, 7)), min_size=1, max_size=7))
@settings(max_examples=200, deadline=None)
def test_registers_never_negative(regs, prog):
    n = len(prog) + 1
    body = [Instr(op, r if op != JMP else None, t % n if op in (JZ, JMP) else None)
            for op, r, t in prog]
    cm = CounterMachine(tuple(body) + (Instr(HALT),), 3)
    state = RegisterState(regs)
    for _ in range(30):
        r = cm_run(cm, state, 1)
        assert min(r.final.registers) >= 0
        assert r.distance_cost - state.distance_cost >= r.unit_cost - state.unit_cost
        if r.halted:
            break
        state = r.final


def test_hyper_diagonal_values():
    assert hyper_diagonal(1, 10) == 2
    assert hyper_diagonal(2, 10) == 4
    assert hyper_diagonal(3, 10) == 27
    assert hyper_diagonal(3, 1) is TooLarge
    assert hyper_diagonal(4, 10**6) is TooLarge
    assert hyper_diagonal(5, 10**6) is TooLarge


def test_hyper_diagonal_monotone():
    vals = [hyper_diagonal(i, 10**4) for i in range(1, 6)]
    finite = [v for v in vals if v is not TooLarge]
    assert finite == sorted(finite)
    # tetration stays below the budget for x = 2 (2^^2 = 4) and 3 (3^^3 has 13 digits)
    from physcomp.machines import _hyper
    assert _hyper(4, 2, 2, 10) == 4
    assert _hyper(4, 3, 3, 20) == 3 ** 27


@pytest.mark.parametrize("name", sorted(MACHINES))
def test_step_counted_compiled_run_matches(name):
    tm = MACHINES[name]
    cm = compile_tm_to_cm(tm)
    for fuel in (1, 5, 12):
        t = tm_run(tm, (1, 0, 1), fuel)
        r = run_compiled_steps(tm, (1, 0, 1), fuel, cm)
        assert (r.halted, r.steps) == (t.halted, t.steps)
        assert decode_registers(r.final, cm) == TapeConfiguration(t.final.left, t.final.right, t.final.state)
