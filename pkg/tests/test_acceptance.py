"""Acceptance criteria, one test each.

Each test prints a single ``PASS``/``FAIL`` line (also visible under pytest's
capture) and then asserts.  ``python tests/test_acceptance.py`` runs them all
without pytest.
"""
import json
import random
import sys
import time
from fractions import Fraction
from io import StringIO
from contextlib import redirect_stdout

import numpy as np
import pytest

from conftest import corpus_addresses, dict_tape_run, random_machines
from physcomp import cli
from physcomp.corpus import MACHINES
from physcomp.machines import (
    TapeConfiguration, cm_run, compile_tm_to_cm, decode_registers, encode_config, macro_step,
    run_compiled_steps, slowdown_profile, tm_run, tm_step, DISTANCE,
)
from physcomp.omega import (
    bernoulli_source, estimate_probability_bit, kraft_sum, omega_lower_bound,
)
from physcomp.perturbation import FINE_STRUCTURE, factorial_rule, minimal_term_index, term
from physcomp.quantum import (
    BooleanOracle, deutsch_xor2_counts, deutsch_xor2_state, exact_probabilities,
    deutsch_xor2_circuit, fault_tolerance, fault_tolerance_monte_carlo, parallel_success_probability,
    retry_estimate, semantic_counts, xor4_counts, xor4_parallel,
)
from physcomp.symbolic import (
    Address, CaRow, ca_fast_forward, ca_step, decode_address, divergence, encode_address,
    fast_forward, gshift_from_tm, gshift_step, ops_bound, shift,
)

pytestmark = pytest.mark.acceptance


def report(number, title, ok, detail="", capsys=None):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}" + (f" ({detail})" if detail else "")
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    assert ok, line


def criterion_1():
    start = time.perf_counter()
    c, q = fault_tolerance(2, 2, Fraction(1, 2))
    exact = (c, q, q - c) == (Fraction(9, 16), Fraction(175, 256), Fraction(31, 256))
    mc = fault_tolerance_monte_carlo(2, Fraction(1, 2), 100_000, seed=1)
    rc, rq = mc["classical"] / mc["trials"], mc["quantum"] / mc["trials"]
    elapsed = time.perf_counter() - start
    ok = exact and abs(rc - 9 / 16) <= 0.01 and abs(rq - 175 / 256) <= 0.01 and elapsed < 10
    return ok, f"classical {rc:.4f}, quantum {rq:.4f}, {elapsed:.2f}s"


def criterion_2():
    start = time.perf_counter()
    ok, worst = True, 0.0
    for table in [(0, 0), (0, 1), (1, 0), (1, 1)]:
        f = BooleanOracle(table)
        probs = exact_probabilities(deutsch_xor2_circuit(f))
        ok &= sum(p for k, p in enumerate(probs) if not k & 2) == Fraction(1, 2)
        wrong = (1 ^ table[0] ^ table[1]) | 2
        worst = max(worst, abs(deutsch_xor2_state(f).amplitudes[wrong]))
    counts = deutsch_xor2_counts(BooleanOracle((0, 1)), 100_000, seed=2)
    fail = 1 - counts["answers"] / counts["trials"]
    elapsed = time.perf_counter() - start
    ok = ok and worst < 1e-12 and abs(fail - 0.5) <= 0.01 and elapsed < 10
    ok = ok and counts["correct"] == counts["answers"]
    return ok, f"fail rate {fail:.4f}, max wrong amplitude {worst:.1e}, {elapsed:.2f}s"


def criterion_3():
    start = time.perf_counter()
    formula = [parallel_success_probability(n) for n in (2, 3, 4)] == [
        Fraction(1, 2), Fraction(1, 5), Fraction(1, 10)]
    counts = semantic_counts(3, (1, 1, 0), None, 100_000, seed=3)
    rate, retries = counts["answers"] / counts["trials"], retry_estimate(counts)
    elapsed = time.perf_counter() - start
    ok = formula and abs(rate - 0.2) <= 0.01 and abs(retries - 5.0) <= 0.1 and elapsed < 10
    return ok, f"rate {rate:.4f}, retries {retries:.3f}, {elapsed:.2f}s"


def criterion_4():
    import itertools
    ok = Fraction(1, 8) > Fraction(1, 10)
    for table in itertools.product((0, 1), repeat=4):
        f = BooleanOracle(table)
        for seed in range(40):
            out = xor4_parallel(f, np.random.default_rng(seed))
            ok &= out.failed or out.answer == sum(table) % 2
    counts = xor4_counts(BooleanOracle((1, 0, 1, 1)), 100_000, seed=4)
    rate = counts["answers"] / counts["trials"]
    ok = ok and abs(rate - 0.125) <= 0.01 and counts["correct"] == counts["answers"]
    return ok, f"answer rate {rate:.4f}"


def _random_config(rng, tm):
    live = [q for q in tm.states if q not in tm.halting]
    return TapeConfiguration(tuple(rng.randint(0, 1) for _ in range(rng.randint(0, 7))),
                             tuple(rng.randint(0, 1) for _ in range(rng.randint(0, 7))),
                             rng.choice(live))


def criterion_5():
    # (a) busy beaver and corpus reproduction through the compiled counter machine
    _, steps, tape, _ = dict_tape_run(MACHINES["bb2"], (), 100)
    r = tm_run(MACHINES["bb2"], (), 100)
    ok_a = r.halted and r.steps == steps == 6 and r.final.ones() == sum(tape.values()) == 4
    corpus = ["bb2", "bb3", "write1", "shuttle", "append1", "loop", "bounce"]
    runs = 0
    for name in corpus:
        tm = MACHINES[name]
        cm = compile_tm_to_cm(tm)
        for bits in [(), (1,), (1, 1), (1, 0, 1), (1, 1, 1, 1)]:
            # unary registers double per step on a growing tape, so loopers get a short budget
            t = tm_run(tm, bits, 16)
            c = run_compiled_steps(tm, bits, 16, cm)
            ok_a &= c.halted == t.halted and c.steps == t.steps
            ok_a &= decode_registers(c.final, cm) == TapeConfiguration(
                t.final.left, t.final.right, t.final.state)
            runs += 1
    # (b) generalized-shift conjugacy and counter-machine macro-step conjugacy
    rng = random.Random(5)
    pairs, ok_b, ok_dist = 0, True, True
    for tm in random_machines(250, seed=5):
        g, cm = gshift_from_tm(tm), compile_tm_to_cm(tm)
        for _ in range(4):
            c = _random_config(rng, tm)
            nxt = tm_step(tm, c)
            ok_b &= decode_address(gshift_step(g, encode_address(c, tm)), tm) == TapeConfiguration(
                nxt.left, nxt.right, nxt.state)
            m = macro_step(cm, encode_config(c, cm))
            ok_b &= m.final.registers == encode_config(nxt).registers
            ok_dist &= m.distance_cost >= m.unit_cost
            pairs += 1
    # (c) slowdown strictly super-linear in tape content
    rows = slowdown_profile(MACHINES["shuttle"], [(1,) * k for k in range(1, 9)], 500)
    per_step = [row.cm_unit_cost / row.tm_steps for row in rows]
    ok_c = ok_dist and all(a < b for a, b in zip(per_step, per_step[1:]))
    ok_c &= all(row.cm_distance_cost >= row.cm_unit_cost for row in rows)
    ok = ok_a and ok_b and ok_c and pairs >= 1000 and len(corpus) >= 5
    return ok, f"{runs} corpus runs, {pairs} conjugacy pairs, cost/step {per_step[0]:.0f}->{per_step[-1]:.0f}"


def criterion_6():
    ok = True
    for a in corpus_addresses():
        cur = a
        for t in range(10_001):
            if fast_forward(a, t, (-6, 10)).bits != cur.window(-6, 10):
                ok = False
                break
            cur = shift(cur)
        t = 2 ** 60
        ok &= fast_forward(a, t, (-8, 8)).ops <= ops_bound(a, t, 16)
    rng = np.random.default_rng(6)
    for width in (1, 33, 512):
        row = CaRow(tuple(int(v) for v in rng.integers(0, 2, width)))
        cur = row
        checks = range(2 ** 12 + 1) if width == 512 else [0, 1, 2, 3, 100, 1023, 4095, 4096]
        wanted = set(checks)
        for t in range(2 ** 12 + 1):
            if t in wanted and ca_fast_forward(row, t) != cur:
                ok = False
            cur = ca_step(cur)
    for k in range(13):
        ok &= ca_fast_forward(CaRow((1,)), 2 ** k).ones() == [-(2 ** k), 2 ** k]
    return ok, "7 addresses x 10001 times, CA width 512 for every t <= 4096"


def criterion_7():
    rng = random.Random(7)
    ok, pairs = True, 0
    while pairs < 25:
        pre = tuple(rng.randint(0, 1) for _ in range(rng.randint(4, 9)))
        k = rng.randint(2, len(pre) - 1)
        flipped = pre[:k] + (1 - pre[k],) + pre[k + 1:]
        left = (tuple(rng.randint(0, 1) for _ in range(3)), (rng.randint(0, 1),))
        a, b = Address(*left, pre, (1, 0, 0)), Address(*left, flipped, (1, 0, 0))
        tern, dya = divergence(a, b, k, "ternary"), divergence(a, b, k, "dyadic")
        ok &= all(y == 3 * x for x, y in zip(tern, tern[1:]))
        ok &= all(y == 2 * x for x, y in zip(dya, dya[1:]))
        pairs += 1
    return ok and pairs >= 20, f"{pairs} pairs"


def criterion_8():
    ok = all(kraft_sum(length) <= 1 for length in range(1, 21))
    grid = {(f, m): omega_lower_bound(f, m).value for f in (1, 10, 100, 1000) for m in (4, 8, 12, 16)}
    for (f, m), v in grid.items():
        ok &= all(w >= v for (g, n), w in grid.items() if g >= f and n >= m)
    src = bernoulli_source(Fraction(1, 3))
    for seed in range(50):
        r = np.random.default_rng(seed)
        bits = [estimate_probability_bit(src, n, r, c1=2.1, c2=6).bit for n in range(1, 5)]
        ok &= bits == [0, 1, 0, 1]
    return ok, "Kraft to 20 bits, 4x4 monotone grid, 50 seeds with c1=2.1, c2=6"


def criterion_9():
    s = factorial_rule(FINE_STRUCTURE)
    res = minimal_term_index(s, 300)
    terms = [term(s, n) for n in range(301)]
    ok = res.index == 137
    ok &= all(a > b for a, b in zip(terms[:137], terms[1:138]))
    ok &= all(a <= b for a, b in zip(terms[137:], terms[138:]))
    return ok, f"n* = {res.index}"


def _cli(argv):
    buf = StringIO()
    with redirect_stdout(buf):
        code = cli.main(argv)
    return code, buf.getvalue()


def criterion_10():
    commands = [
        ["q", "fault", "--N", "2", "--R", "2", "--p", "1/2", "--trials", "60000"],
        ["q", "xor4", "--f", "0111", "--trials", "60000"],
        ["q", "conp", "--table", "1101", "--trials", "60000"],
        ["omega", "bitest", "--p", "1/3", "--bits", "3", "--c1", "1", "--c2", "8"],
        ["omega", "bound", "--fuel", "100", "--max-len", "12"],
        ["series", "truncate", "--alpha", "1/10", "--nmax", "20", "--format", "csv"],
    ]
    ok = True
    for argv in commands:
        outs = {_cli(argv + ["--seed", "99", "--workers", w]) for w in ("1", "1", "3", "8")}
        ok &= len(outs) == 1 and next(iter(outs))[0] == 0
    return ok, f"{len(commands)} experiments x 4 reruns"


CRITERIA = [
    (1, "fault tolerance exact and simulated", criterion_1),
    (2, "two-branch xor interference", criterion_2),
    (3, "parallel success formula and retries", criterion_3),
    (4, "four-way xor cascade", criterion_4),
    (5, "machine conjugacies and slowdown", criterion_5),
    (6, "fast-forward solvability", criterion_6),
    (7, "exact divergence rates", criterion_7),
    (8, "halting-probability machinery", criterion_8),
    (9, "series truncation point", criterion_9),
    (10, "byte-identical reruns", criterion_10),
]


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check, capsys):
    ok, detail = check()
    report(number, title, ok, detail, capsys)


if __name__ == "__main__":
    failed = 0
    for number, title, check in CRITERIA:
        try:
            report(number, title, *check())
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
