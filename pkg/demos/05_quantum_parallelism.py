"""Interference-based xor and its price.

The two-branch circuit either reports f(0) xor f(1) or admits failure; it is
never wrong.  Larger fan-outs succeed less often than they save, which is why
expected running time never improves.  Spreading work over unreliable
processors is where the trade pays off.
"""
from fractions import Fraction

from physcomp.quantum import (
    BooleanOracle, deutsch_xor2_counts, deutsch_xor2_state, expected_time_ratio, fault_tolerance,
    parallel_success_probability, xor4_counts,
)

for table in [(0, 0), (0, 1), (1, 0), (1, 1)]:
    s = deutsch_xor2_state(BooleanOracle(table))
    probs = {s.label(k): round(float(p), 12) for k, p in enumerate(s.probabilities()) if p > 1e-15}
    print(f"f={table}: outcome probabilities {probs}")

c = deutsch_xor2_counts(BooleanOracle((0, 1)), 100_000, seed=1)
print(f"\n10^5 runs: {c['answers']} answers, {c['correct']} correct")

for n in (2, 3, 4, 8):
    print(f"N={n}: success {parallel_success_probability(n)}, expected time ratio {expected_time_ratio(n)}")
c = xor4_counts(BooleanOracle((1, 0, 1, 1)), 100_000, seed=2)
print(f"four-way xor cascade: answer rate {c['answers'] / c['trials']:.4f} (exact 1/8 beats 1/10)")

classical, quantum = fault_tolerance(2, 2, Fraction(1, 2))
print(f"\nfault tolerance, N=R=2, p=1/2: classical {classical}, quantum {quantum}, "
      f"gain {quantum - classical}")
