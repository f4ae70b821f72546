"""Lower bounds on the halting probability of a small prefix-free machine.

Programs are bit strings ending in a HALT opcode, so no program extends
another and the 2^-length weights sum to at most 1.  More fuel or longer
programs can only raise the bound.  The last part reads bits of an unknown
probability off coin flips.
"""
from fractions import Fraction

import numpy as np

from physcomp.omega import (
    bernoulli_source, bit_error_probability, estimate_probability_bit, kraft_sum, omega_lower_bound,
)

print("Kraft sums:", {n: str(kraft_sum(n)) for n in (3, 8, 12, 16)})
for fuel in (1, 10, 100, 1000):
    b = omega_lower_bound(fuel, 16)
    print(f"fuel={fuel:<5} bound={b.value} ~ {float(b.value):.6f} from {b.contributors} programs")

p = Fraction(1, 3)
rng = np.random.default_rng(2024)
bits = [estimate_probability_bit(bernoulli_source(p), n, rng, c1=2.1, c2=6) for n in range(1, 5)]
print("\nbits of 1/3 from samples:", [e.bit for e in bits], "trials:", [e.trials for e in bits])
print("worst per-bit error probability:",
      max(bit_error_probability(p, n, 2.1, 6) for n in range(1, 5)))
