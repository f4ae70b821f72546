"""Where a factorially divergent series stops improving.

With coefficients n! the term ratio is (n+1) alpha, so the terms shrink until
n+1 reaches 1/alpha and grow afterwards.  At the fine-structure coupling that
turning point is n = 137.
"""
from physcomp.perturbation import FINE_STRUCTURE, factorial_rule, minimal_term_index, partial_sums

s = factorial_rule(FINE_STRUCTURE)
res = minimal_term_index(s, 300)
print(f"alpha = {FINE_STRUCTURE} ~ {float(FINE_STRUCTURE):.10f}")
print(f"smallest term at n = {res.index}, size ~ {float(res.term):.3e}")
sums = partial_sums(s, 6)
for n, x in enumerate(sums):
    print(f"  partial sum through n={n}: {float(x):.15f}")
