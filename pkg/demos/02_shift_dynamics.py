"""Exact shift-map dynamics on eventually periodic addresses.

Jumping a billion steps ahead costs a handful of modular operations.  Two
addresses that agree on their first few right-hand bits drift apart by an
exact factor of 3 per shift under the ternary embedding.
"""
from physcomp.symbolic import Address, divergence, embed, fast_forward, reaches_region

a = Address(right_pre=(1, 1, 0), right_per=(1, 0, 0, 1, 0, 1, 1))
print("address:", a)
for t in (0, 1, 10**9, 2**60):
    ff = fast_forward(a, t, (-4, 8))
    print(f"t={t:<20} window={''.join(map(str, ff.bits))} ops={ff.ops}")

b = Address(right_pre=(1, 1, 0, 1, 1), right_per=(1, 0, 0, 1, 0, 1, 1))
print("\nternary points:", [str(x) for x in embed(a)], "vs", [str(x) for x in embed(b)])
for k, d in enumerate(divergence(a, b, 3)):
    print(f"  after {k} shifts the distance is {d}")

print("\ndoes 111 ever appear at the point?", reaches_region(a, (1, 1, 1)))
print("does 0000 ever appear?", reaches_region(a, (0, 0, 0, 0)))
