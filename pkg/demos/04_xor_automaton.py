"""Rule 90 from a single live cell, stepped and fast-forwarded.

Each step replaces a cell by the xor of its neighbours, so 2^k steps at once
is one xor at distance 2^k.  Rows are stored densely, so t is kept to a
few million.  The Sierpinski pattern falls out of the stepping.
"""
from physcomp.symbolic import CaRow, ca_fast_forward, ca_step

row = CaRow((1,))
for t in range(16):
    print(" " * (16 - t) + "".join("#" if c else "." for c in row.cells))
    row = ca_step(row)

for k in (10, 16, 20):
    out = ca_fast_forward(CaRow((1,)), 2**k, with_ops=True)
    print(f"t=2^{k}: live cells at {out.row.ones()}")
