"""A Turing machine as a generalized shift.

The head's state code and the scanned cell sit just right of the point; each
table entry rewrites that window and moves the point one cell.  Halting shows
up as an entry that leaves the address where it is.
"""
from physcomp.corpus import MACHINES
from physcomp.machines import initial_config
from physcomp.symbolic import at_rest, decode_address, encode_address, gshift_from_tm, gshift_step

tm = MACHINES["bb2"]
g = gshift_from_tm(tm)
a = encode_address(initial_config(tm), tm)
step = 0
while not at_rest(g, a):
    print(f"{step}: {a}  ->  {decode_address(a, tm, step)}")
    a, step = gshift_step(g, a), step + 1
print(f"{step}: at rest, tape holds {decode_address(a, tm).ones()} ones")
