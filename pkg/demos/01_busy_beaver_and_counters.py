"""Run the 2-state busy beaver, then run it again on a 3-counter machine.

The compiled machine stores each half of the tape as a number, so moving the
head means doubling or halving a register one unit at a time.  Watch the cost
per simulated step climb as the tape fills.
"""
from physcomp.corpus import MACHINES
from physcomp.machines import compile_tm_to_cm, decode_registers, run_compiled, slowdown_profile, tm_run

bb2 = MACHINES["bb2"]
r = tm_run(bb2, fuel=100)
print(f"bb2: {r.outcome} after {r.steps} steps with {r.final.ones()} ones on the tape")

cm = compile_tm_to_cm(bb2)
print(f"compiled to {len(cm.program)} counter instructions")
c = run_compiled(bb2, cm=cm)
print(f"counter run: {c.unit_cost} instructions, distance cost {c.distance_cost}")
print("decoded tape:", decode_registers(c.final, cm))

print("\nshuttle on 1^k: TM steps vs counter-machine instructions")
for row in slowdown_profile(MACHINES["shuttle"], [(1,) * k for k in range(1, 9)], 200):
    print(f"  k={len(row.input)}  tm={row.tm_steps:3d}  cm={row.cm_unit_cost:6d}  "
          f"per step={row.cm_unit_cost / row.tm_steps:8.1f}")
