"""
Running the reference machine and enumerating its programs
==========================================================

Programs are an Elias-gamma instruction count followed by 3-bit opcodes.
"""

from aidepth.upm import assemble, run_bits

# FLIP, OUT, HALT writes a single 1
prog = assemble("FLIP", "OUT", "HALT")
print(prog, run_bits(prog, 10))

# a loop that never halts runs out of gas
print(run_bits(assemble("FLIP", "JZ", "NOOP", "JNZ", "HALT"), 50).status)

###############################################################################
# Exhaustive enumeration gives exact K^T and Q^T at a finite horizon.

from aidepth.enumerator import Horizon, enumerate_programs

table = enumerate_programs(Horizon(k_max=5, t_max=256))
print(len(table.records), "halting programs,", len(table.outputs()), "outputs")
print("Kraft sum:", table.kraft_sum())

for x in table.outputs()[:6]:
    print(f"{x!r:8} K={table.k_model(x):3d}  Q={table.q_model(x)}")

###############################################################################
# The coding spread is the largest gap between K(x) and -log2 Q(x).

spread = table.coding_spread()
print(f"coding spread {spread.bits:.3f} bits, attained at {spread.witness!r}")
