"""
Dimensional depth and super-deep diagnostics
============================================

With the compressor, fewer passes play the role of a tighter time bound.
"""

from aidepth.enumerator import Horizon, enumerate_programs
from aidepth.seqlab import Compress, HaltingChar, ThueMorse, dim_depth_profile, super_deep_diag
from aidepth.timebounds import TimeFamily

grid = [512, 1024, 2048]
for passes in (1, 4):
    rep = dim_depth_profile(ThueMorse(), Compress(), passes, grid)
    print(passes, [round(v, 3) for v in rep.profile.values], "bound", round(rep.bound, 3))

###############################################################################
# Finite prefixes of a step-capped halting sequence against exact tables.
# Demonstrative only: no finite n certifies super-deepness.

table = enumerate_programs(Horizon(6, 256))
gen = HaltingChar(10)
n_grid = [n for n in range(1, 9) if gen.bits(n) in table]
rep = super_deep_diag(
    gen, table,
    [TimeFamily("const", s, minimum=0) for s in (0, 1, 2)],
    [TimeFamily("lin", 2), TimeFamily("const", 256)],
    n_grid,
)
for row in rep.rows[:6]:
    print(row["n"], row["s"], row["t"], row["ldepth"], row["depth"], row["mass"])
print("violations:", len(rep.violations))
