"""
Logical depth, computational depth and deficiency
=================================================

"""

from aidepth.enumerator import Horizon, enumerate_programs
from aidepth import measures

table = enumerate_programs(Horizon(6, 256))
x = "00"

# logical depth shrinks as the significance level b grows
print([measures.ldepth(table, x, b) for b in range(8)])

# computational depth shrinks as the time budget grows
steps = table.halt_steps(x)
print([(t, measures.depth_t(table, x, t)) for t in steps[:8]])

###############################################################################
# Both depths are deficiencies against time-bounded weights.

rep = measures.deficiency_identity_check(table, x, range(8), steps)
print("identity violations:", rep.violation_count, "part (b) gap:", rep.fitted_constant)

print("deficiency under the uniform measure:", measures.deficiency(table, x, measures.Uniform()))

###############################################################################
# Horizon-wide sweeps fit the additive constants.

part_i = measures.sweep(table, measures.theorem_part_i, range(1, 257))
part_ii = measures.theorem_part_ii_sweep(table)
print("fitted c:", part_i.fitted_constant, " fitted sigma:", part_ii.fitted_constant)
