"""
Information between infinite sequences
======================================

beta interleaves alpha with an independent gamma, so beta carries all of
alpha while alpha carries half of beta.
"""

from aidepth.seqlab import (
    Oracle, RandomPool, ZeroDilute, Zeros, dim_mutual_info, dim_profile,
    example_pair, im_star, levin_mi_profile,
)

alpha, beta = example_pair()
grid = [256, 512, 1024, 2048, 4096]
est = Oracle()

for b, a, name in ((beta, alpha, "beta:alpha"), (alpha, beta, "alpha:beta")):
    rep = im_star(b, a, est, grid)
    print(f"I*({name}) in [{rep.lower:.3f}, {rep.upper:.3f}]")

# same-index mutual information keeps growing
print(levin_mi_profile(alpha, beta, est, grid).values)

###############################################################################
# Dimension proxies and dimensional mutual information.

for gen in (Zeros(), RandomPool(7), ZeroDilute(RandomPool(7))):
    print(gen.id, round(dim_profile(gen, est, grid).tail_inf, 4))

print("I_dim(alpha, beta):", round(dim_mutual_info(alpha, beta, est, grid), 4))
