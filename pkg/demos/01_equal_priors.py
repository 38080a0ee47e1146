"""
Equal priors: where measurement beats every noncontextual model
===============================================================

Two pure states with equal priors and confusability c = 0.6. For each fixed
failure probability Q we compare the best quantum success probability with
the largest value any preparation-noncontextual model can reach.
"""

import numpy as np

from contextual_qsd import (
    DiscriminationInstance,
    gap,
    nc_equal_prior_regional,
    non_enhancement_interval,
    ud_failure_threshold,
)

inst = DiscriminationInstance(0.5, 0.6)

# %%
# A coarse table first. Positive gap means the quantum strategy wins.
print(f"{'Q':>6} {'quantum':>9} {'nc':>9} {'gap':>10}  nc region")
for Q in np.linspace(0.0, 1.0, 11):
    p = gap(inst, Q)
    _, region = nc_equal_prior_regional(inst.c, Q)
    print(f"{Q:6.2f} {p.quantum:9.6f} {p.nc_bound:9.6f} {p.gap:+10.6f}  {region}")

# %%
# The quantum advantage disappears on one interval of Q. Its upper end is
# the unambiguous-discrimination threshold, where both models give 1 - Q.
rep = non_enhancement_interval(inst)
(lo, hi), = rep.intervals
print(f"\nno enhancement for {lo:.6f} <= Q <= {hi:.6f}")
print(f"threshold 2 sqrt(q1 q2 c) = {ud_failure_threshold(inst):.6f}")

# %%
# The interval moves right and widens as the states become more alike.
for c in (0.2, 0.4, 0.6, 0.8, 0.95):
    (lo, hi), = non_enhancement_interval(DiscriminationInstance(0.5, c)).intervals
    print(f"c={c:4.2f}: [{lo:.4f}, {hi:.4f}]")
