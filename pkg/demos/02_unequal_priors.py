"""
Unequal priors and the limits of the closed forms
=================================================

With q1 = 0.8 the noncontextual bound is the largest of four candidate
values. The quantum closed form also has a validity range in the priors,
which the numerical POVM search makes visible.
"""

import numpy as np

from contextual_qsd import (
    DiscriminationInstance,
    closed_form_attainable,
    f_candidate,
    nc_bound_grid_oracle,
    nc_bound_theorem1,
    non_enhancement_interval,
    povm_oracle,
    quantum_success_closed,
)

inst = DiscriminationInstance(0.8, 0.6)

# %%
# Candidate values at a few failure probabilities below q_min c = 0.12.
for Q in (0.0, 0.04, 0.08, 0.12):
    cands = {
        (x, name): f_candidate(inst, Q, x, z)
        for x in (1, 2)
        for name, z in (("0", 0.0), ("Q/q", Q / (inst.q1 if x == 1 else inst.q2)))
    }
    best = nc_bound_theorem1(inst, Q)
    brute = nc_bound_grid_oracle(inst, Q)
    row = "  ".join(f"f{x}({n})={v:.5f}" for (x, n), v in cands.items())
    print(f"Q={Q:.2f}  {row}  bound={best.value:.6f} grid={brute:.6f}")

# %%
rep = non_enhancement_interval(inst)
print("\nnon-enhancement interval:", [(round(a, 6), round(b, 6)) for a, b in rep.intervals])

# %%
# q1/q2 = 4 exceeds 1/c, so the interpolating quantum formula is not an
# attainable optimum here. The search returns a smaller, valid value.
print("closed form attainable:", closed_form_attainable(inst))
pair = inst.states()
for Q in np.linspace(0.0, 0.6, 7):
    res = povm_oracle((pair.rho1, pair.rho2), inst.q1, Q)
    closed = quantum_success_closed(inst, Q).success
    print(f"Q={Q:.1f}  formula={closed:.6f}  search={res.success:.6f}  diff={closed - res.success:.2e}")
